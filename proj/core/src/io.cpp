#include "u21/io.hpp"

#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace u21 {

namespace {

struct Entry {
  std::string value;
  int line = 0, col = 0;  // of the value
  int key_col = 0;
};

struct Section {
  int line = 0;
  std::map<std::string, Entry> keys;
};

const std::set<std::string> kFieldKeys = {"p", "ramified", "precision"};
const std::set<std::string> kStratumKeys = {"type",  "basis", "lambda",  "beta",
                                            "beta1", "beta2", "beta3",   "lattice",
                                            "sigma_generic"};

size_t skip_ws(const std::string& s, size_t i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  return i;
}

std::string trim(const std::string& s) {
  const size_t b = skip_ws(s, 0);
  size_t e = s.size();
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

std::map<std::string, Section> split_sections(const std::string& text) {
  std::map<std::string, Section> out;
  Section* cur = nullptr;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string body = raw.substr(0, raw.find('#'));
    const size_t start = skip_ws(body, 0);
    if (trim(body).empty()) continue;
    const int col = int(start) + 1;
    if (body[start] == '[') {
      const size_t close = body.find(']', start);
      if (close == std::string::npos) throw ParseError("unterminated section header", line, col);
      const std::string name = trim(body.substr(start + 1, close - start - 1));
      if (name != "field" && name != "stratum")
        throw ParseError("unknown section [" + name + "]", line, col);
      if (out.count(name)) throw ParseError("duplicate section [" + name + "]", line, col);
      if (!trim(body.substr(close + 1)).empty())
        throw ParseError("trailing text after section header", line, int(close) + 2);
      cur = &out[name];
      cur->line = line;
      continue;
    }
    const size_t eq = body.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line, col);
    if (!cur) throw ParseError("key outside of a section", line, col);
    const std::string key = trim(body.substr(0, eq));
    if (key.empty()) throw ParseError("empty key", line, col);
    const size_t vstart = skip_ws(body, eq + 1);
    const std::string value = trim(body.substr(eq + 1));
    if (value.empty()) throw ParseError("empty value for '" + key + "'", line, int(eq) + 2);
    if (cur->keys.count(key)) throw ParseError("duplicate key '" + key + "'", line, col);
    cur->keys[key] = {value, line, int(vstart) + 1, col};
  }
  return out;
}

// Wraps value conversion so errors point at the value.
template <class Fn>
auto convert(const Entry& e, Fn&& fn) -> decltype(fn(e.value)) {
  try {
    return fn(e.value);
  } catch (const ParseError& err) {
    if (err.line > 0) throw;
    throw ParseError(err.what(), e.line, e.col);
  } catch (const Error& err) {
    throw ParseError(err.what(), e.line, e.col);
  } catch (const std::exception& err) {
    throw ParseError(err.what(), e.line, e.col);
  }
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "yes") return true;
  if (v == "false" || v == "no") return false;
  throw ParseError("expected true or false, got '" + v + "'");
}

int64_t parse_int(const std::string& v) {
  size_t used = 0;
  const long long x = std::stoll(v, &used);
  if (used != v.size()) throw ParseError("expected an integer, got '" + v + "'");
  return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

Matrix parse_matrix(const Field& f, const std::string& v) {
  if (v.size() < 2 || v.front() != '[' || v.back() != ']')
    throw ParseError("expected a matrix literal [a, b; c, d]");
  std::vector<std::vector<ExtElement>> rows;
  for (const auto& row : split(v.substr(1, v.size() - 2), ';')) {
    std::vector<ExtElement> r;
    for (const auto& x : split(row, ',')) r.push_back(parse_ext(f, x));
    if (!rows.empty() && r.size() != rows[0].size()) throw ParseError("ragged matrix literal");
    rows.push_back(std::move(r));
  }
  return Matrix::from_rows(rows);
}

std::string emit_matrix(const Matrix& m) {
  std::string s = "[";
  for (int i = 0; i < m.rows(); ++i) {
    if (i) s += "; ";
    for (int j = 0; j < m.cols(); ++j) {
      if (j) s += ", ";
      s += format_ext(m(i, j));
    }
  }
  return s + "]";
}

const Entry& need(const Section& s, const std::string& name, const std::string& key) {
  auto it = s.keys.find(key);
  if (it == s.keys.end())
    throw ParseError("missing key '" + key + "' in [" + name + "]", s.line, 1);
  return it->second;
}

void reject_unknown(const Section& s, const std::set<std::string>& allowed) {
  for (const auto& [k, e] : s.keys)
    if (!allowed.count(k)) throw ParseError("unknown key '" + k + "'", e.line, e.key_col);
}

}  // namespace

Stratum parse_stratum_file(const std::string& text) {
  const auto sections = split_sections(text);
  if (!sections.count("field")) throw ParseError("missing [field] section", 1, 1);
  const Section& fs = sections.at("field");
  reject_unknown(fs, kFieldKeys);

  PrimeConfig cfg;
  cfg.p = convert(need(fs, "field", "p"), parse_int);
  cfg.ramified = convert(need(fs, "field", "ramified"), parse_bool);
  cfg.precision = default_precision();
  if (fs.keys.count("precision")) cfg.precision = int(convert(fs.keys.at("precision"), parse_int));
  const Entry& pe = need(fs, "field", "p");
  convert(pe, [&](const std::string&) {
    if (!is_prime(cfg.p) || cfg.p == 2) throw ParseError("p must be an odd prime");
    cfg.nonsquare_unit = smallest_nonresidue(cfg.p);
    return 0;
  });
  const FieldPtr f = convert(pe, [&](const std::string&) { return Field::make(cfg); });
  const Field& F = *f;

  if (!sections.count("stratum")) throw ParseError("missing [stratum] section", 1, 1);
  const Section& ss = sections.at("stratum");
  reject_unknown(ss, kStratumKeys);
  const Entry& te = need(ss, "stratum", "type");
  const TypeTag type = convert(te, [](const std::string& v) { return parse_type_tag(v); });
  auto has = [&](const std::string& k) { return ss.keys.count(k) > 0; };
  auto ext = [&](const std::string& k) {
    return convert(need(ss, "stratum", k), [&](const std::string& v) { return parse_ext(F, v); });
  };
  auto mat = [&](const std::string& k) {
    return convert(need(ss, "stratum", k), [&](const std::string& v) { return parse_matrix(F, v); });
  };
  const std::string lattice = has("lattice") ? ss.keys.at("lattice").value : "";

  bool witt = false;
  if (has("basis")) {
    const Entry& be = ss.keys.at("basis");
    witt = convert(be, [](const std::string& v) {
      if (v == "witt") return true;
      if (v == "orthogonal") return false;
      throw ParseError("basis must be orthogonal or witt");
    });
  } else {
    witt = !has("lambda") && type != TypeTag::D;
  }
  std::vector<BaseElement> lambdas;
  if (has("lambda")) {
    const Entry& le = ss.keys.at("lambda");
    if (witt) throw ParseError("lambda is only meaningful for an orthogonal basis", le.line, le.col);
    lambdas = convert(le, [&](const std::string& v) {
      std::vector<BaseElement> out;
      for (const auto& x : split(v, ',')) out.push_back(parse_base(F, x));
      if (out.size() != 3) throw ParseError("lambda needs three entries");
      return out;
    });
  } else if (!witt) {
    need(ss, "stratum", "lambda");
  }

  switch (type) {
    case TypeTag::D:
      if (witt) throw ParseError("type D is given in an orthogonal basis", te.line, te.col);
      return make_type_d(f, lambdas, {ext("beta1"), ext("beta2"), ext("beta3")});
    case TypeTag::C:
      return witt ? make_type_c_witt(f, ext("beta1"), ext("beta2"), lattice)
                  : make_type_c(f, lambdas, ext("beta1"), ext("beta2"), lattice);
    case TypeTag::B: {
      const Matrix b2 = mat("beta2");
      if (b2.rows() != 2 || b2.cols() != 2) {
        const Entry& e = ss.keys.at("beta2");
        throw ParseError("beta2 must be a 2x2 matrix", e.line, e.col);
      }
      return witt ? make_type_b_witt(f, ext("beta1"), b2) : make_type_b(f, lambdas, ext("beta1"), b2);
    }
    case TypeTag::A: {
      const Matrix b = mat("beta");
      if (b.rows() != 3 || b.cols() != 3) {
        const Entry& e = ss.keys.at("beta");
        throw ParseError("beta must be a 3x3 matrix", e.line, e.col);
      }
      return make_type_a(f, witt ? std::vector<BaseElement>{} : lambdas, b);
    }
    case TypeTag::depth_zero: {
      bool sg = true;
      if (has("sigma_generic")) sg = convert(ss.keys.at("sigma_generic"), parse_bool);
      return make_depth_zero(f, lattice.empty() ? "L1" : lattice, sg);
    }
  }
  throw ParseError("unreachable type", te.line, te.col);
}

std::string emit_stratum_file(const Stratum& s) {
  const Field& f = s.f();
  std::ostringstream o;
  o << "[field]\n"
    << "p = " << f.p() << "\n"
    << "ramified = " << (f.ramified() ? "true" : "false") << "\n"
    << "precision = " << f.N() << "\n\n"
    << "[stratum]\n"
    << "type = " << to_string(s.type) << "\n";
  const bool witt = s.space.kind == BasisKind::witt;
  if (s.type != TypeTag::depth_zero) {
    o << "basis = " << (witt ? "witt" : "orthogonal") << "\n";
    if (!witt)
      o << "lambda = " << format_base(s.space.gram(0, 0).a()) << ", "
        << format_base(s.space.gram(1, 1).a()) << ", " << format_base(s.space.gram(2, 2).a())
        << "\n";
  }
  switch (s.type) {
    case TypeTag::D:
      for (int i = 0; i < 3; ++i) o << "beta" << i + 1 << " = " << format_ext(s.scalar(i)) << "\n";
      break;
    case TypeTag::C:
      o << "beta1 = " << format_ext(s.scalar(0)) << "\n"
        << "beta2 = " << format_ext(s.scalar(1)) << "\n";
      break;
    case TypeTag::B:
      o << "beta1 = " << format_ext(s.scalar(0)) << "\n"
        << "beta2 = " << emit_matrix(s.component(1)) << "\n";
      break;
    case TypeTag::A:
      o << "beta = " << emit_matrix(s.beta) << "\n";
      break;
    case TypeTag::depth_zero:
      o << "sigma_generic = " << (s.sigma_generic ? "true" : "false") << "\n";
      break;
  }
  if (!s.lattice_key.empty()) o << "lattice = " << s.lattice_key << "\n";
  return o.str();
}

OutputFormat parse_output_format(const std::string& s) {
  if (s == "text") return OutputFormat::text;
  if (s == "machine" || s == "json") return OutputFormat::machine;
  throw InvalidConfig("unknown output format '" + s + "'");
}

namespace {

using nlohmann::json;

json witness_json(const Witness& w) {
  json j;
  j["point"] = json::array();
  for (const auto& c : w.point) j["point"].push_back(format_base(c));
  j["residual_level"] = w.residual_level;
  if (w.certificate) {
    const auto& c = *w.certificate;
    j["certificate"] = {{"minor_rows", c.minor_rows},
                        {"minor_cols", c.minor_cols},
                        {"minor_valuation", c.minor_valuation},
                        {"residual_level", c.residual_level},
                        {"lifted_level", c.lifted_level}};
  }
  return j;
}

Witness witness_from(const json& j, const Field& f) {
  Witness w;
  const auto& pt = j.at("point");
  if (pt.size() != size_t(kVars)) throw ParseError("witness point needs six coordinates");
  for (int i = 0; i < kVars; ++i) w.point[size_t(i)] = parse_base(f, pt[size_t(i)].get<std::string>());
  w.residual_level = j.at("residual_level").get<int64_t>();
  if (j.contains("certificate")) {
    const auto& c = j.at("certificate");
    HenselCertificate h;
    h.minor_rows = c.at("minor_rows").get<std::array<int, 2>>();
    h.minor_cols = c.at("minor_cols").get<std::array<int, 2>>();
    h.minor_valuation = c.at("minor_valuation").get<int64_t>();
    h.residual_level = c.at("residual_level").get<int64_t>();
    h.lifted_level = c.at("lifted_level").get<int64_t>();
    w.certificate = h;
  }
  return w;
}

}  // namespace

std::string emit_report(const ClassificationReport& r, OutputFormat fmt) {
  if (fmt == OutputFormat::machine) {
    json j;
    j["verdict"] = to_string(r.verdict);
    j["xbeta"] = to_string(r.xbeta);
    j["case_path"] = json::array();
    for (const auto& s : r.case_path)
      j["case_path"].push_back(
          {{"lemma", s.lemma}, {"rule", s.rule}, {"inputs", s.inputs}, {"outcome", s.outcome}});
    if (r.witness) j["witness"] = witness_json(*r.witness);
    return j.dump(2) + "\n";
  }
  std::ostringstream o;
  o << "verdict: " << to_string(r.verdict) << "\n"
    << "xbeta: " << to_string(r.xbeta) << "\n";
  for (const auto& s : r.case_path)
    o << "step " << s.lemma << " | " << s.rule << " | " << s.inputs << " | " << s.outcome << "\n";
  if (r.witness) o << "witness:\n" << format_witness(*r.witness);
  return o.str();
}

ClassificationReport parse_report(const std::string& machine, const FieldPtr& f) {
  json j;
  try {
    j = json::parse(machine);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  try {
    ClassificationReport r;
    r.verdict = parse_verdict(j.at("verdict").get<std::string>());
    r.xbeta = parse_xstatus(j.at("xbeta").get<std::string>());
    for (const auto& s : j.at("case_path"))
      r.case_path.push_back({s.at("lemma").get<std::string>(), s.at("rule").get<std::string>(),
                             s.at("inputs").get<std::string>(), s.at("outcome").get<std::string>()});
    if (j.contains("witness")) r.witness = witness_from(j.at("witness"), *f);
    return r;
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

bool same_report(const ClassificationReport& a, const ClassificationReport& b) {
  if (a.verdict != b.verdict || a.xbeta != b.xbeta) return false;
  if (a.case_path.size() != b.case_path.size()) return false;
  for (size_t i = 0; i < a.case_path.size(); ++i) {
    const auto &x = a.case_path[i], &y = b.case_path[i];
    if (x.lemma != y.lemma || x.rule != y.rule || x.inputs != y.inputs || x.outcome != y.outcome)
      return false;
  }
  if (a.witness.has_value() != b.witness.has_value()) return false;
  if (!a.witness) return true;
  const Witness &u = *a.witness, &v = *b.witness;
  if (u.residual_level != v.residual_level) return false;
  for (int i = 0; i < kVars; ++i)
    if (format_base(u.point[size_t(i)]) != format_base(v.point[size_t(i)])) return false;
  if (u.certificate.has_value() != v.certificate.has_value()) return false;
  if (!u.certificate) return true;
  const auto &c = *u.certificate, &d = *v.certificate;
  return c.minor_rows == d.minor_rows && c.minor_cols == d.minor_cols &&
         c.minor_valuation == d.minor_valuation && c.residual_level == d.residual_level &&
         c.lifted_level == d.lifted_level;
}

}  // namespace u21
