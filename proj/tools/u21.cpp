// u21: classify strata, search 𝔛_β(F0), fuzz the criteria and run the lemma suites.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "u21/io.hpp"
#include "u21/lattice.hpp"
#include "u21/suites.hpp"

namespace {

enum Exit { kOk = 0, kInternal = 1, kValidation = 2, kCounterexample = 3 };

struct Config {
  std::string input;
  int depth = 12;
  uint64_t seed = 1;
  int64_t trials = 0;  // 0: command default
  int threads = 1;
  std::string format = "text";
  bool witness = false;
  // filtration-table
  std::string lattice;
  bool ramified = false;
  int64_t from = 0, to = 7;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw u21::InvalidConfig("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Parses and validates; prints the violations and returns false on an invalid stratum.
bool load(const Config& cfg, u21::Stratum& s) {
  s = u21::parse_stratum_file(read_file(cfg.input));
  const auto v = u21::validate(s);
  for (const auto& msg : v) std::cerr << "violation: " << msg << "\n";
  return v.empty();
}

int cmd_classify(const Config& cfg) {
  u21::Stratum s;
  if (!load(cfg, s)) return kValidation;
  u21::ClassifyOptions opt;
  opt.search_witness = cfg.witness;
  opt.search.depth = cfg.depth;
  opt.search.threads = cfg.threads;
  const auto r = u21::classify_genericity(s, opt);
  std::cout << u21::emit_report(r, u21::parse_output_format(cfg.format));
  return kOk;
}

int cmd_search(const Config& cfg) {
  u21::Stratum s;
  if (!load(cfg, s)) return kValidation;
  const auto crit = u21::criterion_status(s);
  const auto sr = u21::brute_search(u21::assemble_system(s), {cfg.depth, cfg.threads});
  const bool certified = sr.witness && sr.witness->certificate;
  std::cout << "criterion: " << u21::to_string(crit.status) << "\n"
            << "search: " << (certified ? "certified witness" : "no certified witness") << " (depth "
            << cfg.depth << (sr.exhausted ? ", exhausted" : "") << ")\n";
  if (sr.witness) std::cout << u21::format_witness(*sr.witness);
  if (crit.status == u21::XStatus::Empty && certified) return kCounterexample;
  return kOk;
}

int cmd_fuzz(const Config& cfg) {
  u21::FuzzOptions opt;
  opt.seed = cfg.seed;
  if (cfg.trials) opt.trials = cfg.trials;
  opt.threads = cfg.threads;
  opt.depth = cfg.depth;
  opt.escalate_depth = std::max(cfg.depth, 16);
  const auto o = u21::run_fuzz(opt);
  std::cout << u21::format_fuzz(o);
  return o.hard_failures ? kCounterexample : kOk;
}

int cmd_filtration(const Config& cfg) {
  const auto L = u21::catalog_sequence(cfg.lattice, cfg.ramified);
  std::cout << "# " << L.name << (cfg.ramified ? " ramified" : " unramified")
            << ": n | exponents of ã_n | U_der level\n";
  for (int64_t n = cfg.from; n <= cfg.to; ++n) {
    const auto m = u21::hom_filtration(L, n);
    std::cout << n << " |";
    for (size_t i = 0; i < m.vals.size(); ++i) {
      std::cout << (i ? "; " : " ");
      for (size_t j = 0; j < m.vals[i].size(); ++j) std::cout << (j ? " " : "") << m.vals[i][j];
    }
    std::cout << " | " << u21::uder_level(L, n, cfg.ramified) << "\n";
  }
  return kOk;
}

int cmd_verify(const Config& cfg) {
  u21::SuiteOptions opt;
  opt.seed = cfg.seed;
  if (cfg.trials) opt.trials = cfg.trials;
  opt.threads = cfg.threads;
  bool ok = true;
  for (const auto& r : u21::verify_lemmas(opt)) {
    std::cout << r.name << ": " << (r.ok() ? "pass" : "FAIL") << " (passed " << r.passed
              << ", skipped " << r.skipped << ", failed " << r.failed << ")\n";
    if (!r.first_failure.empty()) std::cout << "counterexample, " << r.first_failure;
    ok = ok && r.ok();
  }
  return ok ? kOk : kCounterexample;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Genericity of cuspidal representations of U(2,1) from skew semisimple strata"};
  app.require_subcommand(1);
  Config cfg;

  auto add_depth = [&](CLI::App* c) {
    c->add_option("--depth", cfg.depth, "search depth")->check(CLI::Range(4, 32));
  };
  auto add_threads = [&](CLI::App* c) {
    c->add_option("--threads", cfg.threads, "worker threads")->check(CLI::Range(1, 256));
  };
  auto add_trials = [&](CLI::App* c) {
    c->add_option("--seed", cfg.seed, "random seed");
    c->add_option("--trials", cfg.trials, "number of trials")->check(CLI::Range(int64_t{1}, int64_t{1} << 40));
  };

  auto* classify = app.add_subcommand("classify", "classify a stratum file");
  classify->add_option("input", cfg.input, "stratum file")->required();
  classify->add_option("--format", cfg.format, "text or machine")
      ->check(CLI::IsMember({"text", "machine", "json"}));
  classify->add_flag("--witness", cfg.witness, "attach a certified witness when non-empty");
  add_depth(classify);
  add_threads(classify);

  auto* search = app.add_subcommand("search-xbeta", "search 𝔛_β(F0) for a certified point");
  search->add_option("input", cfg.input, "stratum file")->required();
  add_depth(search);
  add_threads(search);

  auto* fuzz = app.add_subcommand("fuzz", "cross-check criterion_status against the search");
  add_trials(fuzz);
  add_depth(fuzz);
  add_threads(fuzz);

  auto* table = app.add_subcommand("filtration-table", "exponents of ã_n(Λ) and U_der levels");
  table->add_option("lattice", cfg.lattice, "L1, L2 or L3")->required();
  table->add_flag("--ramified", cfg.ramified, "ramified F/F0");
  table->add_option("--from", cfg.from, "first n");
  table->add_option("--to", cfg.to, "last n");

  auto* verify = app.add_subcommand("verify-lemmas", "run the lemma verification suites");
  add_trials(verify);
  add_threads(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*classify) return cmd_classify(cfg);
    if (*search) return cmd_search(cfg);
    if (*fuzz) return cmd_fuzz(cfg);
    if (*table) return cmd_filtration(cfg);
    if (*verify) return cmd_verify(cfg);
  } catch (const u21::ParseError& e) {
    std::cerr << cfg.input << ":" << e.what() << "\n";
    return kValidation;
  } catch (const u21::UnsupportedConfiguration& e) {
    std::cerr << "unsupported configuration: " << e.what() << "\n";
    return kValidation;
  } catch (const u21::InvalidConfig& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
