#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "u21/io.hpp"
#include "u21/sampler.hpp"

using namespace u21;
using testing::field;

namespace {

std::string read(const std::string& name) {
  std::ifstream in(std::string(U21_TEST_DATA) + "/" + name);
  REQUIRE(in);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ParseError parse_error(const std::string& text) {
  try {
    parse_stratum_file(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("no ParseError for:\n" << text);
  return ParseError("");
}

const char* kHead = "[field]\np = 5\nramified = false\n\n[stratum]\n";

}  // namespace

TEST_CASE("parse errors carry line and column") {
  ParseError e = parse_error("[field]\np = 5\nramified = maybe\n");
  CHECK(e.line == 3);
  CHECK(e.column == 12);

  e = parse_error("[field]\np = 5\n  colour = red\n");
  CHECK(e.line == 3);
  CHECK(e.column == 3);

  e = parse_error("[fields]\n");
  CHECK(e.line == 1);

  e = parse_error(std::string(kHead) + "type = D\nlambda = 1, 1, 1\nbeta1 = (1*p^-3)*d\n"
                                       "beta2 = (2*p^-1)*d\nbeta3 = 1*q\n");
  CHECK(e.line == 10);
  CHECK(e.column == 9);

  e = parse_error(std::string(kHead) + "type = D\nlambda = 1, 1, 1\n");
  CHECK(e.line == 5);  // missing β, reported at the section header

  e = parse_error("[field]\np = 5\np = 7\n");
  CHECK(e.line == 3);

  e = parse_error("p = 5\n");
  CHECK(e.line == 1);
}

TEST_CASE("comments and defaults") {
  const Stratum s = parse_stratum_file(
      "# type D\n[field]  # base field\np = 5\nramified = false\n\n[stratum]\ntype = D\n"
      "lambda = 1, 1, 1\nbeta1 = (1*p^-3)*d\nbeta2 = (2*p^-1)*d\nbeta3 = 0  # zero\n");
  CHECK(s.type == TypeTag::D);
  CHECK(s.f().N() == default_precision());
  CHECK(validate(s).empty());
}

TEST_CASE("every fixture parses and re-emits to the same stratum") {
  for (const auto& entry : std::filesystem::directory_iterator(U21_TEST_DATA)) {
    const std::string name = entry.path().filename().string();
    if (name == "bad_value.u21") continue;
    INFO(name);
    const Stratum s = parse_stratum_file(read(name));
    const std::string once = emit_stratum_file(s);
    CHECK(emit_stratum_file(parse_stratum_file(once)) == once);
  }
}

TEST_CASE("sampled strata round trip through the file format") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 60; ++i) {
    SampleOptions so;
    so.type = std::array{TypeTag::B, TypeTag::C, TypeTag::D}[size_t(i % 3)];
    so.p = std::array<int64_t, 3>{3, 5, 7}[size_t((i / 3) % 3)];
    so.ramified = i % 2;
    const Stratum s = sample_stratum(rng, so);
    const Stratum t = parse_stratum_file(emit_stratum_file(s));
    CHECK(t.type == s.type);
    CHECK(t.beta == s.beta);
    CHECK(t.space.gram == s.space.gram);
    CHECK(t.lattice_key == s.lattice_key);
    CHECK(criterion_status(t).status == criterion_status(s).status);
  }
}

TEST_CASE("machine reports round trip") {
  for (const char* name : {"type_d_even.u21", "type_b_q8_q6.u21", "type_c_iso.u21",
                           "type_b_q4_q6.u21", "depth_zero_ram_l2.u21"}) {
    INFO(name);
    const Stratum s = parse_stratum_file(read(name));
    ClassifyOptions opt;
    opt.search_witness = true;
    const ClassificationReport r = classify_genericity(s, opt);
    const std::string m = emit_report(r, OutputFormat::machine);
    const ClassificationReport back = parse_report(m, s.field);
    CHECK(same_report(r, back));
    CHECK(emit_report(back, OutputFormat::machine) == m);
  }
}

TEST_CASE("text reports list one line per consulted rule") {
  const ClassificationReport r = classify_genericity(parse_stratum_file(read("type_d_even.u21")));
  const std::string t = emit_report(r, OutputFormat::text);
  CHECK(t.find("verdict: Generic\n") == 0);
  CHECK(t.find("step typeD-unram-uniform | ") != std::string::npos);
  CHECK(t.find("step theorem-typeD | ") != std::string::npos);
  CHECK_THROWS_AS(parse_output_format("yaml"), InvalidConfig);
}
