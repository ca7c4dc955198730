#include <benchmark/benchmark.h>

#include <random>

#include "u21/classifier.hpp"
#include "u21/sampler.hpp"

using namespace u21;

namespace {

FieldPtr field(int64_t p, bool ram) { return Field::make({p, ram, smallest_nonresidue(p), 24}); }

void BM_ExtMul(benchmark::State& st) {
  const FieldPtr f = field(5, st.range(0) != 0);
  const ExtElement a(f->from_int(1234567), f->from_int(-89)), b(f->from_int(77), f->from_int(4321));
  ExtElement x = a;
  for (auto _ : st) {
    x = x * b + a;
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_ExtMul)->Arg(0)->Arg(1);

void BM_CriterionStatus(benchmark::State& st) {
  std::mt19937_64 rng(1);
  const Stratum s = sample_stratum(rng, field(5, false), static_cast<TypeTag>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(criterion_status(s).status);
}
BENCHMARK(BM_CriterionStatus)->Arg(int(TypeTag::B))->Arg(int(TypeTag::C))->Arg(int(TypeTag::D));

void BM_BruteSearch(benchmark::State& st) {
  std::mt19937_64 rng(2);
  Stratum s;
  do s = sample_stratum(rng, field(7, false), TypeTag::D);
  while (criterion_status(s).status != XStatus::NonEmpty);
  const QuadricPairSystem sys = assemble_system(s);
  for (auto _ : st) benchmark::DoNotOptimize(brute_search(sys, {int(st.range(0)), 1}).nodes);
}
BENCHMARK(BM_BruteSearch)->Arg(12)->Arg(16);

void BM_CharNontrivial(benchmark::State& st) {
  std::mt19937_64 rng(3);
  const FieldPtr f = field(3, true);
  const Stratum s = sample_stratum(rng, f, TypeTag::D);
  const Matrix g = random_group_element(rng, *f, 5);
  for (auto _ : st) benchmark::DoNotOptimize(char_nontrivial(g, s, 0, Side::upper).level);
}
BENCHMARK(BM_CharNontrivial);

}  // namespace

BENCHMARK_MAIN();
