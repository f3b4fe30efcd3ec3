#include <benchmark/benchmark.h>

#include "twb/closure.hpp"
#include "twb/experiments.hpp"
#include "twb/glue.hpp"
#include "twb/indis.hpp"
#include "twb/partition.hpp"
#include "twb/samples.hpp"
#include "twb/types.hpp"

#include <map>

using namespace twb;

namespace {

// Chain instance with m parameters: 8m nodes.
const VcInstance& chain(int m) {
  static std::map<int, VcInstance> cache;
  auto it = cache.find(m);
  if (it == cache.end()) it = cache.emplace(m, vc_instance(VcFamily::chain, m)).first;
  return it->second;
}

void BM_Closure(benchmark::State& state) {
  const auto& inst = chain(static_cast<int>(state.range(0)));
  const int k = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(closure(inst.fragment, inst.params, ClosureVariant::k, k));
  state.counters["nodes"] = inst.fragment.size();
}
BENCHMARK(BM_Closure)->ArgsProduct({{1, 4, 8}, {0, 1, 2}});

void BM_TypeCode(benchmark::State& state) {
  const auto& inst = chain(static_cast<int>(state.range(0)));
  const int k = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(tp_code(inst.fragment, inst.params, {}, k));
}
BENCHMARK(BM_TypeCode)->ArgsProduct({{1, 4, 8}, {0, 1, 2}});

void BM_EquivK(benchmark::State& state) {
  const auto& inst = chain(8);
  const std::vector<Node> a{inst.params[0], inst.params[1]};
  const std::vector<Node> b{inst.params[5], inst.params[6]};
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(equiv_k(inst.fragment, a, inst.fragment, b, k));
}
BENCHMARK(BM_EquivK)->DenseRange(0, 2);

void BM_VcSeries(benchmark::State& state) {
  const auto fam = static_cast<VcFamily>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(vc_series(fam, k, 6));
  state.SetLabel(vc_family_name(fam));
}
BENCHMARK(BM_VcSeries)->ArgsProduct({{0, 1}, {0, 1, 2}})->Unit(benchmark::kMillisecond);

void BM_IndiscernibleSearch(benchmark::State& state) {
  const Fragment f = complete(h_iteration_sample(), {.rank = 2});
  std::vector<Node> A;
  for (Node x = 0; x < f.size(); ++x) {
    if (f.id(x)[0] != '_') A.push_back(x);
  }
  const int L = static_cast<int>(state.range(0));
  for (auto _ : state) {
    int windows = 0;
    for_each_indiscernible(f, A, L, 1, 3, [&](const std::vector<Node>&) { return ++windows, true; });
    benchmark::DoNotOptimize(windows);
  }
}
BENCHMARK(BM_IndiscernibleSearch)->DenseRange(4, 6)->Unit(benchmark::kMillisecond);

void BM_HIterate(benchmark::State& state) {
  const Fragment f = h_iteration_sample();
  const auto w = h_iteration_window(f);
  for (auto _ : state) benchmark::DoNotOptimize(h_iterate(f, w, 10));
}
BENCHMARK(BM_HIterate);

void BM_QEnumerate(benchmark::State& state) {
  const PTriple p = hard6_sample();
  const int alpha = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(q_enumerate(p, alpha, 2).nodes.size());
}
BENCHMARK(BM_QEnumerate)->DenseRange(1, 3);

void BM_KeyClaim(benchmark::State& state) {
  const PTriple p = hard6_sample();
  const QFragment q = q_enumerate(p, 2, 2);
  for (auto _ : state) benchmark::DoNotOptimize(key_claim_check(p, q).ok());
}
BENCHMARK(BM_KeyClaim);

void BM_WitnessBuild(benchmark::State& state) {
  const auto c = static_cast<WitnessCase>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_witness(c, {}).model.size());
  state.SetLabel(witness_case_name(c));
}
BENCHMARK(BM_WitnessBuild)->DenseRange(0, 3);

void BM_WitnessSearch(benchmark::State& state) {
  const auto c = static_cast<WitnessCase>(state.range(0));
  const WitnessModel w = build_witness(c, {});
  for (auto _ : state) benchmark::DoNotOptimize(search_indiscernible(w.model, w.A, 4, 1, 2));
  state.SetLabel(witness_case_name(c));
}
BENCHMARK(BM_WitnessSearch)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
