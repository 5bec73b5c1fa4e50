#include <benchmark/benchmark.h>

#include "gmech/brackets.hpp"
#include "gmech/integrate.hpp"
#include "gmech/random.hpp"

using namespace gmech;

namespace {

BundlePoint sample_point(SpaceId space, GroupId group, std::uint64_t seed) {
  const Group& gr = Group::get(group);
  Rng rng(seed);
  BundlePoint p = identity_point(space, group);
  if (p.g) p.g = gr.exp(AlgebraVector(rng.vec(gr.dim())));
  for (Vec& f : p.fibers) f = rng.vec(gr.dim());
  return p;
}

Tuple sample_tuple(SpaceId space, GroupId group, std::uint64_t seed) {
  Rng rng(seed);
  Tuple t = zero_tuple(space, group);
  for (Vec& c : t.comps) c = rng.vec(Group::get(group).dim());
  return t;
}

void bm_bundle_mul(benchmark::State& state) {
  BundlePoint p = sample_point(SpaceId::TTCG, GroupId::SO3, 1);
  BundlePoint q = sample_point(SpaceId::TTCG, GroupId::SO3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(bundle_mul(p, q));
}

void bm_rivf(benchmark::State& state) {
  BundlePoint p = sample_point(SpaceId::TTCG, GroupId::SO3, 3);
  Tuple gen = sample_tuple(SpaceId::TTCG, GroupId::SO3, 4);
  for (auto _ : state) benchmark::DoNotOptimize(rivf(p, gen));
}

void bm_two_form(benchmark::State& state) {
  BundlePoint p = sample_point(SpaceId::TTCG, GroupId::SO3, 5);
  Tuple a = sample_tuple(SpaceId::TTCG, GroupId::SO3, 6);
  Tuple b = sample_tuple(SpaceId::TTCG, GroupId::SO3, 7);
  for (auto _ : state) benchmark::DoNotOptimize(eval_two_form(FormId::OMEGA_TTCG, p, a, b));
}

void bm_ham_tstg_field(benchmark::State& state) {
  Observable H = parse("0.5*quadratic_form(mu, [1, 0.5, 0.33333333333333333]) + 0.3*pair(nu, xi)",
                       SpaceId::TSTG, GroupId::SO3);
  BundlePoint p = sample_point(SpaceId::TSTG, GroupId::SO3, 8);
  for (auto _ : state) benchmark::DoNotOptimize(hamiltonian_vf(Formulation::HAM_TSTG, H, p));
}

void bm_bracket(benchmark::State& state) {
  Observable F = parse("mu[0]*nu[1] + xi[2]*mu[2]", SpaceId::SUB_A_DD, GroupId::SO3);
  Observable K = parse("nu[0]*nu[1] - mu[1]", SpaceId::SUB_A_DD, GroupId::SO3);
  BundlePoint p = sample_point(SpaceId::SUB_A_DD, GroupId::SO3, 9);
  for (auto _ : state)
    benchmark::DoNotOptimize(eval_bracket(BracketId::RED_TSTG_G, F, K, p));
}

void bm_rigid_body_step(benchmark::State& state) {
  Observable h =
      parse("0.5*quadratic_form(mu, [1, 0.5, 0.33333333333333333])", SpaceId::DUAL, GroupId::SO3);
  BundlePoint p = identity_point(SpaceId::DUAL, GroupId::SO3);
  Vec mu(3);
  mu << 1.0, 0.01, 0.0;
  p.fiber(SlotName::MU) = mu;
  Scheme sch{SchemeKind::RKMK4, 1e-3, 1e-3 * state.range(0)};
  for (auto _ : state)
    benchmark::DoNotOptimize(integrate(Formulation::LP, h, FlowState{p, Vec()}, sch));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void bm_ttcg_run(benchmark::State& state) {
  Observable E = parse("0.5*pair(mu, xi) + 0.4*quadratic_form(nu, [1, 0.5, 0.25])",
                       SpaceId::TTCG, GroupId::SO3);
  BundlePoint p = sample_point(SpaceId::TTCG, GroupId::SO3, 10);
  Scheme sch{SchemeKind::RKMK4, 1e-3, 1e-3 * state.range(0)};
  for (auto _ : state)
    benchmark::DoNotOptimize(integrate(Formulation::HAM_TTCG, E, FlowState{p, Vec()}, sch));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(bm_bundle_mul);
BENCHMARK(bm_rivf);
BENCHMARK(bm_two_form);
BENCHMARK(bm_ham_tstg_field);
BENCHMARK(bm_bracket);
BENCHMARK(bm_rigid_body_step)->Arg(100)->Arg(1000);
BENCHMARK(bm_ttcg_run)->Arg(100);

BENCHMARK_MAIN();
