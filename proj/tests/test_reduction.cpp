#include <doctest.h>

#include <cmath>

#include "gmech/random.hpp"
#include "gmech/reduction.hpp"

using namespace gmech;

namespace {

BundlePoint random_point(SpaceId space, GroupId group, Rng& rng) {
  const Group& gr = Group::get(group);
  BundlePoint p = identity_point(space, group);
  if (p.g) p.g = gr.exp(AlgebraVector(rng.vec(gr.dim())));
  for (Vec& f : p.fibers) f = rng.vec(gr.dim());
  return p;
}

double point_distance(const BundlePoint& a, const BundlePoint& b) {
  double d = 0.0;
  if (a.g) d = (a.g->m - b.g->m).cwiseAbs().maxCoeff();
  for (size_t i = 0; i < a.fibers.size(); ++i)
    d = std::max(d, (a.fibers[i] - b.fibers[i]).cwiseAbs().maxCoeff());
  return d;
}

Vec e3v(int i) {
  Vec e = Vec::Zero(3);
  e[i] = 1.0;
  return e;
}

const ActionId kActions[] = {
    ActionId::TCG_G,     ActionId::TSTG_G,      ActionId::TSTG_A,   ActionId::TSTG_GA,
    ActionId::TSTSG_G,   ActionId::TSTSG_D,     ActionId::TSTSG_GD, ActionId::TTCG_G,
    ActionId::TTCG_A2,   ActionId::TTCG_D1_PSI, ActionId::TTCG_D3_PHI,
    ActionId::TTCG_GA2,  ActionId::TTCG_GD1};

ActionArg identity_arg(ActionId id, GroupId gid) {
  ActionArg a;
  a.h = Group::get(gid).identity();
  a.v = Vec::Zero(Group::get(gid).dim());
  return a;
}

// Subgroup product matching each action's composition law.
ActionArg compose_args(ActionId id, GroupId gid, const ActionArg& s1, const ActionArg& s2) {
  ActionArg out = identity_arg(id, gid);
  switch (id) {
    case ActionId::TCG_G:
    case ActionId::TSTG_G:
    case ActionId::TSTSG_G:
    case ActionId::TTCG_G:
      out.h = group_mul(*s1.h, *s2.h);
      return out;
    case ActionId::TSTG_A:
    case ActionId::TSTSG_D:
    case ActionId::TTCG_A2:
    case ActionId::TTCG_D1_PSI:
    case ActionId::TTCG_D3_PHI:
      out.v = *s1.v + *s2.v;
      return out;
    case ActionId::TSTG_GA:
    case ActionId::TTCG_GA2:
      // tangent-group law: (h1, v1)(h2, v2) = (h1 h2, v1 + Ad(h1) v2)
      out.h = group_mul(*s1.h, *s2.h);
      out.v = *s1.v + Ad(*s1.h, AlgebraVector(*s2.v)).c;
      return out;
    case ActionId::TSTSG_GD:
    case ActionId::TTCG_GD1:
      // cotangent-group law: (h1, v1)(h2, v2) = (h1 h2, v1 + coAd(h1) v2)
      out.h = group_mul(*s1.h, *s2.h);
      out.v = *s1.v + coAd(*s1.h, CoalgebraVector(*s2.v)).c;
      return out;
  }
  return out;
}

ActionArg random_arg(ActionId id, GroupId gid, Rng& rng) {
  const Group& gr = Group::get(gid);
  ActionArg a;
  a.h = gr.exp(AlgebraVector(rng.vec(gr.dim())));
  a.v = rng.vec(gr.dim());
  return a;
}

}  // namespace

TEST_CASE("actions: identity element, group law, and pinned displays") {
  for (ActionId id : kActions) {
    for (GroupId gid : {GroupId::SO3, GroupId::SE2, GroupId::H3, GroupId::R3}) {
      Rng rng(3 + static_cast<int>(id) * 5 + static_cast<int>(gid));
      SpaceId sp = action_space(id);
      for (int k = 0; k < 25; ++k) {
        BundlePoint p = random_point(sp, gid, rng);
        CHECK(point_distance(act(id, p, identity_arg(id, gid)), p) <= 1e-14);
        ActionArg s1 = random_arg(id, gid, rng);
        ActionArg s2 = random_arg(id, gid, rng);
        BundlePoint two_steps = act(id, act(id, p, s1), s2);
        BundlePoint one_step = act(id, p, compose_args(id, gid, s1, s2));
        CHECK(point_distance(two_steps, one_step) <= 1e-10);
      }
    }
  }
  // pinned: g2 translation on ttcg moves only xi
  Rng rng(31);
  BundlePoint p = random_point(SpaceId::TTCG, GroupId::SO3, rng);
  ActionArg eta;
  eta.v = e3v(1);
  BundlePoint q = act(ActionId::TTCG_A2, p, eta);
  CHECK((q.fiber(SlotName::XI) - p.fiber(SlotName::XI) - e3v(1)).norm() == 0.0);
  CHECK((q.fiber(SlotName::MU) - p.fiber(SlotName::MU)).norm() == 0.0);
  CHECK((q.fiber(SlotName::NU) - p.fiber(SlotName::NU)).norm() == 0.0);
}

TEST_CASE("alpha decomposes into its group and fiber factors") {
  Rng rng(37);
  const Group& gr = Group::get(GroupId::SO3);
  for (int k = 0; k < 25; ++k) {
    BundlePoint p = random_point(SpaceId::TTCG, GroupId::SO3, rng);
    GroupElement h = gr.exp(AlgebraVector(rng.vec(3)));
    Vec lam = rng.vec(3);
    ActionArg full;
    full.h = h;
    full.v = lam;
    ActionArg gpart;
    gpart.h = h;
    gpart.v = Vec::Zero(3);
    ActionArg vpart;
    vpart.h = gr.identity();
    // applying the group factor first shifts the fiber factor by coAd(h^-1)
    vpart.v = coAd(inverse(h), CoalgebraVector(lam)).c;
    BundlePoint lhs = act(ActionId::TTCG_GD1, p, full);
    BundlePoint rhs = act(ActionId::TTCG_GD1, act(ActionId::TTCG_GD1, p, gpart), vpart);
    CHECK(point_distance(lhs, rhs) <= 1e-12);
  }
}

TEST_CASE("momentum maps: pinned values") {
  Rng rng(41);
  // J for the g2 action is the mu slot
  BundlePoint p = random_point(SpaceId::TTCG, GroupId::SO3, rng);
  CHECK((momentum(ActionId::TTCG_A2, p)[0] - p.fiber(SlotName::MU)).norm() == 0.0);
  // so3: J^G(g, eps1, e2, eps3) = eps3 + coad(e2, eps1)
  BundlePoint q = identity_point(SpaceId::TTCG, GroupId::SO3);
  q.g = Group::get(GroupId::SO3).exp(AlgebraVector(rng.vec(3)));
  q.fiber(SlotName::MU) = e3v(0);
  q.fiber(SlotName::XI) = e3v(1);
  q.fiber(SlotName::NU) = e3v(2);
  Vec expected = e3v(2) + coad(Group::get(GroupId::SO3), AlgebraVector(e3v(1)),
                               CoalgebraVector(e3v(0)))
                              .c;
  CHECK((momentum(ActionId::TTCG_G, q)[0] - expected).norm() <= 1e-15);
  // abelian: the correction vanishes
  BundlePoint r = random_point(SpaceId::TTCG, GroupId::R3, rng);
  CHECK((momentum(ActionId::TTCG_G, r)[0] - r.fiber(SlotName::NU)).norm() == 0.0);
  // phi has no momentum
  CHECK_THROWS_AS(momentum(ActionId::TTCG_D3_PHI, p), usage_error);
}

TEST_CASE("coadjoint actions: pinned formulas, action law and infinitesimal sign") {
  Rng rng(43);
  const Group& so3 = Group::get(GroupId::SO3);
  // TG-group at (e, xi): (mu, nu) -> (mu + coad(xi, nu), nu)
  for (int k = 0; k < 20; ++k) {
    Vec mu = rng.vec(3), nu = rng.vec(3), xi = rng.vec(3);
    CoadjointElement e{so3.identity(), xi};
    auto moved = coadjoint_action(CoadjointKind::TG_GROUP, e, {mu, nu});
    Vec expect = mu + coad(so3, AlgebraVector(xi), CoalgebraVector(nu)).c;
    CHECK((moved[0] - expect).norm() <= 1e-14);
    CHECK((moved[1] - nu).norm() == 0.0);
  }
  // TCG-group on h3: (coAd(g, nu) - coad(Ad(g) xi, mu-factor), Ad(g) xi), exact
  const Group& h3 = Group::get(GroupId::H3);
  for (int k = 0; k < 20; ++k) {
    GroupElement g = h3.exp(AlgebraVector(rng.vec(3)));
    Vec mu = rng.vec(3);
    Vec nu = rng.vec(3), xi = rng.vec(3);
    CoadjointElement e{g, mu};
    auto moved = coadjoint_action(CoadjointKind::TCG_GROUP, e, {nu, xi});
    Vec axi = Ad(g, AlgebraVector(xi)).c;
    Vec expect = coAd(g, CoalgebraVector(nu)).c -
                 coad(h3, AlgebraVector(axi), CoalgebraVector(mu)).c;
    CHECK((moved[0] - expect).norm() <= 1e-13);
    CHECK((moved[1] - axi).norm() <= 1e-13);
  }
  // action law under the appropriate semidirect product for both kinds
  for (GroupId gid : {GroupId::SO3, GroupId::SE2, GroupId::H3, GroupId::R3}) {
    const Group& gr = Group::get(gid);
    for (int k = 0; k < 25; ++k) {
      std::vector<Vec> pt = {rng.vec(3), rng.vec(3)};
      CoadjointElement e1{gr.exp(AlgebraVector(rng.vec(3))), rng.vec(3)};
      CoadjointElement e2{gr.exp(AlgebraVector(rng.vec(3))), rng.vec(3)};
      {
        CoadjointElement prod{group_mul(e1.h, e2.h),
                              e1.v + Ad(e1.h, AlgebraVector(e2.v)).c};
        auto two = coadjoint_action(CoadjointKind::TG_GROUP, e1,
                                    coadjoint_action(CoadjointKind::TG_GROUP, e2, pt));
        auto one = coadjoint_action(CoadjointKind::TG_GROUP, prod, pt);
        CHECK((two[0] - one[0]).norm() <= 1e-10);
        CHECK((two[1] - one[1]).norm() <= 1e-10);
      }
      {
        CoadjointElement prod{group_mul(e1.h, e2.h),
                              e1.v + coAd(e1.h, CoalgebraVector(e2.v)).c};
        auto two = coadjoint_action(CoadjointKind::TCG_GROUP, e1,
                                    coadjoint_action(CoadjointKind::TCG_GROUP, e2, pt));
        auto one = coadjoint_action(CoadjointKind::TCG_GROUP, prod, pt);
        CHECK((two[0] - one[0]).norm() <= 1e-10);
        CHECK((two[1] - one[1]).norm() <= 1e-10);
      }
    }
  }
  // infinitesimal consistency of the plain coadjoint with coad
  for (GroupId gid : {GroupId::SO3, GroupId::SE2, GroupId::H3, GroupId::R3}) {
    const Group& gr = Group::get(gid);
    for (int k = 0; k < 10; ++k) {
      AlgebraVector xi(rng.vec(3));
      CoalgebraVector mu(rng.vec(3));
      CHECK(check_Ad_to_ad(gr, xi, mu) <= 1e-6);
    }
  }
}

TEST_CASE("isotropy: rotations about the axis of mu fix mu, generic ones do not") {
  const Group& so3 = Group::get(GroupId::SO3);
  CoadjointElement spin{so3.exp(AlgebraVector(0.8 * e3v(2))), Vec::Zero(3)};
  CHECK(isotropy_check(CoadjointKind::GROUP, spin, {e3v(2)}, 1e-10));
  CoadjointElement generic{so3.exp(AlgebraVector(Vec(0.3 * e3v(0) + 0.5 * e3v(2)))),
                           Vec::Zero(3)};
  CHECK(!isotropy_check(CoadjointKind::GROUP, generic, {e3v(2)}, 1e-10));
  CHECK(isotropy_check(CoadjointKind::GROUP, CoadjointElement{so3.identity(), Vec::Zero(3)},
                       {e3v(2)}, 1e-15));
}

TEST_CASE("verify_reduction: ttcg fiber Hamiltonian projects onto the lie-poisson flow") {
  Scenario sc;
  sc.id = "ttcg_nu_to_lp";
  sc.group = GroupId::SO3;
  sc.full_form = Formulation::HAM_TTCG;
  sc.reduced_form = Formulation::LP;
  sc.observable = "0.5*quadratic_form(nu, [1, 0.5, 0.33333333333333333])";
  sc.action = ActionId::TTCG_G;
  sc.momentum_action = ActionId::TTCG_A2;
  sc.projection = {{SlotName::NU, SlotName::MU}};
  BundlePoint p0 = identity_point(SpaceId::TTCG, GroupId::SO3);
  p0.fiber(SlotName::MU) = e3v(0);
  p0.fiber(SlotName::XI) = e3v(1);
  Vec nu(3);
  nu << 1.0, 0.3, -0.2;
  p0.fiber(SlotName::NU) = nu;
  sc.initial = point_to_flat(p0);
  sc.dt = 1e-3;
  sc.t_final = 2.0;
  ReductionReport rep = verify_reduction(sc);
  CHECK(rep.pass);
  CHECK(rep.trajectory_mismatch <= 1e-6);
  CHECK(rep.momentum_drift <= 1e-12);  // mu is exactly frozen here
}

TEST_CASE("verify_reduction: abelian scenarios have zero drift") {
  Scenario sc;
  sc.id = "abelian";
  sc.group = GroupId::R3;
  sc.full_form = Formulation::HAM_TSTG;
  sc.reduced_form = Formulation::LP_DD;
  sc.observable = "0.5*quadratic_form(mu, [1, 1, 1]) + pair(mu, nu)";
  sc.action = ActionId::TSTG_GA;
  sc.momentum_action = ActionId::TSTG_GA;
  BundlePoint p0 = identity_point(SpaceId::TSTG, GroupId::R3);
  p0.fiber(SlotName::MU) = e3v(0) + e3v(2);
  p0.fiber(SlotName::NU) = e3v(1);
  sc.initial = point_to_flat(p0);
  sc.dt = 1e-3;
  sc.t_final = 1.0;
  ReductionReport rep = verify_reduction(sc);
  CHECK(rep.pass);
  CHECK(rep.momentum_drift <= 1e-12);
  CHECK(rep.trajectory_mismatch <= 1e-12);
}

TEST_CASE("verify_reduction: the invariance gate rejects g-dependent Hamiltonians") {
  Scenario sc;
  sc.id = "gate";
  sc.group = GroupId::SO3;
  sc.full_form = Formulation::HAM_TTCG;
  sc.reduced_form = Formulation::LP;
  sc.observable = "0.5*quadratic_form(nu, [1, 1, 1]) + trace_g";
  sc.action = ActionId::TTCG_G;
  sc.projection = {{SlotName::NU, SlotName::MU}};
  sc.initial = point_to_flat(identity_point(SpaceId::TTCG, GroupId::SO3));
  sc.dt = 1e-3;
  sc.t_final = 0.1;
  CHECK_THROWS_AS(verify_reduction(sc), usage_error);
}

TEST_CASE("orbit form suite passes") {
  for (GroupId gid : {GroupId::SO3, GroupId::SE2, GroupId::H3, GroupId::R3}) {
    for (const auto& r : orbit_form_check(gid, 100, 5)) {
      INFO(r.name);
      CHECK(r.pass);
    }
  }
}

TEST_CASE("forms suite: antisymmetry, sigma pullback, embeddings, psi/phi witness") {
  for (GroupId gid : {GroupId::SO3, GroupId::H3}) {
    for (const auto& r : forms_check(gid, 100, 7)) {
      INFO(r.name << " residual=" << r.residual << " " << r.note);
      if (gid == GroupId::H3 && r.name == "phi_pullback_violation") continue;  // see below
      CHECK(r.pass);
    }
  }
  // the phi witness needs a nonabelian direction with coad(.,.) visible in
  // the nu slot; so3 exhibits it strongly
  auto rows = forms_check(GroupId::SO3, 100, 11);
  for (const auto& r : rows)
    if (r.name == "phi_pullback_violation") CHECK(r.residual > 1e-3);
}

TEST_CASE("momentum maps on T*TG and T*T*G: pinned slot projections") {
  Rng rng(53);
  BundlePoint p = random_point(SpaceId::TSTG, GroupId::SE2, rng);
  CHECK((momentum(ActionId::TSTG_G, p)[0] - p.fiber(SlotName::MU)).norm() == 0.0);
  CHECK((momentum(ActionId::TSTG_A, p)[0] - p.fiber(SlotName::NU)).norm() == 0.0);
  auto j = momentum(ActionId::TSTG_GA, p);
  CHECK((j[0] - p.fiber(SlotName::MU)).norm() == 0.0);
  CHECK((j[1] - p.fiber(SlotName::NU)).norm() == 0.0);
  BundlePoint q = random_point(SpaceId::TSTSG, GroupId::SE2, rng);
  CHECK((momentum(ActionId::TSTSG_D, q)[0] - q.fiber(SlotName::XI)).norm() == 0.0);
  auto j2 = momentum(ActionId::TSTSG_GD, q);
  CHECK((j2[0] - q.fiber(SlotName::NU)).norm() == 0.0);
  CHECK((j2[1] - q.fiber(SlotName::XI)).norm() == 0.0);
}

TEST_CASE("coadjoint_action validates shapes") {
  const Group& so3 = Group::get(GroupId::SO3);
  CoadjointElement e{so3.identity(), Vec::Zero(3)};
  CHECK_THROWS_AS(coadjoint_action(CoadjointKind::TG_GROUP, e, {Vec::Zero(3)}), usage_error);
  CHECK_THROWS_AS(coadjoint_action(CoadjointKind::GROUP, e, {Vec::Zero(2)}), usage_error);
}

TEST_CASE("semidirect coadjoint actions: infinitesimal generators") {
  // the fiber-coupling orientation is +coad for the tangent-group action,
  // matching its value at the group identity
  const Group& so3 = Group::get(GroupId::SO3);
  Rng rng(59);
  const double h = 1e-6;
  for (int k = 0; k < 20; ++k) {
    Vec mu = rng.vec(3), nu = rng.vec(3), zeta = rng.vec(3);
    CoadjointElement plus{so3.identity(), Vec(h * zeta)};
    CoadjointElement minus{so3.identity(), Vec(-h * zeta)};
    auto a = coadjoint_action(CoadjointKind::TG_GROUP, plus, {mu, nu});
    auto b = coadjoint_action(CoadjointKind::TG_GROUP, minus, {mu, nu});
    Vec deriv0 = (a[0] - b[0]) / (2 * h);
    Vec expect = coad(so3, AlgebraVector(zeta), CoalgebraVector(nu)).c;
    CHECK((deriv0 - expect).norm() <= 1e-9);
    CHECK((a[1] - nu).norm() == 0.0);
  }
}
