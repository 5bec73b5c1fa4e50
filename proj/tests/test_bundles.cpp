#include <doctest.h>

#include <cmath>

#include "gmech/bundles.hpp"
#include "gmech/random.hpp"

using namespace gmech;

namespace {

const GroupId kGroups[] = {GroupId::SO3, GroupId::SE2, GroupId::H3, GroupId::R3};
const SpaceId kGroupSpaces[] = {SpaceId::TG,       SpaceId::TCG,      SpaceId::TSTG,
                                SpaceId::TSTSG,    SpaceId::TTCG,     SpaceId::SUB_GG,
                                SpaceId::SUB_G_DD, SpaceId::SUB_A_DD};

BundlePoint random_point(SpaceId space, GroupId group, Rng& rng) {
  const Group& gr = Group::get(group);
  BundlePoint p = identity_point(space, group);
  if (p.g) p.g = gr.exp(AlgebraVector(rng.vec(gr.dim())));
  for (Vec& f : p.fibers) f = rng.vec(gr.dim());
  return p;
}

Tuple random_tuple(SpaceId space, GroupId group, Rng& rng) {
  Tuple t = zero_tuple(space, group);
  for (Vec& c : t.comps) c = rng.vec(Group::get(group).dim());
  return t;
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

}  // namespace

TEST_CASE("bundle groups: identity, inverse and associativity") {
  for (GroupId gid : kGroups) {
    for (SpaceId sp : kGroupSpaces) {
      Rng rng(101 + static_cast<int>(sp) * 7 + static_cast<int>(gid));
      BundlePoint e = identity_point(sp, gid);
      const bool exact = (gid == GroupId::H3 || gid == GroupId::R3);
      const double tol = 1e-10;
      for (int k = 0; k < 100; ++k) {
        BundlePoint p = random_point(sp, gid, rng);
        BundlePoint q = random_point(sp, gid, rng);
        BundlePoint r = random_point(sp, gid, rng);
        CHECK(point_distance(bundle_mul(p, e), p) <= (exact ? 1e-14 : tol));
        CHECK(point_distance(bundle_mul(e, p), p) <= (exact ? 1e-14 : tol));
        CHECK(point_distance(bundle_mul(p, bundle_inverse(p)), e) <= tol);
        CHECK(point_distance(bundle_mul(bundle_inverse(p), p), e) <= tol);
        BundlePoint lhs = bundle_mul(bundle_mul(p, q), r);
        BundlePoint rhs = bundle_mul(p, bundle_mul(q, r));
        CHECK(point_distance(lhs, rhs) <= tol);
      }
    }
  }
}

TEST_CASE("abelian degeneration: every multiplication is componentwise addition on r3") {
  Rng rng(5);
  for (SpaceId sp : kGroupSpaces) {
    BundlePoint p = random_point(sp, GroupId::R3, rng);
    BundlePoint q = random_point(sp, GroupId::R3, rng);
    BundlePoint m = bundle_mul(p, q);
    for (size_t i = 0; i < p.fibers.size(); ++i)
      CHECK((m.fibers[i] - p.fibers[i] - q.fibers[i]).norm() <= 1e-14);
    if (p.g) CHECK((m.g->m - (p.g->m * q.g->m)).norm() <= 1e-14);
  }
}

TEST_CASE("rivf: generator at the identity, linearity, derivative of left translation") {
  for (GroupId gid : kGroups) {
    for (SpaceId sp : kGroupSpaces) {
      Rng rng(211 + static_cast<int>(sp) + 13 * static_cast<int>(gid));
      BundlePoint e = identity_point(sp, gid);
      Tuple zero = zero_tuple(sp, gid);
      for (int k = 0; k < 20; ++k) {
        BundlePoint p = random_point(sp, gid, rng);
        Tuple gen = random_tuple(sp, gid, rng);
        CHECK(tuple_norm(rivf(p, zero)) == 0.0);
        Tuple at_e = rivf(e, gen);
        CHECK(tuple_norm(tuple_add(at_e, tuple_scale(gen, -1.0))) <= 1e-14);
        Tuple gen2 = random_tuple(sp, gid, rng);
        Tuple lin = tuple_add(rivf(p, gen), tuple_scale(rivf(p, gen2), 2.0));
        Tuple direct = rivf(p, tuple_add(gen, tuple_scale(gen2, 2.0)));
        CHECK(tuple_norm(tuple_add(lin, tuple_scale(direct, -1.0))) <= 1e-12);
        const double h = 1e-6;
        BundlePoint plus = bundle_mul(exp_tuple(sp, gid, gen, h), p);
        BundlePoint minus = bundle_mul(exp_tuple(sp, gid, gen, -h), p);
        Tuple fd = zero_tuple(sp, gid);
        int at = 0;
        if (p.g) {
          Mat dg = (plus.g->m - minus.g->m) / (2 * h);
          fd.comps[0] = Group::get(gid).matrix_to_algebra(dg * inverse(*p.g).m).c;
          at = 1;
        }
        for (size_t i = 0; i < p.fibers.size(); ++i)
          fd.comps[at + i] = (plus.fibers[i] - minus.fibers[i]) / (2 * h);
        Tuple an = rivf(p, gen);
        CHECK(tuple_norm(tuple_add(fd, tuple_scale(an, -1.0))) <= 1e-6);
        Tuple back = gen_from_tangent(p, an);
        CHECK(tuple_norm(tuple_add(back, tuple_scale(gen, -1.0))) <= 1e-11);
      }
    }
  }
}

TEST_CASE("rivf pinned value on ttcg") {
  Rng rng(77);
  const Group& so3 = Group::get(GroupId::SO3);
  BundlePoint p = identity_point(SpaceId::TTCG, GroupId::SO3);
  p.g = so3.exp(AlgebraVector(rng.vec(3)));
  p.fiber(SlotName::MU) = e3v(0);  // eps1
  p.fiber(SlotName::XI) = e3v(1);  // e2
  Tuple gen = zero_tuple(SpaceId::TTCG, GroupId::SO3);
  gen.comps[0] = e3v(0);  // e1
  Tuple r = rivf(p, gen);
  CHECK((r.comps[0] - e3v(0)).norm() == 0.0);
  CHECK(r.comps[1].norm() <= 1e-15);             // coad(e1, eps1) = 0
  CHECK((r.comps[2] - e3v(2)).norm() <= 1e-15);  // ad(e1, e2) = e3
  CHECK(r.comps[3].norm() <= 1e-15);
}

TEST_CASE("two-forms: antisymmetry and pinned values") {
  struct Case {
    FormId id;
    SpaceId sp;
  };
  const Case cases[] = {
      {FormId::OMEGA_TCG, SpaceId::TCG},
      {FormId::OMEGA_TSTG, SpaceId::TSTG},
      {FormId::OMEGA_TSTSG, SpaceId::TSTSG},
      {FormId::OMEGA_TTCG, SpaceId::TTCG},
      {FormId::KKS, SpaceId::DUAL},
      {FormId::ORB_GXG, SpaceId::DUAL_DUAL},
      {FormId::ORB_SYMOR, SpaceId::DUAL_ALG},
      {FormId::RED_OMEGA_TSTG, SpaceId::DUAL_ALG_DUAL},
      {FormId::RED_OMEGA_TSTSG, SpaceId::DUAL_ALG_DUAL},
      {FormId::RED_TUL, SpaceId::DUAL_DUAL_ALG},
  };
  for (GroupId gid : kGroups) {
    for (const auto& c : cases) {
      Rng rng(331 + static_cast<int>(c.id));
      for (int k = 0; k < 50; ++k) {
        BundlePoint p = random_point(c.sp, gid, rng);
        Tuple a = random_tuple(c.sp, gid, rng);
        Tuple b = random_tuple(c.sp, gid, rng);
        CHECK(std::abs(eval_two_form(c.id, p, a, b) + eval_two_form(c.id, p, b, a)) <= 1e-10);
        CHECK(std::abs(eval_two_form(c.id, p, a, a)) <= 1e-12);
      }
    }
  }
  // Omega_TCG over so3 at (g, eps3), gens (e1,0), (e2,0): -<eps3,[e1,e2]> = -1
  Rng rng(41);
  BundlePoint p = identity_point(SpaceId::TCG, GroupId::SO3);
  p.g = Group::get(GroupId::SO3).exp(AlgebraVector(rng.vec(3)));
  p.fiber(SlotName::MU) = e3v(2);
  Tuple a = zero_tuple(SpaceId::TCG, GroupId::SO3), b = a;
  a.comps[0] = e3v(0);
  b.comps[0] = e3v(1);
  CHECK(eval_two_form(FormId::OMEGA_TCG, p, a, b) == doctest::Approx(-1.0).epsilon(1e-14));
  // KKS over so3 at mu = eps3 with xi = e1, eta = e2: -1
  BundlePoint mu = make_point(SpaceId::DUAL, GroupId::SO3, {e3v(2)});
  Tuple x = zero_tuple(SpaceId::DUAL, GroupId::SO3), y = x;
  x.comps[0] = e3v(0);
  y.comps[0] = e3v(1);
  CHECK(eval_two_form(FormId::KKS, mu, x, y) == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("one-forms: pinned evaluations") {
  Rng rng(55);
  BundlePoint p = random_point(SpaceId::TTCG, GroupId::SO3, rng);
  Tuple gen = random_tuple(SpaceId::TTCG, GroupId::SO3, rng);
  const Group& gr = Group::get(GroupId::SO3);
  double expected =
      p.fiber(SlotName::MU).dot(gen.comps[2]) + p.fiber(SlotName::NU).dot(gen.comps[0]) +
      p.fiber(SlotName::MU)
          .dot(ad(gr, AlgebraVector(p.fiber(SlotName::XI)), AlgebraVector(gen.comps[0])).c);
  CHECK(eval_one_form(FormId::THETA2_TTCG, Tuple{}, gen, p) ==
        doctest::Approx(expected).epsilon(1e-14));
  Tuple params = zero_tuple(SpaceId::TTCG, GroupId::SO3);
  params.comps[0] = e3v(0);
  Tuple g1 = zero_tuple(SpaceId::TTCG, GroupId::SO3);
  g1.comps[0] = e3v(0);
  CHECK(eval_one_form(FormId::THETA1_TTCG, params, g1, p) == doctest::Approx(1.0));
  CHECK(eval_one_form(FormId::THETA1_TTCG, params, zero_tuple(SpaceId::TTCG, GroupId::SO3), p) ==
        0.0);
}

TEST_CASE("flat maps: pinned formula, invertibility, and the tcg consistency") {
  Rng rng(63);
  const Group& gr = Group::get(GroupId::SO3);
  BundlePoint p = random_point(SpaceId::TTCG, GroupId::SO3, rng);
  Tuple gen = random_tuple(SpaceId::TTCG, GroupId::SO3, rng);
  Tuple f = flat(p, gen);
  Vec amu = coAd(inverse(*p.g), CoalgebraVector(p.fiber(SlotName::MU))).c;
  Vec expect0 = gen.comps[3] - coad(gr, AlgebraVector(gen.comps[2]), CoalgebraVector(amu)).c;
  CHECK((f.comps[0] - expect0).norm() <= 1e-13);
  CHECK((f.comps[1] - gen.comps[2]).norm() == 0.0);
  CHECK((f.comps[2] + gen.comps[1]).norm() == 0.0);
  CHECK((f.comps[3] + gen.comps[0]).norm() == 0.0);
  CHECK(tuple_norm(flat(p, zero_tuple(SpaceId::TTCG, GroupId::SO3))) == 0.0);

  BundlePoint pr = random_point(SpaceId::TTCG, GroupId::R3, rng);
  Tuple genr = random_tuple(SpaceId::TTCG, GroupId::R3, rng);
  Tuple fr = flat(pr, genr);
  CHECK((fr.comps[0] - genr.comps[3]).norm() == 0.0);
  CHECK((fr.comps[1] - genr.comps[2]).norm() == 0.0);
  CHECK((fr.comps[2] + genr.comps[1]).norm() == 0.0);
  CHECK((fr.comps[3] + genr.comps[0]).norm() == 0.0);

  for (SpaceId sp : {SpaceId::TCG, SpaceId::TSTG, SpaceId::TSTSG, SpaceId::TTCG}) {
    BundlePoint q = random_point(sp, GroupId::SO3, rng);
    const int nslots = static_cast<int>(signature(sp).slots.size());
    const int dim = 3 * nslots;
    Mat M(dim, dim);
    for (int j = 0; j < dim; ++j) {
      Tuple e = zero_tuple(sp, GroupId::SO3);
      e.comps[j / 3][j % 3] = 1.0;
      Tuple fe = flat(q, e);
      for (int i = 0; i < dim; ++i) M(i, j) = fe.comps[i / 3][i % 3];
    }
    CHECK(Eigen::FullPivLU<Mat>(M).isInvertible());
  }

  for (int k = 0; k < 50; ++k) {
    BundlePoint q = random_point(SpaceId::TCG, GroupId::SE2, rng);
    Tuple a = random_tuple(SpaceId::TCG, GroupId::SE2, rng);
    Tuple b = random_tuple(SpaceId::TCG, GroupId::SE2, rng);
    double lhs = pair_tuples(flat(q, a), rivf(q, b));
    double rhs = eval_two_form(FormId::OMEGA_TCG, q, a, b);
    CHECK(std::abs(lhs - rhs) <= 1e-12);
  }
}

TEST_CASE("sigma: pinned image, bijectivity and exact pullback") {
  Rng rng(71);
  BundlePoint p = identity_point(SpaceId::TTCG, GroupId::SO3);
  p.g = Group::get(GroupId::SO3).exp(AlgebraVector(rng.vec(3)));
  p.fiber(SlotName::MU) = e3v(0);
  p.fiber(SlotName::XI) = e3v(1);
  BundlePoint s = sigma(p);
  CHECK(s.space == SpaceId::TSTG);
  CHECK((s.fiber(SlotName::XI) - e3v(1)).norm() == 0.0);
  CHECK((s.fiber(SlotName::MU) - e3v(2)).norm() == 0.0);  // coad(e2, eps1) = eps3
  CHECK((s.fiber(SlotName::NU) - e3v(0)).norm() == 0.0);
  CHECK(point_distance(sigma(identity_point(SpaceId::TTCG, GroupId::SO3)),
                       identity_point(SpaceId::TSTG, GroupId::SO3)) == 0.0);

  for (GroupId gid : kGroups) {
    Rng r2(73 + static_cast<int>(gid));
    for (int k = 0; k < 100; ++k) {
      BundlePoint q = random_point(SpaceId::TTCG, gid, r2);
      CHECK(point_distance(sigma_inverse(sigma(q)), q) <= 1e-12);
      BundlePoint w = random_point(SpaceId::TSTG, gid, r2);
      CHECK(point_distance(sigma(sigma_inverse(w)), w) <= 1e-12);
      Tuple a = random_tuple(SpaceId::TTCG, gid, r2);
      Tuple b = random_tuple(SpaceId::TTCG, gid, r2);
      double lhs =
          eval_two_form(FormId::OMEGA_TSTG, sigma(q), sigma_push_gen(a), sigma_push_gen(b));
      double rhs = eval_two_form(FormId::OMEGA_TTCG, q, a, b);
      CHECK(std::abs(lhs - rhs) <= 1e-11);
      Tuple prr = sigma_push_rates(q, rivf(q, a));
      Tuple pg = rivf(sigma(q), sigma_push_gen(a));
      CHECK(tuple_norm(tuple_add(prr, tuple_scale(pg, -1.0))) <= 1e-11);
      CHECK(tuple_norm(tuple_add(sigma_pull_gen(sigma_push_gen(a)), tuple_scale(a, -1.0))) ==
            0.0);
    }
  }
}

TEST_CASE("omega-flat map: pinned formula and bijectivity") {
  Rng rng(79);
  for (GroupId gid : kGroups) {
    const Group& gr = Group::get(gid);
    for (int k = 0; k < 100; ++k) {
      BundlePoint p = random_point(SpaceId::TTCG, gid, rng);
      BundlePoint q = omega_flat_map(p);
      CHECK(q.space == SpaceId::TSTSG);
      CHECK((q.fiber(SlotName::MU) - p.fiber(SlotName::MU)).norm() == 0.0);
      Vec expect = p.fiber(SlotName::NU) + coad(gr, AlgebraVector(p.fiber(SlotName::XI)),
                                                CoalgebraVector(p.fiber(SlotName::MU)))
                                               .c;
      CHECK((q.fiber(SlotName::NU) - expect).norm() <= 1e-14);
      CHECK((q.fiber(SlotName::XI) + p.fiber(SlotName::XI)).norm() == 0.0);
      CHECK(point_distance(omega_flat_map_inverse(q), p) <= 1e-12);
      Tuple a = random_tuple(SpaceId::TTCG, gid, rng);
      Tuple prr = omega_flat_push_rates(p, rivf(p, a));
      Tuple pg = rivf(q, omega_flat_push_gen(p, a));
      CHECK(tuple_norm(tuple_add(prr, tuple_scale(pg, -1.0))) <= 1e-11);
    }
  }
  CHECK(point_distance(omega_flat_map(identity_point(SpaceId::TTCG, GroupId::H3)),
                       identity_point(SpaceId::TSTSG, GroupId::H3)) == 0.0);
}

TEST_CASE("points: flat round trip and mismatched spaces") {
  Rng rng(83);
  for (GroupId gid : kGroups) {
    for (SpaceId sp : kGroupSpaces) {
      BundlePoint p = random_point(sp, gid, rng);
      BundlePoint q = point_from_flat(sp, gid, point_to_flat(p));
      CHECK(point_distance(p, q) <= 1e-12);
    }
  }
  CHECK_THROWS_AS(bundle_mul(identity_point(SpaceId::TG, GroupId::SO3),
                             identity_point(SpaceId::TCG, GroupId::SO3)),
                  usage_error);
}

TEST_CASE("point_from_flat rejects group slots violating closure") {
  Vec flat = Vec::Zero(point_flat_dim(SpaceId::TCG, GroupId::SO3));
  flat[0] = 2.0;  // not close to any rotation
  flat[4] = 2.0;
  flat[8] = 2.0;
  CHECK_THROWS_AS(point_from_flat(SpaceId::TCG, GroupId::SO3, flat), usage_error);
}
