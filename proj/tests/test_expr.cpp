#include <doctest.h>

#include <cmath>

#include "gmech/expr.hpp"
#include "gmech/random.hpp"

using namespace gmech;

namespace {

BundlePoint random_point(SpaceId space, GroupId group, Rng& rng) {
  const Group& gr = Group::get(group);
  BundlePoint p = identity_point(space, group);
  if (p.g) p.g = gr.exp(AlgebraVector(rng.vec(gr.dim())));
  for (Vec& f : p.fibers) f = rng.vec(gr.dim());
  return p;
}

// Random fiber polynomial of degree <= deg on the space's non-group slots.
Observable random_poly(SpaceId space, GroupId group, Rng& rng, int deg = 3) {
  std::vector<SlotName> slots;
  for (const auto& s : signature(space).slots)
    if (s.kind != SlotKind::GRP) slots.push_back(s.name);
  const int n = Group::get(group).dim();
  NodePtr sum = nd_num(0.0);
  const int terms = 2 + static_cast<int>(rng.integer(3));
  for (int t = 0; t < terms; ++t) {
    NodePtr prod = nd_num(rng.uniform(-2.0, 2.0));
    const int factors = 1 + static_cast<int>(rng.integer(deg));
    for (int f = 0; f < factors; ++f) {
      SlotName s = slots[rng.integer(slots.size())];
      prod = nd_mul(prod, nd_coord(s, static_cast<int>(rng.integer(n))));
    }
    sum = nd_add(sum, prod);
  }
  return observable_from_node(space, group, sum);
}

}  // namespace

TEST_CASE("parse: pinned constructors") {
  // rigid-body kinetic energy
  Observable h = parse("0.5*quadratic_form(mu, [1, 2, 3])", SpaceId::TCG, GroupId::SO3);
  BundlePoint p = identity_point(SpaceId::TCG, GroupId::SO3);
  Vec mu(3);
  mu << 1.0, 1.0, 0.0;
  p.fiber(SlotName::MU) = mu;
  CHECK(h.eval(p) == doctest::Approx(0.5 * (1.0 + 2.0)).epsilon(1e-15));
  Vec grad = h.grad_fiber(SlotName::MU, p);
  CHECK(grad[0] == doctest::Approx(1.0));
  CHECK(grad[1] == doctest::Approx(2.0));
  CHECK(grad[2] == doctest::Approx(0.0));

  Observable pr = parse("pair(mu, xi)", SpaceId::TTCG, GroupId::SO3);
  Rng rng(3);
  BundlePoint q = random_point(SpaceId::TTCG, GroupId::SO3, rng);
  CHECK(pr.eval(q) ==
        doctest::Approx(q.fiber(SlotName::MU).dot(q.fiber(SlotName::XI))).epsilon(1e-14));

  Observable mix = parse("mu[0]*nu[1] - xi[2]", SpaceId::TTCG, GroupId::SO3);
  Vec gn = mix.grad_fiber(SlotName::NU, q);
  CHECK(gn[0] == 0.0);
  CHECK(gn[1] == doctest::Approx(q.fiber(SlotName::MU)[0]));
  CHECK(gn[2] == 0.0);
}

TEST_CASE("parse: print round trip gives an equal tree") {
  Rng rng(17);
  const char* sources[] = {
      "0.5*quadratic_form(mu, [1, 2, 3]) + pair(mu, xi)",
      "mu[0]*nu[1] - xi[2]",
      "-(mu[0] + 2.5*nu[2])*xi[1] + 0.25",
      "trace_g * mu[1] + entry_g(0, 1)",
  };
  for (const char* src : sources) {
    Observable a = parse(src, SpaceId::TTCG, GroupId::SO3);
    Observable b = parse(a.print(), SpaceId::TTCG, GroupId::SO3);
    CHECK(node_equal(a.root(), b.root()));
    // and they evaluate identically
    BundlePoint p = random_point(SpaceId::TTCG, GroupId::SO3, rng);
    CHECK(a.eval(p) == doctest::Approx(b.eval(p)).epsilon(1e-15));
  }
}

TEST_CASE("parse: rejects unknown tokens and absent slots with a position") {
  CHECK_THROWS_AS(parse("mu[0] + bogus", SpaceId::DUAL, GroupId::SO3), usage_error);
  CHECK_THROWS_AS(parse("nu[0]", SpaceId::TCG, GroupId::SO3), usage_error);
  CHECK_THROWS_AS(parse("mu[7]", SpaceId::DUAL, GroupId::SO3), usage_error);
  CHECK_THROWS_AS(parse("mu[0] * ", SpaceId::DUAL, GroupId::SO3), usage_error);
  CHECK_THROWS_AS(parse("trace_g", SpaceId::DUAL, GroupId::SO3), usage_error);
  try {
    parse("mu[0] @ 2", SpaceId::DUAL, GroupId::SO3);
    CHECK(false);
  } catch (const usage_error& e) {
    CHECK(std::string(e.what()).find("column") != std::string::npos);
  }
}

TEST_CASE("gradients: constants vanish, quadratic forms are exact") {
  Rng rng(23);
  Observable c = parse("3.75", SpaceId::TTCG, GroupId::SE2);
  BundlePoint p = random_point(SpaceId::TTCG, GroupId::SE2, rng);
  CHECK(c.grad_fiber(SlotName::MU, p).norm() == 0.0);
  CHECK(c.grad_fiber(SlotName::XI, p).norm() == 0.0);
  CHECK(c.grad_group(p).norm() == 0.0);
}

TEST_CASE("gradients: analytic equals central finite differences on random polynomials") {
  const SpaceId spaces[] = {SpaceId::TCG, SpaceId::TSTG, SpaceId::TSTSG, SpaceId::TTCG,
                            SpaceId::DUAL_DUAL};
  Rng rng(29);
  const double h = 1e-6;
  for (SpaceId sp : spaces) {
    for (int trial = 0; trial < 100; ++trial) {
      Observable f = random_poly(sp, GroupId::SO3, rng);
      BundlePoint p = random_point(sp, GroupId::SO3, rng);
      for (const auto& slot : signature(sp).slots) {
        if (slot.kind == SlotKind::GRP) continue;
        Vec g = f.grad_fiber(slot.name, p);
        for (int i = 0; i < 3; ++i) {
          BundlePoint pp = p, pm = p;
          pp.fiber(slot.name)[i] += h;
          pm.fiber(slot.name)[i] -= h;
          double fd = (f.eval(pp) - f.eval(pm)) / (2 * h);
          double scale = std::max(1.0, std::abs(g[i]));
          CHECK(std::abs(g[i] - fd) / scale <= 1e-6);
        }
      }
    }
  }
}

TEST_CASE("group gradients: analytic whitelisted functionals match finite differences") {
  Rng rng(31);
  for (GroupId gid : {GroupId::SO3, GroupId::SE2, GroupId::H3}) {
    const Group& gr = Group::get(gid);
    Observable f = parse("trace_g*mu[0] + 0.5*entry_g(0, 1)", SpaceId::TCG, gid);
    for (int k = 0; k < 20; ++k) {
      BundlePoint p = random_point(SpaceId::TCG, gid, rng);
      Vec an = f.grad_group(p);
      const double h = 1e-6;
      for (int i = 0; i < gr.dim(); ++i) {
        Vec e = Vec::Zero(gr.dim());
        e[i] = 1.0;
        BundlePoint pp = p, pm = p;
        pp.g = group_mul(gr.exp(AlgebraVector(h * e)), *p.g);
        pm.g = group_mul(gr.exp(AlgebraVector(-h * e)), *p.g);
        double fd = (f.eval(pp) - f.eval(pm)) / (2 * h);
        CHECK(std::abs(an[i] - fd) <= 1e-7 * std::max(1.0, std::abs(an[i])));
      }
    }
  }
}

TEST_CASE("dependency queries") {
  Observable f = parse("mu[0]*nu[1] + trace_g", SpaceId::TTCG, GroupId::SO3);
  CHECK(f.depends_on(SlotName::MU));
  CHECK(f.depends_on(SlotName::NU));
  CHECK(!f.depends_on(SlotName::XI));
  CHECK(f.has_group_dependence());
  CHECK(!parse("mu[0]", SpaceId::TTCG, GroupId::SO3).has_group_dependence());
}

TEST_CASE("observable product obeys the product rule") {
  Rng rng(37);
  Observable f = random_poly(SpaceId::DUAL_DUAL, GroupId::SO3, rng);
  Observable g = random_poly(SpaceId::DUAL_DUAL, GroupId::SO3, rng);
  Observable fg = observable_product(f, g);
  for (int k = 0; k < 20; ++k) {
    BundlePoint p = random_point(SpaceId::DUAL_DUAL, GroupId::SO3, rng);
    CHECK(fg.eval(p) == doctest::Approx(f.eval(p) * g.eval(p)).epsilon(1e-13));
    Vec lhs = fg.grad_fiber(SlotName::MU, p);
    Vec rhs = f.eval(p) * g.grad_fiber(SlotName::MU, p) +
              g.eval(p) * f.grad_fiber(SlotName::MU, p);
    CHECK((lhs - rhs).norm() <= 1e-12 * std::max(1.0, rhs.norm()));
  }
}

TEST_CASE("parse: quadratic_form weight count must match the algebra dimension") {
  CHECK_THROWS_AS(parse("quadratic_form(mu, [1, 2])", SpaceId::DUAL, GroupId::SO3), usage_error);
  CHECK_THROWS_AS(parse("quadratic_form(mu, [1, 2, 3, 4])", SpaceId::DUAL, GroupId::SO3),
                  usage_error);
}

TEST_CASE("rename_slots: moves coordinates and rejects unmapped slots") {
  Observable f = parse("0.5*quadratic_form(nu, [1, 2, 3]) + nu[0]*xi[1]", SpaceId::DUAL_ALG,
                       GroupId::SO3);
  Observable g = rename_slots(f, SpaceId::DUAL_DUAL,
                              {{SlotName::NU, SlotName::MU}, {SlotName::XI, SlotName::NU}});
  Rng rng(3);
  for (int k = 0; k < 10; ++k) {
    Vec a = rng.vec(3), b = rng.vec(3);
    BundlePoint p = make_point(SpaceId::DUAL_ALG, GroupId::SO3, {a, b});
    BundlePoint q = make_point(SpaceId::DUAL_DUAL, GroupId::SO3, {a, b});
    CHECK(f.eval(p) == doctest::Approx(g.eval(q)).epsilon(1e-15));
  }
  CHECK_THROWS_AS(rename_slots(f, SpaceId::DUAL_DUAL, {{SlotName::NU, SlotName::MU}}),
                  usage_error);
}
