#include "gmech/brackets.hpp"

#include <cmath>

namespace gmech {

namespace {

struct Ops {
  const Group& gr;
  explicit Ops(GroupId id) : gr(Group::get(id)) {}
  Vec ad_(const Vec& a, const Vec& b) const {
    return ad(gr, AlgebraVector(a), AlgebraVector(b)).c;
  }
  Vec coad_(const Vec& a, const Vec& m) const {
    return coad(gr, AlgebraVector(a), CoalgebraVector(m)).c;
  }
};

struct Grads {
  Vec g, xi, mu, nu;  // zero when the slot is absent
};

Grads grads_of(const Observable& f, const BundlePoint& p) {
  const int n = Group::get(p.group).dim();
  Grads d;
  d.g = has_slot(f.space(), SlotName::G) ? f.grad_group(p) : Vec(Vec::Zero(n));
  d.xi = has_slot(f.space(), SlotName::XI) ? f.grad_fiber(SlotName::XI, p) : Vec(Vec::Zero(n));
  d.mu = has_slot(f.space(), SlotName::MU) ? f.grad_fiber(SlotName::MU, p) : Vec(Vec::Zero(n));
  d.nu = has_slot(f.space(), SlotName::NU) ? f.grad_fiber(SlotName::NU, p) : Vec(Vec::Zero(n));
  return d;
}

void check_pair(BracketId id, const Observable& F, const Observable& K) {
  if (F.space() != bracket_space(id) || K.space() != bracket_space(id))
    throw usage_error(std::string("bracket ") + to_string(id) + " expects observables on " +
                      to_string(bracket_space(id)));
  if (F.group() != K.group()) throw usage_error("bracket: mismatched groups");
}

// Symbolic helpers over expression trees (polynomial observables).

NodePtr sym_pair(const Observable& F, SlotName a, const Observable& K, SlotName b, int n) {
  NodePtr s = nd_num(0.0);
  for (int i = 0; i < n; ++i)
    s = nd_add(s, nd_mul(diff_node(F.root(), a, i), diff_node(K.root(), b, i)));
  return s;
}

// <P_slot, [dF/da, dK/db]>
NodePtr sym_lp(const Group& gr, SlotName pslot, const Observable& F, SlotName a,
               const Observable& K, SlotName b) {
  const int n = gr.dim();
  NodePtr s = nd_num(0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double c = gr.structure_constant(i, j, k);
        if (c == 0.0) continue;
        s = nd_add(s, nd_mul(nd_num(c), nd_mul(nd_coord(pslot, k),
                                               nd_mul(diff_node(F.root(), a, i),
                                                      diff_node(K.root(), b, j)))));
      }
  return s;
}

// <dK/dx, [xi, dF/dv]>
NodePtr sym_sandwich(const Group& gr, SlotName xislot, const Observable& K, SlotName x,
                     const Observable& F, SlotName v) {
  const int n = gr.dim();
  NodePtr s = nd_num(0.0);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l)
      for (int j = 0; j < n; ++j) {
        double c = gr.structure_constant(i, l, j);
        if (c == 0.0) continue;
        s = nd_add(s, nd_mul(nd_num(c), nd_mul(nd_coord(xislot, i),
                                               nd_mul(diff_node(F.root(), v, l),
                                                      diff_node(K.root(), x, j)))));
      }
  return s;
}

}  // namespace

BracketId bracket_from_string(const std::string& name) {
  if (name == "can_tcg") return BracketId::CAN_TCG;
  if (name == "lp_gs") return BracketId::LP_D;
  if (name == "red_tstg_g") return BracketId::RED_TSTG_G;
  if (name == "red_tstg_alg") return BracketId::RED_TSTG_ALG;
  if (name == "lp_gsgs") return BracketId::LP_DD;
  if (name == "orb_omu_gs") return BracketId::ORB_OMU_D;
  if (name == "red_tstsg_g") return BracketId::RED_TSTSG_G;
  if (name == "red_tstsg_gs") return BracketId::RED_TSTSG_DS;
  if (name == "lp_gsg") return BracketId::LP_DA;
  if (name == "lp_gsg_alt") return BracketId::LP_DA_ALT;
  if (name == "red_ttcg_g") return BracketId::RED_TTCG_G;
  if (name == "red_ttcg_alg") return BracketId::RED_TTCG_A2;
  if (name == "red_ttcg_gs") return BracketId::RED_TTCG_D1;
  if (name == "red_ttcg_g_alg") return BracketId::RED_TTCG_GA2;
  if (name == "red_ttcg_g_gs") return BracketId::RED_TTCG_GD1;
  if (name == "orb_omu_gs2") return BracketId::ORB_OMU_D2;
  throw usage_error("unknown bracket id: " + name);
}

const char* to_string(BracketId id) {
  switch (id) {
    case BracketId::CAN_TCG: return "can_tcg";
    case BracketId::LP_D: return "lp_gs";
    case BracketId::RED_TSTG_G: return "red_tstg_g";
    case BracketId::RED_TSTG_ALG: return "red_tstg_alg";
    case BracketId::LP_DD: return "lp_gsgs";
    case BracketId::ORB_OMU_D: return "orb_omu_gs";
    case BracketId::RED_TSTSG_G: return "red_tstsg_g";
    case BracketId::RED_TSTSG_DS: return "red_tstsg_gs";
    case BracketId::LP_DA: return "lp_gsg";
    case BracketId::LP_DA_ALT: return "lp_gsg_alt";
    case BracketId::RED_TTCG_G: return "red_ttcg_g";
    case BracketId::RED_TTCG_A2: return "red_ttcg_alg";
    case BracketId::RED_TTCG_D1: return "red_ttcg_gs";
    case BracketId::RED_TTCG_GA2: return "red_ttcg_g_alg";
    case BracketId::RED_TTCG_GD1: return "red_ttcg_g_gs";
    case BracketId::ORB_OMU_D2: return "orb_omu_gs2";
  }
  return "?";
}

std::vector<BracketId> all_brackets() {
  return {BracketId::CAN_TCG,      BracketId::LP_D,          BracketId::RED_TSTG_G,
          BracketId::RED_TSTG_ALG, BracketId::LP_DD,         BracketId::ORB_OMU_D,
          BracketId::RED_TSTSG_G,  BracketId::RED_TSTSG_DS,  BracketId::LP_DA,
          BracketId::LP_DA_ALT, BracketId::RED_TTCG_G,   BracketId::RED_TTCG_A2,
          BracketId::RED_TTCG_D1,  BracketId::RED_TTCG_GA2,  BracketId::RED_TTCG_GD1,
          BracketId::ORB_OMU_D2};
}

SpaceId bracket_space(BracketId id) {
  switch (id) {
    case BracketId::CAN_TCG: return SpaceId::TCG;
    case BracketId::LP_D: return SpaceId::DUAL;
    case BracketId::RED_TSTG_G: return SpaceId::SUB_A_DD;
    case BracketId::RED_TSTG_ALG: return SpaceId::SUB_G_DD;
    case BracketId::LP_DD: return SpaceId::DUAL_DUAL;
    case BracketId::ORB_OMU_D: return SpaceId::DUAL_DUAL;
    case BracketId::RED_TSTSG_G: return SpaceId::DUAL_DUAL_ALG;
    case BracketId::RED_TSTSG_DS: return SpaceId::G_DUAL_ALG;
    case BracketId::LP_DA: return SpaceId::DUAL_ALG;
    case BracketId::LP_DA_ALT: return SpaceId::DUAL_ALG;
    case BracketId::RED_TTCG_G: return SpaceId::DUAL_ALG_DUAL;
    case BracketId::RED_TTCG_A2: return SpaceId::SUB_G_DD;
    case BracketId::RED_TTCG_D1: return SpaceId::G_ALG_DUAL;
    case BracketId::RED_TTCG_GA2: return SpaceId::DUAL_DUAL;
    case BracketId::RED_TTCG_GD1: return SpaceId::ALG_DUAL;
    case BracketId::ORB_OMU_D2: return SpaceId::DUAL_DUAL;
  }
  throw usage_error("bad bracket id");
}

double eval_bracket(BracketId id, const Observable& F, const Observable& K,
                    const BundlePoint& p) {
  check_pair(id, F, K);
  Ops o(p.group);
  Grads dF = grads_of(F, p), dK = grads_of(K, p);
  auto lp = [&](const Vec& P, const Vec& a, const Vec& b) { return P.dot(o.ad_(a, b)); };
  auto sw = [&](const Vec& X, const Vec& xi, const Vec& v) { return X.dot(o.ad_(xi, v)); };
  switch (id) {
    case BracketId::CAN_TCG:
      return lp(p.fiber(SlotName::MU), dF.mu, dK.mu) + dK.g.dot(dF.mu) - dF.g.dot(dK.mu);
    case BracketId::LP_D:
      return lp(p.fiber(SlotName::MU), dF.mu, dK.mu);
    case BracketId::RED_TSTG_G: {
      const Vec& xi = p.fiber(SlotName::XI);
      return dK.xi.dot(dF.nu) - dF.xi.dot(dK.nu) + lp(p.fiber(SlotName::MU), dF.mu, dK.mu) +
             sw(dK.xi, xi, dF.mu) - sw(dF.xi, xi, dK.mu) +
             lp(p.fiber(SlotName::NU), dF.mu, dK.nu) - lp(p.fiber(SlotName::NU), dK.mu, dF.nu);
    }
    case BracketId::RED_TSTG_ALG:
      return dK.g.dot(dF.mu) - dF.g.dot(dK.mu) + lp(p.fiber(SlotName::MU), dF.mu, dK.mu) +
             lp(p.fiber(SlotName::NU), dF.mu, dK.nu) - lp(p.fiber(SlotName::NU), dK.mu, dF.nu);
    case BracketId::LP_DD:
    case BracketId::ORB_OMU_D:
    case BracketId::ORB_OMU_D2:
      return lp(p.fiber(SlotName::MU), dF.mu, dK.mu) +
             lp(p.fiber(SlotName::NU), dF.mu, dK.nu) - lp(p.fiber(SlotName::NU), dK.mu, dF.nu);
    case BracketId::RED_TSTSG_G: {
      const Vec& xi = p.fiber(SlotName::XI);
      return dF.xi.dot(dK.mu) - dK.xi.dot(dF.mu) + lp(p.fiber(SlotName::MU), dF.mu, dK.nu) -
             lp(p.fiber(SlotName::MU), dK.mu, dF.nu) + lp(p.fiber(SlotName::NU), dF.nu, dK.nu) +
             sw(dK.xi, xi, dF.nu) - sw(dF.xi, xi, dK.nu);
    }
    case BracketId::RED_TSTSG_DS: {
      const Vec& xi = p.fiber(SlotName::XI);
      return dK.g.dot(dF.nu) - dF.g.dot(dK.nu) + lp(p.fiber(SlotName::NU), dF.nu, dK.nu) +
             sw(dK.xi, xi, dF.nu) - sw(dF.xi, xi, dK.nu);
    }
    case BracketId::LP_DA: {
      const Vec& xi = p.fiber(SlotName::XI);
      return lp(p.fiber(SlotName::NU), dF.nu, dK.nu) + sw(dK.xi, xi, dF.nu) -
             sw(dF.xi, xi, dK.nu);
    }
    case BracketId::LP_DA_ALT:
      // the variant's coupling term cancels identically
      return lp(p.fiber(SlotName::NU), dF.nu, dK.nu);
    case BracketId::RED_TTCG_G:
      return dK.xi.dot(dF.mu) - dF.xi.dot(dK.mu) + lp(p.fiber(SlotName::NU), dF.nu, dK.nu);
    case BracketId::RED_TTCG_A2:
    case BracketId::RED_TTCG_D1:
      return dK.g.dot(dF.nu) - dF.g.dot(dK.nu) + lp(p.fiber(SlotName::NU), dF.nu, dK.nu);
    case BracketId::RED_TTCG_GA2:
    case BracketId::RED_TTCG_GD1:
      return lp(p.fiber(SlotName::NU), dF.nu, dK.nu);
  }
  throw usage_error("bad bracket id");
}

Observable bracket_observable(BracketId id, const Observable& F, const Observable& K) {
  check_pair(id, F, K);
  if (F.has_group_dependence() || K.has_group_dependence())
    throw usage_error("bracket_observable: polynomial observables required");
  const Group& gr = Group::get(F.group());
  const int n = gr.dim();
  SpaceId sp = bracket_space(id);
  NodePtr s = nd_num(0.0);
  switch (id) {
    case BracketId::CAN_TCG:
    case BracketId::LP_D:
      s = sym_lp(gr, SlotName::MU, F, SlotName::MU, K, SlotName::MU);
      break;
    case BracketId::RED_TSTG_G:
      s = nd_add(sym_pair(F, SlotName::NU, K, SlotName::XI, n),
                 nd_neg(sym_pair(F, SlotName::XI, K, SlotName::NU, n)));
      s = nd_add(s, sym_lp(gr, SlotName::MU, F, SlotName::MU, K, SlotName::MU));
      s = nd_add(s, sym_sandwich(gr, SlotName::XI, K, SlotName::XI, F, SlotName::MU));
      s = nd_sub(s, sym_sandwich(gr, SlotName::XI, F, SlotName::XI, K, SlotName::MU));
      s = nd_add(s, sym_lp(gr, SlotName::NU, F, SlotName::MU, K, SlotName::NU));
      s = nd_sub(s, sym_lp(gr, SlotName::NU, K, SlotName::MU, F, SlotName::NU));
      break;
    case BracketId::RED_TSTG_ALG:
      s = sym_lp(gr, SlotName::MU, F, SlotName::MU, K, SlotName::MU);
      s = nd_add(s, sym_lp(gr, SlotName::NU, F, SlotName::MU, K, SlotName::NU));
      s = nd_sub(s, sym_lp(gr, SlotName::NU, K, SlotName::MU, F, SlotName::NU));
      break;
    case BracketId::LP_DD:
    case BracketId::ORB_OMU_D:
    case BracketId::ORB_OMU_D2:
      s = sym_lp(gr, SlotName::MU, F, SlotName::MU, K, SlotName::MU);
      s = nd_add(s, sym_lp(gr, SlotName::NU, F, SlotName::MU, K, SlotName::NU));
      s = nd_sub(s, sym_lp(gr, SlotName::NU, K, SlotName::MU, F, SlotName::NU));
      break;
    case BracketId::RED_TSTSG_G:
      s = nd_add(sym_pair(F, SlotName::XI, K, SlotName::MU, n),
                 nd_neg(sym_pair(F, SlotName::MU, K, SlotName::XI, n)));
      s = nd_add(s, sym_lp(gr, SlotName::MU, F, SlotName::MU, K, SlotName::NU));
      s = nd_sub(s, sym_lp(gr, SlotName::MU, K, SlotName::MU, F, SlotName::NU));
      s = nd_add(s, sym_lp(gr, SlotName::NU, F, SlotName::NU, K, SlotName::NU));
      s = nd_add(s, sym_sandwich(gr, SlotName::XI, K, SlotName::XI, F, SlotName::NU));
      s = nd_sub(s, sym_sandwich(gr, SlotName::XI, F, SlotName::XI, K, SlotName::NU));
      break;
    case BracketId::RED_TSTSG_DS:
    case BracketId::LP_DA:
      s = sym_lp(gr, SlotName::NU, F, SlotName::NU, K, SlotName::NU);
      s = nd_add(s, sym_sandwich(gr, SlotName::XI, K, SlotName::XI, F, SlotName::NU));
      s = nd_sub(s, sym_sandwich(gr, SlotName::XI, F, SlotName::XI, K, SlotName::NU));
      break;
    case BracketId::LP_DA_ALT:
      s = sym_lp(gr, SlotName::NU, F, SlotName::NU, K, SlotName::NU);
      break;
    case BracketId::RED_TTCG_G:
      s = nd_add(sym_pair(F, SlotName::MU, K, SlotName::XI, n),
                 nd_neg(sym_pair(F, SlotName::XI, K, SlotName::MU, n)));
      s = nd_add(s, sym_lp(gr, SlotName::NU, F, SlotName::NU, K, SlotName::NU));
      break;
    case BracketId::RED_TTCG_A2:
    case BracketId::RED_TTCG_D1:
    case BracketId::RED_TTCG_GA2:
    case BracketId::RED_TTCG_GD1:
      s = sym_lp(gr, SlotName::NU, F, SlotName::NU, K, SlotName::NU);
      break;
  }
  return observable_from_node(sp, F.group(), s);
}

double jacobi_residual(BracketId id, const Observable& F, const Observable& K,
                       const Observable& L, const BundlePoint& p) {
  Observable kl = bracket_observable(id, K, L);
  Observable lf = bracket_observable(id, L, F);
  Observable fk = bracket_observable(id, F, K);
  return std::abs(eval_bracket(id, F, kl, p) + eval_bracket(id, K, lf, p) +
                  eval_bracket(id, L, fk, p));
}

Tuple bracket_flow_rates(BracketId id, const Observable& H, const BundlePoint& p) {
  switch (id) {
    case BracketId::CAN_TCG: return hamiltonian_vf(Formulation::HAM_TCG, H, p);
    case BracketId::LP_D: return hamiltonian_vf(Formulation::LP, H, p);
    case BracketId::RED_TSTG_G: return hamiltonian_vf(Formulation::RF_TSTG_G, H, p);
    case BracketId::RED_TSTG_ALG: return hamiltonian_vf(Formulation::RF_TSTG_A, H, p);
    case BracketId::LP_DD:
    case BracketId::ORB_OMU_D:
    case BracketId::ORB_OMU_D2: return hamiltonian_vf(Formulation::LP_DD, H, p);
    case BracketId::RED_TSTSG_G: return hamiltonian_vf(Formulation::RF_TSTSG_G, H, p);
    case BracketId::RED_TSTSG_DS: return hamiltonian_vf(Formulation::RF_TSTSG_D, H, p);
    case BracketId::LP_DA:
    case BracketId::LP_DA_ALT: return hamiltonian_vf(Formulation::LP_DA, H, p);
    case BracketId::RED_TTCG_G: return hamiltonian_vf(Formulation::RF_TTCG_G, H, p);
    case BracketId::RED_TTCG_A2: return hamiltonian_vf(Formulation::RF_TTCG_A2, H, p);
    case BracketId::RED_TTCG_D1: return hamiltonian_vf(Formulation::RF_TTCG_D1, H, p);
    case BracketId::RED_TTCG_GA2: return hamiltonian_vf(Formulation::RF_TTCG_GA2, H, p);
    case BracketId::RED_TTCG_GD1: return hamiltonian_vf(Formulation::RF_TTCG_GD1, H, p);
  }
  throw usage_error("bad bracket id");
}

double bracket_flow_consistency(BracketId id, const Observable& H, const Observable& F,
                                const BundlePoint& p) {
  Tuple rates = bracket_flow_rates(id, H, p);
  return std::abs(derivative_along(F, p, rates) + eval_bracket(id, F, H, p));
}

}  // namespace gmech
