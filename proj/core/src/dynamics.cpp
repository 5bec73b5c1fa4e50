#include "gmech/dynamics.hpp"

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

Vec grad_or_zero(const Observable& obs, SlotName slot, const BundlePoint& p) {
  if (!has_slot(obs.space(), slot)) return Vec::Zero(Group::get(p.group).dim());
  return obs.grad_fiber(slot, p);
}

Vec ggrad(const Observable& obs, const BundlePoint& p) {
  if (!has_slot(obs.space(), SlotName::G)) return Vec::Zero(Group::get(p.group).dim());
  return obs.grad_group(p);
}

void check_space(Formulation f, const Observable& obs) {
  if (obs.space() != formulation_space(f))
    throw usage_error(std::string("observable lives on ") + to_string(obs.space()) +
                      " but formulation " + to_string(f) + " needs " +
                      to_string(formulation_space(f)));
}

int tuple_slot(SpaceId space, SlotName name) {
  int i = slot_index(space, name);
  if (i < 0) throw usage_error("slot absent");
  return i;
}

}  // namespace

Formulation formulation_from_string(const std::string& name) {
  if (name == "el_tg") return Formulation::EL_TG;
  if (name == "ep") return Formulation::EP;
  if (name == "ham_tcg") return Formulation::HAM_TCG;
  if (name == "lp") return Formulation::LP;
  if (name == "ham_tstg") return Formulation::HAM_TSTG;
  if (name == "ham_tstsg") return Formulation::HAM_TSTSG;
  if (name == "ham_ttcg") return Formulation::HAM_TTCG;
  if (name == "el_ttcg") return Formulation::EL_TTCG;
  if (name == "ep_ggs") return Formulation::EP_AD;
  if (name == "el_g_ggs") return Formulation::EL_GAD;
  if (name == "el_gg") return Formulation::EL_GA;
  if (name == "el_gs_ggs") return Formulation::EL_DAD;
  if (name == "lp_gsgs") return Formulation::LP_DD;
  if (name == "lp_gsg") return Formulation::LP_DA;
  if (name == "red_tstg_g") return Formulation::RF_TSTG_G;
  if (name == "red_tstg_alg") return Formulation::RF_TSTG_A;
  if (name == "red_tstsg_g") return Formulation::RF_TSTSG_G;
  if (name == "red_tstsg_gs") return Formulation::RF_TSTSG_D;
  if (name == "red_ttcg_g") return Formulation::RF_TTCG_G;
  if (name == "red_ttcg_alg") return Formulation::RF_TTCG_A2;
  if (name == "red_ttcg_gs") return Formulation::RF_TTCG_D1;
  if (name == "red_ttcg_g_alg") return Formulation::RF_TTCG_GA2;
  if (name == "red_ttcg_g_gs") return Formulation::RF_TTCG_GD1;
  throw usage_error("unknown formulation: " + name);
}

const char* to_string(Formulation f) {
  switch (f) {
    case Formulation::EL_TG: return "el_tg";
    case Formulation::EP: return "ep";
    case Formulation::HAM_TCG: return "ham_tcg";
    case Formulation::LP: return "lp";
    case Formulation::HAM_TSTG: return "ham_tstg";
    case Formulation::HAM_TSTSG: return "ham_tstsg";
    case Formulation::HAM_TTCG: return "ham_ttcg";
    case Formulation::EL_TTCG: return "el_ttcg";
    case Formulation::EP_AD: return "ep_ggs";
    case Formulation::EL_GAD: return "el_g_ggs";
    case Formulation::EL_GA: return "el_gg";
    case Formulation::EL_DAD: return "el_gs_ggs";
    case Formulation::LP_DD: return "lp_gsgs";
    case Formulation::LP_DA: return "lp_gsg";
    case Formulation::RF_TSTG_G: return "red_tstg_g";
    case Formulation::RF_TSTG_A: return "red_tstg_alg";
    case Formulation::RF_TSTSG_G: return "red_tstsg_g";
    case Formulation::RF_TSTSG_D: return "red_tstsg_gs";
    case Formulation::RF_TTCG_G: return "red_ttcg_g";
    case Formulation::RF_TTCG_A2: return "red_ttcg_alg";
    case Formulation::RF_TTCG_D1: return "red_ttcg_gs";
    case Formulation::RF_TTCG_GA2: return "red_ttcg_g_alg";
    case Formulation::RF_TTCG_GD1: return "red_ttcg_g_gs";
  }
  return "?";
}

SpaceId formulation_space(Formulation f) {
  switch (f) {
    case Formulation::EL_TG: return SpaceId::TG;
    case Formulation::EP: return SpaceId::ALG;
    case Formulation::HAM_TCG: return SpaceId::TCG;
    case Formulation::LP: return SpaceId::DUAL;
    case Formulation::HAM_TSTG: return SpaceId::TSTG;
    case Formulation::HAM_TSTSG: return SpaceId::TSTSG;
    case Formulation::HAM_TTCG: return SpaceId::TTCG;
    case Formulation::EL_TTCG: return SpaceId::TTCG;
    case Formulation::EP_AD: return SpaceId::ALG_DUAL;
    case Formulation::EL_GAD: return SpaceId::G_ALG_DUAL;
    case Formulation::EL_GA: return SpaceId::TG;
    case Formulation::EL_DAD: return SpaceId::DUAL_ALG_DUAL;
    case Formulation::LP_DD: return SpaceId::DUAL_DUAL;
    case Formulation::LP_DA: return SpaceId::DUAL_ALG;
    case Formulation::RF_TSTG_G: return SpaceId::SUB_A_DD;
    case Formulation::RF_TSTG_A: return SpaceId::SUB_G_DD;
    case Formulation::RF_TSTSG_G: return SpaceId::DUAL_DUAL_ALG;
    case Formulation::RF_TSTSG_D: return SpaceId::G_DUAL_ALG;
    case Formulation::RF_TTCG_G: return SpaceId::DUAL_ALG_DUAL;
    case Formulation::RF_TTCG_A2: return SpaceId::SUB_G_DD;
    case Formulation::RF_TTCG_D1: return SpaceId::G_ALG_DUAL;
    case Formulation::RF_TTCG_GA2: return SpaceId::DUAL_DUAL;
    case Formulation::RF_TTCG_GD1: return SpaceId::ALG_DUAL;
  }
  throw usage_error("bad formulation");
}

bool is_lagrangian(Formulation f) {
  switch (f) {
    case Formulation::EL_TG:
    case Formulation::EP:
    case Formulation::EL_TTCG:
    case Formulation::EP_AD:
    case Formulation::EL_GAD:
    case Formulation::EL_GA:
    case Formulation::EL_DAD:
      return true;
    default:
      return false;
  }
}

std::vector<SlotName> velocity_slots(Formulation f) {
  switch (f) {
    case Formulation::EL_TG:
    case Formulation::EP:
    case Formulation::EL_GA:
      return {SlotName::XI};
    case Formulation::EL_TTCG:
    case Formulation::EP_AD:
    case Formulation::EL_GAD:
    case Formulation::EL_DAD:
      return {SlotName::XI, SlotName::NU};
    default:
      return {};
  }
}

namespace {

// Momenta of a Lagrangian state: concatenated gradients over velocity slots.
Vec momenta_of(Formulation f, const Observable& obs, const BundlePoint& p) {
  auto slots = velocity_slots(f);
  const int n = Group::get(p.group).dim();
  Vec out(n * static_cast<int>(slots.size()));
  for (size_t k = 0; k < slots.size(); ++k) out.segment(k * n, n) = obs.grad_fiber(slots[k], p);
  return out;
}

}  // namespace

FlowState make_state(Formulation f, const Observable& obs, const BundlePoint& p0) {
  check_space(f, obs);
  FlowState s;
  s.p = p0;
  if (is_lagrangian(f)) s.momenta = momenta_of(f, obs, p0);
  return s;
}

void recover_velocities(Formulation f, const Observable& obs, FlowState& s) {
  auto slots = velocity_slots(f);
  if (slots.empty()) return;
  const int n = Group::get(s.p.group).dim();
  const int m = n * static_cast<int>(slots.size());
  // The fiber derivative is affine in the velocities for the supported
  // (quadratic) Lagrangians; probe the offset and the mass matrix exactly.
  BundlePoint probe = s.p;
  for (auto sl : slots) probe.fiber(sl).setZero();
  Vec c = momenta_of(f, obs, probe);
  Mat mass(m, m);
  for (int j = 0; j < m; ++j) {
    BundlePoint q = probe;
    q.fiber(slots[j / n])[j % n] = 1.0;
    mass.col(j) = momenta_of(f, obs, q) - c;
  }
  Eigen::FullPivLU<Mat> lu(mass);
  if (!lu.isInvertible())
    throw regularity_error("singular velocity mass matrix; Lagrangian is not regular");
  Vec v = lu.solve(s.momenta - c);
  for (size_t k = 0; k < slots.size(); ++k) s.p.fiber(slots[k]) = v.segment(k * n, n);
}

Tuple hamiltonian_vf(Formulation f, const Observable& H, const BundlePoint& p) {
  check_space(f, H);
  if (is_lagrangian(f)) throw usage_error("hamiltonian_vf: Lagrangian formulation");
  Ops o(p.group);
  SpaceId sp = formulation_space(f);
  Tuple r = zero_tuple(sp, p.group);
  switch (f) {
    case Formulation::HAM_TCG: {
      Vec u = H.grad_fiber(SlotName::MU, p);
      r.comps[0] = u;
      r.comps[1] = o.coad_(u, p.fiber(SlotName::MU)) - ggrad(H, p);
      return r;
    }
    case Formulation::LP: {
      Vec u = H.grad_fiber(SlotName::MU, p);
      r.comps[0] = o.coad_(u, p.fiber(SlotName::MU));
      return r;
    }
    case Formulation::HAM_TSTG: {
      const Vec &xi = p.fiber(SlotName::XI), &mu = p.fiber(SlotName::MU),
                &nu = p.fiber(SlotName::NU);
      Vec u1 = H.grad_fiber(SlotName::MU, p);
      Vec u2 = H.grad_fiber(SlotName::NU, p);
      Vec X = H.grad_fiber(SlotName::XI, p);
      r.comps[tuple_slot(sp, SlotName::G)] = u1;
      r.comps[tuple_slot(sp, SlotName::XI)] = u2 + o.ad_(xi, u1);
      r.comps[tuple_slot(sp, SlotName::MU)] =
          o.coad_(u1, mu) + o.coad_(u2, nu) - o.coad_(xi, X) - ggrad(H, p);
      r.comps[tuple_slot(sp, SlotName::NU)] = o.coad_(u1, nu) - X;
      return r;
    }
    case Formulation::HAM_TSTSG: {
      const Vec &xi = p.fiber(SlotName::XI), &mu = p.fiber(SlotName::MU),
                &nu = p.fiber(SlotName::NU);
      Vec u = H.grad_fiber(SlotName::MU, p);
      Vec w = H.grad_fiber(SlotName::NU, p);
      Vec X = H.grad_fiber(SlotName::XI, p);
      r.comps[tuple_slot(sp, SlotName::G)] = w;
      r.comps[tuple_slot(sp, SlotName::MU)] = o.coad_(w, mu) + X;
      r.comps[tuple_slot(sp, SlotName::NU)] =
          o.coad_(w, nu) + o.coad_(u, mu) - o.coad_(xi, X) - ggrad(H, p);
      r.comps[tuple_slot(sp, SlotName::XI)] = -u + o.ad_(xi, w);
      return r;
    }
    case Formulation::HAM_TTCG: {
      const Vec& nu = p.fiber(SlotName::NU);
      Vec u = H.grad_fiber(SlotName::MU, p);
      Vec w = H.grad_fiber(SlotName::NU, p);
      Vec X = H.grad_fiber(SlotName::XI, p);
      r.comps[tuple_slot(sp, SlotName::G)] = w;
      r.comps[tuple_slot(sp, SlotName::MU)] = -X;
      r.comps[tuple_slot(sp, SlotName::XI)] = u;
      r.comps[tuple_slot(sp, SlotName::NU)] = o.coad_(w, nu) - ggrad(H, p);
      return r;
    }
    case Formulation::LP_DD: {
      const Vec &mu = p.fiber(SlotName::MU), &nu = p.fiber(SlotName::NU);
      Vec u = H.grad_fiber(SlotName::MU, p);
      Vec w = H.grad_fiber(SlotName::NU, p);
      r.comps[0] = o.coad_(u, mu) + o.coad_(w, nu);
      r.comps[1] = o.coad_(u, nu);
      return r;
    }
    case Formulation::LP_DA: {
      const Vec &nu = p.fiber(SlotName::NU), &xi = p.fiber(SlotName::XI);
      Vec w = H.grad_fiber(SlotName::NU, p);
      Vec X = H.grad_fiber(SlotName::XI, p);
      r.comps[0] = o.coad_(w, nu) - o.coad_(xi, X);
      r.comps[1] = o.ad_(xi, w);
      return r;
    }
    case Formulation::RF_TSTG_G: {
      const Vec &xi = p.fiber(SlotName::XI), &mu = p.fiber(SlotName::MU),
                &nu = p.fiber(SlotName::NU);
      Vec u = H.grad_fiber(SlotName::MU, p);
      Vec w = H.grad_fiber(SlotName::NU, p);
      Vec X = H.grad_fiber(SlotName::XI, p);
      r.comps[tuple_slot(sp, SlotName::XI)] = w + o.ad_(xi, u);
      r.comps[tuple_slot(sp, SlotName::MU)] =
          o.coad_(u, mu) + o.coad_(w, nu) - o.coad_(xi, X);
      r.comps[tuple_slot(sp, SlotName::NU)] = o.coad_(u, nu) - X;
      return r;
    }
    case Formulation::RF_TSTG_A: {
      const Vec &mu = p.fiber(SlotName::MU), &nu = p.fiber(SlotName::NU);
      Vec u = H.grad_fiber(SlotName::MU, p);
      Vec w = H.grad_fiber(SlotName::NU, p);
      r.comps[tuple_slot(sp, SlotName::G)] = u;
      r.comps[tuple_slot(sp, SlotName::MU)] =
          o.coad_(u, mu) + o.coad_(w, nu) - ggrad(H, p);
      r.comps[tuple_slot(sp, SlotName::NU)] = o.coad_(u, nu);
      return r;
    }
    case Formulation::RF_TSTSG_G: {
      const Vec &xi = p.fiber(SlotName::XI), &mu = p.fiber(SlotName::MU),
                &nu = p.fiber(SlotName::NU);
      Vec u = H.grad_fiber(SlotName::MU, p);
      Vec w = H.grad_fiber(SlotName::NU, p);
      Vec X = H.grad_fiber(SlotName::XI, p);
      r.comps[tuple_slot(sp, SlotName::MU)] = o.coad_(w, mu) + X;
      r.comps[tuple_slot(sp, SlotName::NU)] =
          o.coad_(w, nu) + o.coad_(u, mu) - o.coad_(xi, X);
      r.comps[tuple_slot(sp, SlotName::XI)] = -u + o.ad_(xi, w);
      return r;
    }
    case Formulation::RF_TSTSG_D: {
      const Vec &xi = p.fiber(SlotName::XI), &nu = p.fiber(SlotName::NU);
      Vec w = H.grad_fiber(SlotName::NU, p);
      Vec X = H.grad_fiber(SlotName::XI, p);
      r.comps[tuple_slot(sp, SlotName::G)] = w;
      r.comps[tuple_slot(sp, SlotName::NU)] =
          o.coad_(w, nu) - o.coad_(xi, X) - ggrad(H, p);
      r.comps[tuple_slot(sp, SlotName::XI)] = o.ad_(xi, w);
      return r;
    }
    case Formulation::RF_TTCG_G: {
      const Vec& nu = p.fiber(SlotName::NU);
      r.comps[tuple_slot(sp, SlotName::MU)] = -H.grad_fiber(SlotName::XI, p);
      r.comps[tuple_slot(sp, SlotName::XI)] = H.grad_fiber(SlotName::MU, p);
      r.comps[tuple_slot(sp, SlotName::NU)] = o.coad_(H.grad_fiber(SlotName::NU, p), nu);
      return r;
    }
    case Formulation::RF_TTCG_A2: {
      Vec w = H.grad_fiber(SlotName::NU, p);
      r.comps[tuple_slot(sp, SlotName::G)] = w;
      r.comps[tuple_slot(sp, SlotName::NU)] =
          o.coad_(w, p.fiber(SlotName::NU)) - ggrad(H, p);
      return r;
    }
    case Formulation::RF_TTCG_D1: {
      Vec w = H.grad_fiber(SlotName::NU, p);
      r.comps[tuple_slot(sp, SlotName::G)] = w;
      r.comps[tuple_slot(sp, SlotName::NU)] =
          o.coad_(w, p.fiber(SlotName::NU)) - ggrad(H, p);
      return r;
    }
    case Formulation::RF_TTCG_GA2:
    case Formulation::RF_TTCG_GD1: {
      Vec w = H.grad_fiber(SlotName::NU, p);
      r.comps[tuple_slot(sp, SlotName::NU)] = o.coad_(w, p.fiber(SlotName::NU));
      return r;
    }
    default:
      throw usage_error("hamiltonian_vf: unsupported formulation");
  }
}

StateRates vector_field(Formulation f, const Observable& obs, const FlowState& s) {
  check_space(f, obs);
  if (!is_lagrangian(f)) return {hamiltonian_vf(f, obs, s.p), Vec()};
  Ops o(s.p.group);
  const BundlePoint& p = s.p;
  SpaceId sp = formulation_space(f);
  const int n = Group::get(p.group).dim();
  StateRates out;
  out.point_rates = zero_tuple(sp, p.group);
  switch (f) {
    case Formulation::EL_TG:
    case Formulation::EL_GA: {
      const Vec& xi = p.fiber(SlotName::XI);
      const Vec pi = s.momenta;
      out.point_rates.comps[0] = xi;
      out.momenta_rates = ggrad(obs, p) + o.coad_(xi, pi);
      return out;
    }
    case Formulation::EP: {
      const Vec& xi = p.fiber(SlotName::XI);
      out.momenta_rates = o.coad_(xi, s.momenta);
      return out;
    }
    case Formulation::EL_TTCG:
    case Formulation::EP_AD:
    case Formulation::EL_GAD:
    case Formulation::EL_DAD: {
      const Vec& xi = p.fiber(SlotName::XI);
      const Vec& nu = p.fiber(SlotName::NU);
      Vec pi_xi = s.momenta.head(n);
      Vec p_nu = s.momenta.tail(n);
      Vec u = grad_or_zero(obs, SlotName::MU, p);
      out.momenta_rates.resize(2 * n);
      Vec mu_term = Vec::Zero(n);
      if (has_slot(sp, SlotName::MU)) {
        const Vec& mu = p.fiber(SlotName::MU);
        mu_term = o.coad_(u, mu);
        out.point_rates.comps[tuple_slot(sp, SlotName::MU)] = nu - o.coad_(xi, mu);
      }
      if (has_slot(sp, SlotName::G)) out.point_rates.comps[tuple_slot(sp, SlotName::G)] = xi;
      out.momenta_rates.head(n) = ggrad(obs, p) + mu_term + o.coad_(xi, pi_xi) + o.coad_(p_nu, nu);
      out.momenta_rates.tail(n) = u + o.ad_(xi, p_nu);
      return out;
    }
    default:
      throw usage_error("vector_field: unsupported formulation");
  }
}

FlowState advance_state(Formulation f, const Observable& obs, const FlowState& s,
                        const StateRates& rates, double h) {
  FlowState out;
  out.p = advance(s.p, rates.point_rates, h);
  if (is_lagrangian(f)) {
    out.momenta = s.momenta + h * rates.momenta_rates;
    recover_velocities(f, obs, out);
  }
  return out;
}

double derivative_along(const Observable& obs, const BundlePoint& p, const Tuple& rates) {
  const auto& sig = signature(p.space);
  double d = 0.0;
  for (size_t i = 0; i < sig.slots.size(); ++i) {
    if (sig.slots[i].kind == SlotKind::GRP) {
      d += ggrad(obs, p).dot(rates.comps[i]);
    } else {
      d += obs.grad_fiber(sig.slots[i].name, p).dot(rates.comps[i]);
    }
  }
  return d;
}

LegendreResult legendre(const Observable& L, const BundlePoint& p) {
  if (L.space() != SpaceId::TG) throw usage_error("legendre: Lagrangian must live on tg");
  FlowState s = make_state(Formulation::EL_TG, L, p);
  recover_velocities(Formulation::EL_TG, L, s);  // checks regularity
  LegendreResult r;
  r.mu = CoalgebraVector(s.momenta);
  r.xi = AlgebraVector(s.p.fiber(SlotName::XI));
  r.hamiltonian = s.momenta.dot(s.p.fiber(SlotName::XI)) - L.eval(s.p);
  return r;
}

Tuple legendre_ham_vf(const Observable& L, const BundlePoint& p_tcg) {
  if (p_tcg.space != SpaceId::TCG) throw usage_error("legendre_ham_vf: expects a tcg point");
  Ops o(p_tcg.group);
  // Recover xi(mu) from the fiber derivative of L at the same base point.
  BundlePoint ptg = identity_point(SpaceId::TG, p_tcg.group);
  ptg.g = p_tcg.g;
  FlowState s;
  s.p = ptg;
  s.momenta = p_tcg.fiber(SlotName::MU);
  recover_velocities(Formulation::EL_TG, L, s);
  Vec xi = s.p.fiber(SlotName::XI);
  Tuple r = zero_tuple(SpaceId::TCG, p_tcg.group);
  r.comps[0] = xi;
  // dH/dg = -dL/dg at the recovered velocity
  r.comps[1] = o.coad_(xi, p_tcg.fiber(SlotName::MU)) + L.grad_group(s.p);
  return r;
}

double energy_invariant(Formulation f, const Observable& obs, const FlowState& s) {
  if (!is_lagrangian(f)) throw usage_error("energy_invariant: Lagrangian formulations only");
  const int n = Group::get(s.p.group).dim();
  auto slots = velocity_slots(f);
  double e = -obs.eval(s.p);
  for (size_t k = 0; k < slots.size(); ++k)
    e += s.momenta.segment(k * n, n).dot(s.p.fiber(slots[k]));
  return e;
}

Vec combined_tstg_residual(const Observable& H, const BundlePoint& prev, const BundlePoint& cur,
                           const BundlePoint& next, double dt) {
  Ops o(cur.group);
  auto quantity = [&](const BundlePoint& q) {
    return Vec(o.coad_(q.fiber(SlotName::XI), q.fiber(SlotName::NU)) - q.fiber(SlotName::MU));
  };
  Vec ddt = (quantity(next) - quantity(prev)) / (2.0 * dt);
  Vec u1 = H.grad_fiber(SlotName::MU, cur);
  Vec gterm = has_slot(SpaceId::TSTG, SlotName::G) && H.has_group_dependence()
                  ? H.grad_group(cur)
                  : Vec(Vec::Zero(u1.size()));
  return Vec(ddt - o.coad_(u1, quantity(cur)) - gterm);
}

}  // namespace gmech
