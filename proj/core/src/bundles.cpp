#include "gmech/bundles.hpp"

#include <algorithm>
#include <cmath>

namespace gmech {

namespace {

const SpaceSig& sig_of(SpaceId id) {
  using S = SlotSpec;
  static const SpaceSig tg{{S{SlotName::G, SlotKind::GRP}, S{SlotName::XI, SlotKind::ALG}}, true};
  static const SpaceSig tcg{{S{SlotName::G, SlotKind::GRP}, S{SlotName::MU, SlotKind::DUAL}}, true};
  static const SpaceSig tstg{{S{SlotName::G, SlotKind::GRP}, S{SlotName::XI, SlotKind::ALG},
                              S{SlotName::MU, SlotKind::DUAL}, S{SlotName::NU, SlotKind::DUAL}},
                             true};
  static const SpaceSig tstsg{{S{SlotName::G, SlotKind::GRP}, S{SlotName::MU, SlotKind::DUAL},
                               S{SlotName::NU, SlotKind::DUAL}, S{SlotName::XI, SlotKind::ALG}},
                              true};
  static const SpaceSig ttcg{{S{SlotName::G, SlotKind::GRP}, S{SlotName::MU, SlotKind::DUAL},
                              S{SlotName::XI, SlotKind::ALG}, S{SlotName::NU, SlotKind::DUAL}},
                             true};
  static const SpaceSig sub_gg{{S{SlotName::G, SlotKind::GRP}, S{SlotName::XI, SlotKind::ALG},
                                S{SlotName::MU, SlotKind::DUAL}},
                               true};
  static const SpaceSig sub_g_dd{{S{SlotName::G, SlotKind::GRP}, S{SlotName::MU, SlotKind::DUAL},
                                  S{SlotName::NU, SlotKind::DUAL}},
                                 true};
  static const SpaceSig sub_a_dd{{S{SlotName::XI, SlotKind::ALG}, S{SlotName::MU, SlotKind::DUAL},
                                  S{SlotName::NU, SlotKind::DUAL}},
                                 false};
  static const SpaceSig dual{{S{SlotName::MU, SlotKind::DUAL}}, false};
  static const SpaceSig alg{{S{SlotName::XI, SlotKind::ALG}}, false};
  static const SpaceSig dual_dual{{S{SlotName::MU, SlotKind::DUAL}, S{SlotName::NU, SlotKind::DUAL}},
                                  false};
  static const SpaceSig dual_alg{{S{SlotName::NU, SlotKind::DUAL}, S{SlotName::XI, SlotKind::ALG}},
                                 false};
  static const SpaceSig alg_dual{{S{SlotName::XI, SlotKind::ALG}, S{SlotName::NU, SlotKind::DUAL}},
                                 false};
  static const SpaceSig dda{{S{SlotName::MU, SlotKind::DUAL}, S{SlotName::NU, SlotKind::DUAL},
                             S{SlotName::XI, SlotKind::ALG}},
                            false};
  static const SpaceSig dad{{S{SlotName::MU, SlotKind::DUAL}, S{SlotName::XI, SlotKind::ALG},
                             S{SlotName::NU, SlotKind::DUAL}},
                            false};
  static const SpaceSig g_da{{S{SlotName::G, SlotKind::GRP}, S{SlotName::NU, SlotKind::DUAL},
                              S{SlotName::XI, SlotKind::ALG}},
                             true};
  static const SpaceSig g_ad{{S{SlotName::G, SlotKind::GRP}, S{SlotName::XI, SlotKind::ALG},
                              S{SlotName::NU, SlotKind::DUAL}},
                             true};
  switch (id) {
    case SpaceId::TG: return tg;
    case SpaceId::TCG: return tcg;
    case SpaceId::TSTG: return tstg;
    case SpaceId::TSTSG: return tstsg;
    case SpaceId::TTCG: return ttcg;
    case SpaceId::SUB_GG: return sub_gg;
    case SpaceId::SUB_G_DD: return sub_g_dd;
    case SpaceId::SUB_A_DD: return sub_a_dd;
    case SpaceId::DUAL: return dual;
    case SpaceId::ALG: return alg;
    case SpaceId::DUAL_DUAL: return dual_dual;
    case SpaceId::DUAL_ALG: return dual_alg;
    case SpaceId::ALG_DUAL: return alg_dual;
    case SpaceId::DUAL_DUAL_ALG: return dda;
    case SpaceId::DUAL_ALG_DUAL: return dad;
    case SpaceId::G_DUAL_ALG: return g_da;
    case SpaceId::G_ALG_DUAL: return g_ad;
  }
  throw usage_error("bad space id");
}

struct Ops {
  const Group& gr;
  explicit Ops(GroupId id) : gr(Group::get(id)) {}
  Vec ad_(const Vec& a, const Vec& b) const {
    return ad(gr, AlgebraVector(a), AlgebraVector(b)).c;
  }
  Vec coad_(const Vec& a, const Vec& m) const {
    return coad(gr, AlgebraVector(a), CoalgebraVector(m)).c;
  }
  Vec Ad_(const GroupElement& g, const Vec& a) const { return Ad(g, AlgebraVector(a)).c; }
  Vec coAd_(const GroupElement& g, const Vec& m) const { return coAd(g, CoalgebraVector(m)).c; }
};

void check_same(const BundlePoint& p, const BundlePoint& q) {
  if (p.space != q.space || p.group != q.group)
    throw usage_error("bundle operation: mismatched spaces");
}

}  // namespace

SpaceId space_from_string(const std::string& name) {
  if (name == "tg") return SpaceId::TG;
  if (name == "tcg") return SpaceId::TCG;
  if (name == "tstg") return SpaceId::TSTG;
  if (name == "tstsg") return SpaceId::TSTSG;
  if (name == "ttcg") return SpaceId::TTCG;
  if (name == "g_xi_mu") return SpaceId::SUB_GG;
  if (name == "g_mu_nu") return SpaceId::SUB_G_DD;
  if (name == "xi_mu_nu") return SpaceId::SUB_A_DD;
  if (name == "mu") return SpaceId::DUAL;
  if (name == "xi") return SpaceId::ALG;
  if (name == "mu_nu") return SpaceId::DUAL_DUAL;
  if (name == "nu_xi") return SpaceId::DUAL_ALG;
  if (name == "xi_nu") return SpaceId::ALG_DUAL;
  if (name == "mu_nu_xi") return SpaceId::DUAL_DUAL_ALG;
  if (name == "mu_xi_nu") return SpaceId::DUAL_ALG_DUAL;
  if (name == "g_nu_xi") return SpaceId::G_DUAL_ALG;
  if (name == "g_xi_nu") return SpaceId::G_ALG_DUAL;
  throw usage_error("unknown space id: " + name);
}

const char* to_string(SpaceId id) {
  switch (id) {
    case SpaceId::TG: return "tg";
    case SpaceId::TCG: return "tcg";
    case SpaceId::TSTG: return "tstg";
    case SpaceId::TSTSG: return "tstsg";
    case SpaceId::TTCG: return "ttcg";
    case SpaceId::SUB_GG: return "g_xi_mu";
    case SpaceId::SUB_G_DD: return "g_mu_nu";
    case SpaceId::SUB_A_DD: return "xi_mu_nu";
    case SpaceId::DUAL: return "mu";
    case SpaceId::ALG: return "xi";
    case SpaceId::DUAL_DUAL: return "mu_nu";
    case SpaceId::DUAL_ALG: return "nu_xi";
    case SpaceId::ALG_DUAL: return "xi_nu";
    case SpaceId::DUAL_DUAL_ALG: return "mu_nu_xi";
    case SpaceId::DUAL_ALG_DUAL: return "mu_xi_nu";
    case SpaceId::G_DUAL_ALG: return "g_nu_xi";
    case SpaceId::G_ALG_DUAL: return "g_xi_nu";
  }
  return "?";
}

const char* to_string(SlotName n) {
  switch (n) {
    case SlotName::G: return "g";
    case SlotName::XI: return "xi";
    case SlotName::MU: return "mu";
    case SlotName::NU: return "nu";
  }
  return "?";
}

const SpaceSig& signature(SpaceId id) { return sig_of(id); }

int slot_index(SpaceId id, SlotName name) {
  const auto& s = sig_of(id).slots;
  for (int i = 0; i < static_cast<int>(s.size()); ++i)
    if (s[i].name == name) return i;
  return -1;
}

bool has_slot(SpaceId id, SlotName name) { return slot_index(id, name) >= 0; }

const Vec& BundlePoint::fiber(SlotName name) const {
  int idx = slot_index(space, name);
  if (idx < 0) throw usage_error("fiber slot absent from space");
  return fibers[signature(space).has_group ? idx - 1 : idx];
}

Vec& BundlePoint::fiber(SlotName name) {
  int idx = slot_index(space, name);
  if (idx < 0) throw usage_error("fiber slot absent from space");
  return fibers[signature(space).has_group ? idx - 1 : idx];
}

BundlePoint identity_point(SpaceId space, GroupId group) {
  const Group& gr = Group::get(group);
  const auto& sig = sig_of(space);
  BundlePoint p;
  p.space = space;
  p.group = group;
  if (sig.has_group) p.g = gr.identity();
  const int nf = static_cast<int>(sig.slots.size()) - (sig.has_group ? 1 : 0);
  p.fibers.assign(nf, Vec::Zero(gr.dim()));
  return p;
}

BundlePoint make_point(SpaceId space, GroupId group, const GroupElement& g,
                       std::vector<Vec> fibers) {
  BundlePoint p = identity_point(space, group);
  if (!p.g) throw usage_error("make_point: space has no group slot");
  p.g = g;
  if (fibers.size() != p.fibers.size()) throw usage_error("make_point: wrong fiber count");
  p.fibers = std::move(fibers);
  return p;
}

BundlePoint make_point(SpaceId space, GroupId group, std::vector<Vec> fibers) {
  BundlePoint p = identity_point(space, group);
  if (p.g) throw usage_error("make_point: space has a group slot");
  if (fibers.size() != p.fibers.size()) throw usage_error("make_point: wrong fiber count");
  p.fibers = std::move(fibers);
  return p;
}

int point_flat_dim(SpaceId space, GroupId group) {
  const Group& gr = Group::get(group);
  const auto& sig = sig_of(space);
  int d = sig.has_group ? gr.mat_size() * gr.mat_size() : 0;
  d += gr.dim() * (static_cast<int>(sig.slots.size()) - (sig.has_group ? 1 : 0));
  return d;
}

Vec point_to_flat(const BundlePoint& p) {
  const Group& gr = Group::get(p.group);
  Vec out(point_flat_dim(p.space, p.group));
  int at = 0;
  if (p.g) {
    const int m = gr.mat_size();
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) out[at++] = p.g->m(r, c);
  }
  for (const Vec& f : p.fibers)
    for (int i = 0; i < f.size(); ++i) out[at++] = f[i];
  return out;
}

BundlePoint point_from_flat(SpaceId space, GroupId group, const Vec& flat) {
  if (flat.size() != point_flat_dim(space, group))
    throw usage_error("point_from_flat: wrong length");
  const Group& gr = Group::get(group);
  BundlePoint p = identity_point(space, group);
  int at = 0;
  if (p.g) {
    const int m = gr.mat_size();
    Mat gm(m, m);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) gm(r, c) = flat[at++];
    p.g = GroupElement{group, gm};
    if (gr.closure_residual(*p.g) > 1e-6)
      throw usage_error("point_from_flat: group slot violates representation closure");
    gr.project(*p.g);
  }
  for (Vec& f : p.fibers)
    for (int i = 0; i < f.size(); ++i) f[i] = flat[at++];
  return p;
}

Tuple zero_tuple(SpaceId space, GroupId group) {
  const Group& gr = Group::get(group);
  Tuple t;
  t.comps.assign(sig_of(space).slots.size(), Vec::Zero(gr.dim()));
  return t;
}

Tuple tuple_scale(const Tuple& t, double s) {
  Tuple out = t;
  for (Vec& v : out.comps) v *= s;
  return out;
}

Tuple tuple_add(const Tuple& a, const Tuple& b) {
  Tuple out = a;
  for (size_t i = 0; i < out.comps.size(); ++i) out.comps[i] += b.comps[i];
  return out;
}

double tuple_dot(const Tuple& a, const Tuple& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.comps.size(); ++i) s += a.comps[i].dot(b.comps[i]);
  return s;
}

double tuple_norm(const Tuple& t) { return std::sqrt(tuple_dot(t, t)); }

BundlePoint bundle_mul(const BundlePoint& p, const BundlePoint& q) {
  check_same(p, q);
  Ops o(p.group);
  BundlePoint out = p;
  switch (p.space) {
    case SpaceId::TG: {
      out.g = group_mul(*p.g, *q.g);
      out.fibers[0] = p.fibers[0] + o.Ad_(*p.g, q.fibers[0]);
      return out;
    }
    case SpaceId::TCG: {
      out.g = group_mul(*p.g, *q.g);
      out.fibers[0] = p.fibers[0] + o.coAd_(*p.g, q.fibers[0]);
      return out;
    }
    case SpaceId::TSTG: {
      // (g,xi,mu,nu)(h,eta,n1,n2) =
      //   (gh, xi + Ad_g eta, mu + coAd_g n1 + coad(xi, coAd_g n2), nu + coAd_g n2)
      out.g = group_mul(*p.g, *q.g);
      Vec an2 = o.coAd_(*p.g, q.fibers[2]);
      out.fibers[0] = p.fibers[0] + o.Ad_(*p.g, q.fibers[0]);
      out.fibers[1] = p.fibers[1] + o.coAd_(*p.g, q.fibers[1]) + o.coad_(p.fibers[0], an2);
      out.fibers[2] = p.fibers[2] + an2;
      return out;
    }
    case SpaceId::TSTSG: {
      // (g,mu,nu,xi)(h,n1,n2,eta) =
      //   (gh, mu + coAd_g n1, nu + coAd_g n2 - coad(Ad_g eta, mu), xi + Ad_g eta)
      out.g = group_mul(*p.g, *q.g);
      Vec ae = o.Ad_(*p.g, q.fibers[2]);
      out.fibers[0] = p.fibers[0] + o.coAd_(*p.g, q.fibers[0]);
      out.fibers[1] = p.fibers[1] + o.coAd_(*p.g, q.fibers[1]) - o.coad_(ae, p.fibers[0]);
      out.fibers[2] = p.fibers[2] + ae;
      return out;
    }
    case SpaceId::TTCG: {
      // (g,mu,xi,nu)(h,n1,eta,n2) =
      //   (gh, mu + coAd_g n1, xi + Ad_g eta, nu + coAd_g n2 - coad(Ad_g eta, mu))
      out.g = group_mul(*p.g, *q.g);
      Vec ae = o.Ad_(*p.g, q.fibers[1]);
      out.fibers[0] = p.fibers[0] + o.coAd_(*p.g, q.fibers[0]);
      out.fibers[1] = p.fibers[1] + ae;
      out.fibers[2] = p.fibers[2] + o.coAd_(*p.g, q.fibers[2]) - o.coad_(ae, p.fibers[0]);
      return out;
    }
    case SpaceId::SUB_GG: {
      out.g = group_mul(*p.g, *q.g);
      out.fibers[0] = p.fibers[0] + o.Ad_(*p.g, q.fibers[0]);
      out.fibers[1] = p.fibers[1] + o.coAd_(*p.g, q.fibers[1]);
      return out;
    }
    case SpaceId::SUB_G_DD: {
      out.g = group_mul(*p.g, *q.g);
      out.fibers[0] = p.fibers[0] + o.coAd_(*p.g, q.fibers[0]);
      out.fibers[1] = p.fibers[1] + o.coAd_(*p.g, q.fibers[1]);
      return out;
    }
    case SpaceId::SUB_A_DD: {
      // (xi,mu,nu)(eta,n1,n2) = (xi+eta, mu+n1+coad(xi,n2), nu+n2)
      out.fibers[0] = p.fibers[0] + q.fibers[0];
      out.fibers[1] = p.fibers[1] + q.fibers[1] + o.coad_(p.fibers[0], q.fibers[2]);
      out.fibers[2] = p.fibers[2] + q.fibers[2];
      return out;
    }
    default: {
      // reduced vector spaces: componentwise addition
      for (size_t i = 0; i < out.fibers.size(); ++i) out.fibers[i] = p.fibers[i] + q.fibers[i];
      if (p.g) out.g = group_mul(*p.g, *q.g);
      return out;
    }
  }
}

BundlePoint bundle_inverse(const BundlePoint& p) {
  Ops o(p.group);
  BundlePoint out = p;
  switch (p.space) {
    case SpaceId::TG: {
      GroupElement gi = inverse(*p.g);
      out.g = gi;
      out.fibers[0] = -o.Ad_(gi, p.fibers[0]);
      return out;
    }
    case SpaceId::TCG: {
      GroupElement gi = inverse(*p.g);
      out.g = gi;
      out.fibers[0] = -o.coAd_(gi, p.fibers[0]);
      return out;
    }
    case SpaceId::TSTG: {
      GroupElement gi = inverse(*p.g);
      out.g = gi;
      out.fibers[0] = -o.Ad_(gi, p.fibers[0]);
      out.fibers[2] = -o.coAd_(gi, p.fibers[2]);
      out.fibers[1] = o.coAd_(gi, o.coad_(p.fibers[0], p.fibers[2]) - p.fibers[1]);
      return out;
    }
    case SpaceId::TSTSG: {
      GroupElement gi = inverse(*p.g);
      out.g = gi;
      out.fibers[0] = -o.coAd_(gi, p.fibers[0]);
      out.fibers[2] = -o.Ad_(gi, p.fibers[2]);
      out.fibers[1] = -o.coAd_(gi, p.fibers[1] + o.coad_(p.fibers[2], p.fibers[0]));
      return out;
    }
    case SpaceId::TTCG: {
      GroupElement gi = inverse(*p.g);
      out.g = gi;
      out.fibers[0] = -o.coAd_(gi, p.fibers[0]);
      out.fibers[1] = -o.Ad_(gi, p.fibers[1]);
      out.fibers[2] = -o.coAd_(gi, p.fibers[2] + o.coad_(p.fibers[1], p.fibers[0]));
      return out;
    }
    case SpaceId::SUB_GG: {
      GroupElement gi = inverse(*p.g);
      out.g = gi;
      out.fibers[0] = -o.Ad_(gi, p.fibers[0]);
      out.fibers[1] = -o.coAd_(gi, p.fibers[1]);
      return out;
    }
    case SpaceId::SUB_G_DD: {
      GroupElement gi = inverse(*p.g);
      out.g = gi;
      out.fibers[0] = -o.coAd_(gi, p.fibers[0]);
      out.fibers[1] = -o.coAd_(gi, p.fibers[1]);
      return out;
    }
    case SpaceId::SUB_A_DD: {
      out.fibers[0] = -p.fibers[0];
      out.fibers[2] = -p.fibers[2];
      out.fibers[1] = -p.fibers[1] + o.coad_(p.fibers[0], p.fibers[2]);
      return out;
    }
    default: {
      for (size_t i = 0; i < out.fibers.size(); ++i) out.fibers[i] = -p.fibers[i];
      if (p.g) out.g = inverse(*p.g);
      return out;
    }
  }
}

BundlePoint exp_tuple(SpaceId space, GroupId group, const Tuple& gen, double t) {
  const Group& gr = Group::get(group);
  const auto& sig = sig_of(space);
  BundlePoint p = identity_point(space, group);
  int at = 0;
  if (sig.has_group) {
    p.g = gr.exp(AlgebraVector(t * gen.comps[0]));
    at = 1;
  }
  for (size_t i = 0; i < p.fibers.size(); ++i) p.fibers[i] = t * gen.comps[at + i];
  return p;
}

Tuple rivf(const BundlePoint& p, const Tuple& gen) {
  Ops o(p.group);
  Tuple r = gen;  // identity-base value is the generator itself
  switch (p.space) {
    case SpaceId::TG:
      r.comps[1] = gen.comps[1] + o.ad_(gen.comps[0], p.fibers[0]);
      return r;
    case SpaceId::TCG:
      r.comps[1] = gen.comps[1] - o.coad_(gen.comps[0], p.fibers[0]);
      return r;
    case SpaceId::TSTG:
      r.comps[1] = gen.comps[1] + o.ad_(gen.comps[0], p.fibers[0]);
      r.comps[2] = gen.comps[2] - o.coad_(gen.comps[0], p.fibers[1]) +
                   o.coad_(gen.comps[1], p.fibers[2]);
      r.comps[3] = gen.comps[3] - o.coad_(gen.comps[0], p.fibers[2]);
      return r;
    case SpaceId::TSTSG:
      r.comps[1] = gen.comps[1] - o.coad_(gen.comps[0], p.fibers[0]);
      r.comps[2] = gen.comps[2] - o.coad_(gen.comps[0], p.fibers[1]) -
                   o.coad_(p.fibers[2], gen.comps[1]);
      r.comps[3] = gen.comps[3] + o.ad_(gen.comps[0], p.fibers[2]);
      return r;
    case SpaceId::TTCG:
      r.comps[1] = gen.comps[1] - o.coad_(gen.comps[0], p.fibers[0]);
      r.comps[2] = gen.comps[2] + o.ad_(gen.comps[0], p.fibers[1]);
      r.comps[3] = gen.comps[3] - o.coad_(gen.comps[0], p.fibers[2]) -
                   o.coad_(p.fibers[1], gen.comps[1]);
      return r;
    case SpaceId::SUB_GG:
      r.comps[1] = gen.comps[1] + o.ad_(gen.comps[0], p.fibers[0]);
      r.comps[2] = gen.comps[2] - o.coad_(gen.comps[0], p.fibers[1]);
      return r;
    case SpaceId::SUB_G_DD:
      r.comps[1] = gen.comps[1] - o.coad_(gen.comps[0], p.fibers[0]);
      r.comps[2] = gen.comps[2] - o.coad_(gen.comps[0], p.fibers[1]);
      return r;
    case SpaceId::SUB_A_DD:
      r.comps[1] = gen.comps[1] + o.coad_(gen.comps[0], p.fibers[2]);
      return r;
    default:
      return r;  // vector spaces: translation-invariant
  }
}

Tuple gen_from_tangent(const BundlePoint& p, const Tuple& rates) {
  Ops o(p.group);
  Tuple g = rates;
  switch (p.space) {
    case SpaceId::TG:
      g.comps[1] = rates.comps[1] - o.ad_(g.comps[0], p.fibers[0]);
      return g;
    case SpaceId::TCG:
      g.comps[1] = rates.comps[1] + o.coad_(g.comps[0], p.fibers[0]);
      return g;
    case SpaceId::TSTG:
      g.comps[1] = rates.comps[1] - o.ad_(g.comps[0], p.fibers[0]);
      g.comps[2] = rates.comps[2] + o.coad_(g.comps[0], p.fibers[1]) -
                   o.coad_(g.comps[1], p.fibers[2]);
      g.comps[3] = rates.comps[3] + o.coad_(g.comps[0], p.fibers[2]);
      return g;
    case SpaceId::TSTSG:
      g.comps[1] = rates.comps[1] + o.coad_(g.comps[0], p.fibers[0]);
      g.comps[2] = rates.comps[2] + o.coad_(g.comps[0], p.fibers[1]) +
                   o.coad_(p.fibers[2], g.comps[1]);
      g.comps[3] = rates.comps[3] - o.ad_(g.comps[0], p.fibers[2]);
      return g;
    case SpaceId::TTCG:
      g.comps[1] = rates.comps[1] + o.coad_(g.comps[0], p.fibers[0]);
      g.comps[2] = rates.comps[2] - o.ad_(g.comps[0], p.fibers[1]);
      g.comps[3] = rates.comps[3] + o.coad_(g.comps[0], p.fibers[2]) +
                   o.coad_(p.fibers[1], g.comps[1]);
      return g;
    case SpaceId::SUB_GG:
      g.comps[1] = rates.comps[1] - o.ad_(g.comps[0], p.fibers[0]);
      g.comps[2] = rates.comps[2] + o.coad_(g.comps[0], p.fibers[1]);
      return g;
    case SpaceId::SUB_G_DD:
      g.comps[1] = rates.comps[1] + o.coad_(g.comps[0], p.fibers[0]);
      g.comps[2] = rates.comps[2] + o.coad_(g.comps[0], p.fibers[1]);
      return g;
    case SpaceId::SUB_A_DD:
      g.comps[1] = rates.comps[1] - o.coad_(g.comps[0], p.fibers[2]);
      return g;
    default:
      return g;
  }
}

BundlePoint advance(const BundlePoint& p, const Tuple& rates, double h) {
  const Group& gr = Group::get(p.group);
  BundlePoint out = p;
  int at = 0;
  if (p.g) {
    out.g = group_mul(gr.exp(AlgebraVector(h * rates.comps[0])), *p.g);
    at = 1;
  }
  for (size_t i = 0; i < p.fibers.size(); ++i)
    out.fibers[i] = p.fibers[i] + h * rates.comps[at + i];
  return out;
}

FormId form_from_string(const std::string& name) {
  if (name == "omega_tcg") return FormId::OMEGA_TCG;
  if (name == "omega_tstg") return FormId::OMEGA_TSTG;
  if (name == "omega_tstsg") return FormId::OMEGA_TSTSG;
  if (name == "omega_ttcg") return FormId::OMEGA_TTCG;
  if (name == "omega_tstg_alt") return FormId::OMEGA_TSTG_ALT;
  if (name == "omega_tstsg_alt") return FormId::OMEGA_TSTSG_ALT;
  if (name == "omega_ttcg_alt") return FormId::OMEGA_TTCG_ALT;
  if (name == "kks") return FormId::KKS;
  if (name == "orb_gxg") return FormId::ORB_GXG;
  if (name == "orb_symor") return FormId::ORB_SYMOR;
  if (name == "red_omega_tstg") return FormId::RED_OMEGA_TSTG;
  if (name == "red_omega_tstsg") return FormId::RED_OMEGA_TSTSG;
  if (name == "red_tul") return FormId::RED_TUL;
  if (name == "theta_tcg") return FormId::THETA_TCG;
  if (name == "theta_tstg") return FormId::THETA_TSTG;
  if (name == "theta_tstsg") return FormId::THETA_TSTSG;
  if (name == "theta1_ttcg") return FormId::THETA1_TTCG;
  if (name == "theta2_ttcg") return FormId::THETA2_TTCG;
  if (name == "chi1") return FormId::CHI1;
  if (name == "chi2") return FormId::CHI2;
  throw usage_error("unknown form id: " + name);
}

const char* to_string(FormId id) {
  switch (id) {
    case FormId::OMEGA_TCG: return "omega_tcg";
    case FormId::OMEGA_TSTG: return "omega_tstg";
    case FormId::OMEGA_TSTSG: return "omega_tstsg";
    case FormId::OMEGA_TTCG: return "omega_ttcg";
    case FormId::OMEGA_TSTG_ALT: return "omega_tstg_alt";
    case FormId::OMEGA_TSTSG_ALT: return "omega_tstsg_alt";
    case FormId::OMEGA_TTCG_ALT: return "omega_ttcg_alt";
    case FormId::KKS: return "kks";
    case FormId::ORB_GXG: return "orb_gxg";
    case FormId::ORB_SYMOR: return "orb_symor";
    case FormId::RED_OMEGA_TSTG: return "red_omega_tstg";
    case FormId::RED_OMEGA_TSTSG: return "red_omega_tstsg";
    case FormId::RED_TUL: return "red_tul";
    case FormId::THETA_TCG: return "theta_tcg";
    case FormId::THETA_TSTG: return "theta_tstg";
    case FormId::THETA_TSTSG: return "theta_tstsg";
    case FormId::THETA1_TTCG: return "theta1_ttcg";
    case FormId::THETA2_TTCG: return "theta2_ttcg";
    case FormId::CHI1: return "chi1";
    case FormId::CHI2: return "chi2";
  }
  return "?";
}

bool is_two_form(FormId id) {
  switch (id) {
    case FormId::THETA_TCG:
    case FormId::THETA_TSTG:
    case FormId::THETA_TSTSG:
    case FormId::THETA1_TTCG:
    case FormId::THETA2_TTCG:
    case FormId::CHI1:
    case FormId::CHI2:
      return false;
    default:
      return true;
  }
}

double eval_two_form(FormId form, const BundlePoint& p, const Tuple& A, const Tuple& B) {
  Ops o(p.group);
  auto dot = [](const Vec& a, const Vec& b) { return a.dot(b); };
  switch (form) {
    case FormId::OMEGA_TCG: {
      // <k,b> - <l,a> - <mu,[a,b]>
      const Vec &a = A.comps[0], &k = A.comps[1], &b = B.comps[0], &l = B.comps[1];
      return dot(k, b) - dot(l, a) - dot(p.fiber(SlotName::MU), o.ad_(a, b));
    }
    case FormId::OMEGA_TSTG: {
      const Vec &a1 = A.comps[0], &a2 = A.comps[1], &k1 = A.comps[2], &k2 = A.comps[3];
      const Vec &b1 = B.comps[0], &b2 = B.comps[1], &l1 = B.comps[2], &l2 = B.comps[3];
      return dot(k1, b1) + dot(k2, b2) - dot(l1, a1) - dot(l2, a2) -
             dot(p.fiber(SlotName::MU), o.ad_(a1, b1)) -
             dot(p.fiber(SlotName::NU), o.ad_(a1, b2) - o.ad_(b1, a2));
    }
    case FormId::OMEGA_TSTSG: {
      const Vec &a1 = A.comps[0], &k1 = A.comps[1], &k2 = A.comps[2], &a2 = A.comps[3];
      const Vec &b1 = B.comps[0], &l1 = B.comps[1], &l2 = B.comps[2], &b2 = B.comps[3];
      return dot(k2, b1) + dot(l1, a2) - dot(l2, a1) - dot(k1, b2) -
             dot(p.fiber(SlotName::NU), o.ad_(a1, b1)) -
             dot(o.coad_(b1, k1) - o.coad_(a1, l1), p.fiber(SlotName::XI));
    }
    case FormId::OMEGA_TTCG: {
      const Vec &a1 = A.comps[0], &k1 = A.comps[1], &a2 = A.comps[2], &k2 = A.comps[3];
      const Vec &b1 = B.comps[0], &l1 = B.comps[1], &b2 = B.comps[2], &l2 = B.comps[3];
      const Vec& mu = p.fiber(SlotName::MU);
      Vec lam = p.fiber(SlotName::NU) + o.coad_(p.fiber(SlotName::XI), mu);
      return dot(k2, b1) + dot(k1, b2) - dot(l2, a1) - dot(l1, a2) - dot(lam, o.ad_(a1, b1)) -
             dot(mu, o.ad_(a1, b2) - o.ad_(b1, a2));
    }
    case FormId::OMEGA_TSTG_ALT: {
      // alternative display with mixed generator labels
      const Vec &x1 = A.comps[0], &x2 = A.comps[1], &m1 = A.comps[2], &m2 = A.comps[3];
      const Vec &e1 = B.comps[0], &e2 = B.comps[1], &n1 = B.comps[2], &n2 = B.comps[3];
      const Vec& lam1 = p.fiber(SlotName::MU);
      const Vec& lam2 = p.fiber(SlotName::NU);
      return dot(m1 + o.coad_(x1, lam1) + o.coad_(x2, lam2), e1) - dot(n1, x1) +
             dot(m2 + o.coad_(x1, lam2), e2) - dot(n2, x2);
    }
    case FormId::OMEGA_TSTSG_ALT: {
      // the display never pairs against the second generator's xi part,
      // which is where its antisymmetry defect comes from
      const Vec &x1 = A.comps[0], &m1 = A.comps[1], &m2 = A.comps[2], &x2 = A.comps[3];
      const Vec &e1 = B.comps[0], &n1 = B.comps[1], &n2 = B.comps[2];
      const Vec& lam2 = p.fiber(SlotName::NU);
      const Vec& zeta = p.fiber(SlotName::XI);
      return dot(m2 + o.coad_(x1, lam2) - o.coad_(zeta, m1), e1) - dot(m1, e1) +
             dot(-n2 + o.coad_(zeta, n1), x1) + dot(n1, x2);
    }
    case FormId::OMEGA_TTCG_ALT: {
      const Vec &x2 = A.comps[0], &n2 = A.comps[1], &x3 = A.comps[2], &n3 = A.comps[3];
      const Vec &y2 = B.comps[0], &m2 = B.comps[1], &y3 = B.comps[2], &m3 = B.comps[3];
      return dot(n3, y2) - dot(n2, y3) + dot(m2, x3) - dot(m3, x2) -
             dot(p.fiber(SlotName::NU), o.ad_(x2, y2)) +
             dot(o.coad_(y2, n2) - o.coad_(x2, m2), p.fiber(SlotName::XI));
    }
    case FormId::KKS:
      return -dot(p.fiber(SlotName::MU), o.ad_(A.comps[0], B.comps[0]));
    case FormId::ORB_GXG: {
      const Vec &eta = A.comps[0], &zeta = A.comps[1], &etb = B.comps[0], &ztb = B.comps[1];
      return dot(p.fiber(SlotName::MU), o.ad_(etb, eta)) +
             dot(p.fiber(SlotName::NU), o.ad_(etb, zeta) - o.ad_(eta, ztb));
    }
    case FormId::ORB_SYMOR: {
      const Vec &lam = A.comps[0], &eta = A.comps[1], &lmb = B.comps[0], &etb = B.comps[1];
      return dot(p.fiber(SlotName::NU), o.ad_(etb, eta)) +
             dot(o.coad_(eta, lmb) - o.coad_(etb, lam), p.fiber(SlotName::XI));
    }
    case FormId::RED_OMEGA_TSTG: {
      const Vec &eta = A.comps[0], &zeta = A.comps[1], &lam = A.comps[2];
      const Vec &etb = B.comps[0], &ztb = B.comps[1], &lmb = B.comps[2];
      return dot(lam, ztb) - dot(lmb, zeta) - dot(p.fibers[0], o.ad_(eta, etb));
    }
    case FormId::RED_OMEGA_TSTSG: {
      const Vec &eta = A.comps[0], &lam = A.comps[1], &zeta = A.comps[2];
      const Vec &etb = B.comps[0], &lmb = B.comps[1], &ztb = B.comps[2];
      return dot(zeta, lmb) - dot(ztb, lam) - dot(p.fibers[0], o.ad_(eta, etb));
    }
    case FormId::RED_TUL: {
      const Vec &eta = A.comps[0], &ups = A.comps[1], &zeta = A.comps[2];
      const Vec &etb = B.comps[0], &upb = B.comps[1], &ztb = B.comps[2];
      return dot(ups, ztb) - dot(upb, zeta) - dot(p.fibers[0], o.ad_(eta, etb));
    }
    default:
      throw usage_error("eval_two_form: not a two-form id");
  }
}

double eval_one_form(FormId form, const Tuple& params, const Tuple& gen, const BundlePoint& p) {
  Ops o(p.group);
  auto dot = [](const Vec& a, const Vec& b) { return a.dot(b); };
  switch (form) {
    case FormId::THETA_TCG:
      return dot(params.comps[0], gen.comps[0]) + dot(gen.comps[1], params.comps[1]);
    case FormId::THETA_TSTG:
      return dot(params.comps[0], gen.comps[0]) + dot(params.comps[1], gen.comps[1]) +
             dot(gen.comps[2], params.comps[2]) + dot(gen.comps[3], params.comps[3]);
    case FormId::THETA_TSTSG:
      return dot(params.comps[0], gen.comps[0]) + dot(gen.comps[1], params.comps[1]) +
             dot(gen.comps[2], params.comps[2]) + dot(params.comps[3], gen.comps[3]);
    case FormId::THETA1_TTCG:
      return dot(params.comps[0], gen.comps[0]) + dot(gen.comps[1], params.comps[1]) +
             dot(params.comps[2], gen.comps[2]) + dot(gen.comps[3], params.comps[3]);
    case FormId::THETA2_TTCG: {
      // <mu, xi3> + <nu, xi2> + <mu, [xi, xi2]>; the nominal parameters do not enter.
      const Vec& mu = p.fiber(SlotName::MU);
      return dot(mu, gen.comps[2]) + dot(p.fiber(SlotName::NU), gen.comps[0]) +
             dot(mu, o.ad_(p.fiber(SlotName::XI), gen.comps[0]));
    }
    case FormId::CHI1:
      return dot(p.fibers[0], gen.comps[0]) - dot(gen.comps[1], p.fibers[2]);
    case FormId::CHI2:
      return dot(p.fibers[0], gen.comps[0]) + dot(p.fibers[1], gen.comps[2]);
    default:
      throw usage_error("eval_one_form: not a one-form id");
  }
}

Tuple flat(const BundlePoint& p, const Tuple& gen) {
  Ops o(p.group);
  Tuple out = zero_tuple(p.space, p.group);
  switch (p.space) {
    case SpaceId::TCG:
      out.comps[0] = gen.comps[1];
      out.comps[1] = -gen.comps[0];
      return out;
    case SpaceId::TSTG: {
      // (k1 - coad(Ad(g^-1) xi, k2), k2, -a1, -a2)
      Vec adxi = o.Ad_(inverse(*p.g), p.fiber(SlotName::XI));
      out.comps[0] = gen.comps[2] - o.coad_(adxi, gen.comps[3]);
      out.comps[1] = gen.comps[3];
      out.comps[2] = -gen.comps[0];
      out.comps[3] = -gen.comps[1];
      return out;
    }
    case SpaceId::TSTSG: {
      // (k2 - coad(a2, coAd(g^-1, mu)), a2, -a1, -k1)
      Vec amu = o.coAd_(inverse(*p.g), p.fiber(SlotName::MU));
      out.comps[0] = gen.comps[2] - o.coad_(gen.comps[3], amu);
      out.comps[1] = gen.comps[3];
      out.comps[2] = -gen.comps[0];
      out.comps[3] = -gen.comps[1];
      return out;
    }
    case SpaceId::TTCG: {
      // (k2 - coad(a2, coAd(g^-1, mu)), a2, -k1, -a1)
      Vec amu = o.coAd_(inverse(*p.g), p.fiber(SlotName::MU));
      out.comps[0] = gen.comps[3] - o.coad_(gen.comps[2], amu);
      out.comps[1] = gen.comps[2];
      out.comps[2] = -gen.comps[1];
      out.comps[3] = -gen.comps[0];
      return out;
    }
    default:
      throw usage_error("flat: unsupported space");
  }
}

double pair_tuples(const Tuple& cotangent, const Tuple& tangent) {
  return tuple_dot(cotangent, tangent);
}

BundlePoint sigma(const BundlePoint& p) {
  if (p.space != SpaceId::TTCG) throw usage_error("sigma: expects a ttcg point");
  Ops o(p.group);
  const Vec &mu = p.fibers[0], &xi = p.fibers[1], &nu = p.fibers[2];
  return make_point(SpaceId::TSTG, p.group, *p.g, {xi, nu + o.coad_(xi, mu), mu});
}

BundlePoint sigma_inverse(const BundlePoint& q) {
  if (q.space != SpaceId::TSTG) throw usage_error("sigma_inverse: expects a tstg point");
  Ops o(q.group);
  const Vec &xi = q.fibers[0], &m1 = q.fibers[1], &m2 = q.fibers[2];
  return make_point(SpaceId::TTCG, q.group, *q.g, {m2, xi, m1 - o.coad_(xi, m2)});
}

Tuple sigma_push_rates(const BundlePoint& p, const Tuple& r) {
  Ops o(p.group);
  Tuple out = zero_tuple(SpaceId::TSTG, p.group);
  out.comps[0] = r.comps[0];
  out.comps[1] = r.comps[2];
  out.comps[2] = r.comps[3] + o.coad_(r.comps[2], p.fibers[0]) + o.coad_(p.fibers[1], r.comps[1]);
  out.comps[3] = r.comps[1];
  return out;
}

Tuple sigma_push_gen(const Tuple& gen) {
  Tuple out;
  out.comps = {gen.comps[0], gen.comps[2], gen.comps[3], gen.comps[1]};
  return out;
}

Tuple sigma_pull_gen(const Tuple& gen) {
  Tuple out;
  out.comps = {gen.comps[0], gen.comps[3], gen.comps[1], gen.comps[2]};
  return out;
}

BundlePoint omega_flat_map(const BundlePoint& p) {
  if (p.space != SpaceId::TTCG) throw usage_error("omega_flat_map: expects a ttcg point");
  Ops o(p.group);
  const Vec &mu = p.fibers[0], &xi = p.fibers[1], &nu = p.fibers[2];
  return make_point(SpaceId::TSTSG, p.group, *p.g, {mu, nu + o.coad_(xi, mu), -xi});
}

BundlePoint omega_flat_map_inverse(const BundlePoint& q) {
  if (q.space != SpaceId::TSTSG) throw usage_error("omega_flat_map_inverse: expects tstsg");
  Ops o(q.group);
  const Vec &m1 = q.fibers[0], &m2 = q.fibers[1], &Xi = q.fibers[2];
  return make_point(SpaceId::TTCG, q.group, *q.g, {m1, -Xi, m2 + o.coad_(Xi, m1)});
}

Tuple omega_flat_push_rates(const BundlePoint& p, const Tuple& r) {
  Ops o(p.group);
  Tuple out = zero_tuple(SpaceId::TSTSG, p.group);
  out.comps[0] = r.comps[0];
  out.comps[1] = r.comps[1];
  out.comps[2] = r.comps[3] + o.coad_(r.comps[2], p.fibers[0]) + o.coad_(p.fibers[1], r.comps[1]);
  out.comps[3] = -r.comps[2];
  return out;
}

Tuple omega_flat_push_gen(const BundlePoint& p, const Tuple& gen) {
  Ops o(p.group);
  Tuple out;
  out.comps = {gen.comps[0], gen.comps[1],
               gen.comps[3] + o.coad_(gen.comps[2], p.fibers[0]) -
                   o.coad_(p.fibers[1], gen.comps[1]),
               -gen.comps[2]};
  return out;
}

}  // namespace gmech
