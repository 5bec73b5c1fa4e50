#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gmech/groups.hpp"

namespace gmech {

/// Trivialized spaces. The five bundle spaces carry the iterated group
/// structures; the remaining ids are the reduced slot tuples the dynamics
/// and brackets live on.
enum class SpaceId {
  TG,     // (g, xi)
  TCG,    // (g, mu)
  TSTG,   // (g, xi, mu, nu)
  TSTSG,  // (g, mu, nu, xi)
  TTCG,   // (g, mu, xi, nu)
  SUB_GG,    // (g, xi, mu)   subgroup pattern of T*TG
  SUB_G_DD,  // (g, mu, nu)
  SUB_A_DD,  // (xi, mu, nu)
  DUAL,           // (mu)
  ALG,            // (xi)
  DUAL_DUAL,      // (mu, nu)
  DUAL_ALG,       // (nu, xi)
  ALG_DUAL,       // (xi, nu)
  DUAL_DUAL_ALG,  // (mu, nu, xi)
  DUAL_ALG_DUAL,  // (mu, xi, nu)
  G_DUAL_ALG,     // (g, nu, xi)
  G_ALG_DUAL,     // (g, xi, nu)
};

SpaceId space_from_string(const std::string& name);
const char* to_string(SpaceId id);

enum class SlotKind { GRP, ALG, DUAL };
enum class SlotName { G, XI, MU, NU };

const char* to_string(SlotName n);

struct SlotSpec {
  SlotName name;
  SlotKind kind;
};

struct SpaceSig {
  std::vector<SlotSpec> slots;
  bool has_group;  // when true the group slot is slots[0]
};

const SpaceSig& signature(SpaceId id);
int slot_index(SpaceId id, SlotName name);  // -1 when absent
bool has_slot(SpaceId id, SlotName name);

/// A point of a trivialized space: the group slot (when present) plus the
/// fiber coordinates in declared order.
struct BundlePoint {
  SpaceId space;
  GroupId group;
  std::optional<GroupElement> g;
  std::vector<Vec> fibers;  // non-group slots, in slot order

  const Vec& fiber(SlotName name) const;
  Vec& fiber(SlotName name);
};

/// One component per slot, group slot stored in right-trivialized
/// coordinates. Used for Lie algebra elements of the bundle groups
/// (generators), for values of right-invariant vector fields (slot rates)
/// and, with flipped variance, for covectors.
struct Tuple {
  std::vector<Vec> comps;
};

BundlePoint identity_point(SpaceId space, GroupId group);
BundlePoint make_point(SpaceId space, GroupId group, const GroupElement& g,
                       std::vector<Vec> fibers);
BundlePoint make_point(SpaceId space, GroupId group, std::vector<Vec> fibers);

int point_flat_dim(SpaceId space, GroupId group);
Vec point_to_flat(const BundlePoint& p);
BundlePoint point_from_flat(SpaceId space, GroupId group, const Vec& flat);

Tuple zero_tuple(SpaceId space, GroupId group);
Tuple tuple_scale(const Tuple& t, double s);
Tuple tuple_add(const Tuple& a, const Tuple& b);
double tuple_dot(const Tuple& a, const Tuple& b);
double tuple_norm(const Tuple& t);

/// Group multiplication of the trivialized space (identity, inverse below).
BundlePoint bundle_mul(const BundlePoint& p, const BundlePoint& q);
BundlePoint bundle_inverse(const BundlePoint& p);

/// Curve through the identity with velocity gen: group slot exp(t a),
/// linear slots t k. Used to generate right-invariant flows to first order.
BundlePoint exp_tuple(SpaceId space, GroupId group, const Tuple& gen, double t);

/// Right-invariant vector field: slot rates at p of d/dt (exp_tuple(t gen) * p)
/// at t = 0, the derivative of left translation. Group slot rate is the
/// right-trivialized velocity.
Tuple rivf(const BundlePoint& p, const Tuple& gen);

/// Inverse of rivf in its generator argument.
Tuple gen_from_tangent(const BundlePoint& p, const Tuple& rates);

/// Advance every slot from p by h * rates (group slot multiplicatively,
/// g <- exp(h a) g).
BundlePoint advance(const BundlePoint& p, const Tuple& rates, double h);

enum class FormId {
  OMEGA_TCG,
  OMEGA_TSTG,
  OMEGA_TSTSG,
  OMEGA_TTCG,
  OMEGA_TSTG_ALT,   // alternative sign-convention displays, kept for the reports
  OMEGA_TSTSG_ALT,
  OMEGA_TTCG_ALT,
  KKS,
  ORB_GXG,
  ORB_SYMOR,
  RED_OMEGA_TSTG,
  RED_OMEGA_TSTSG,
  RED_TUL,
  THETA_TCG,
  THETA_TSTG,
  THETA_TSTSG,
  THETA1_TTCG,
  THETA2_TTCG,
  CHI1,
  CHI2,
};

FormId form_from_string(const std::string& name);
const char* to_string(FormId id);
bool is_two_form(FormId id);

/// Value of a two-form on two right-invariant generators at p. Orbit forms
/// take the orbit generators in the tuple components documented per form.
double eval_two_form(FormId form, const BundlePoint& p, const Tuple& gen1, const Tuple& gen2);

/// Value of a one-form on one generator. The theta families take their
/// parameter covector tuples in `params`; theta2's nominal parameters do not
/// enter its value and are ignored; chi1/chi2 are point-determined.
double eval_one_form(FormId form, const Tuple& params, const Tuple& gen, const BundlePoint& p);

/// Musical flat of the space's symplectic structure applied to the
/// right-invariant field of gen, in trivialized covector coordinates.
Tuple flat(const BundlePoint& p, const Tuple& gen);

/// Pair a cotangent tuple with a tangent tuple (slotwise).
double pair_tuples(const Tuple& cotangent, const Tuple& tangent);

/// sigma: TT*G -> T*TG, (g,mu,xi,nu) -> (g, xi, nu + coad(xi,mu), mu).
BundlePoint sigma(const BundlePoint& p);
BundlePoint sigma_inverse(const BundlePoint& p);
Tuple sigma_push_rates(const BundlePoint& p, const Tuple& rates);
Tuple sigma_push_gen(const Tuple& gen);
Tuple sigma_pull_gen(const Tuple& gen);

/// Omega-flat map: TT*G -> T*T*G, (g,mu,xi,nu) -> (g, mu, nu + coad(xi,mu), -xi).
BundlePoint omega_flat_map(const BundlePoint& p);
BundlePoint omega_flat_map_inverse(const BundlePoint& p);
Tuple omega_flat_push_rates(const BundlePoint& p, const Tuple& rates);
Tuple omega_flat_push_gen(const BundlePoint& p, const Tuple& gen);

}  // namespace gmech
