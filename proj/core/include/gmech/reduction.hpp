#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gmech/brackets.hpp"
#include "gmech/integrate.hpp"

namespace gmech {

/// Subgroup actions on the trivialized spaces, as displayed in the source
/// equations. psi is symplectic, phi is the non-symplectic witness.
enum class ActionId {
  TCG_G,
  TSTG_G,
  TSTG_A,    // g acting through the xi slot
  TSTG_GA,   // G (x) g
  TSTSG_G,
  TSTSG_D,   // g* acting through the mu slot
  TSTSG_GD,  // G (x) g*
  TTCG_G,
  TTCG_A2,      // g2 translation of xi
  TTCG_D1_PSI,  // psi: g1* translation of mu
  TTCG_D3_PHI,  // phi: g3* translation of nu (not symplectic)
  TTCG_GA2,     // G (x) g2
  TTCG_GD1,     // G (x) g1*
};

ActionId action_from_string(const std::string& name);
const char* to_string(ActionId id);
SpaceId action_space(ActionId id);
bool action_is_symplectic(ActionId id);

/// Subgroup element: a group factor and/or a vector factor as the action
/// requires.
struct ActionArg {
  std::optional<GroupElement> h;
  std::optional<Vec> v;
};

BundlePoint act(ActionId id, const BundlePoint& p, const ActionArg& s);

/// Momentum map of the (Hamiltonian) action; components in catalog order.
/// Requesting the momentum of phi is a contract error.
std::vector<Vec> momentum(ActionId id, const BundlePoint& p);

enum class CoadjointKind {
  GROUP,      // G on g*
  TG_GROUP,   // G (x) g on g* x g*
  TCG_GROUP,  // G (x) g* on g* x g
};

struct CoadjointElement {
  GroupElement h;
  Vec v;  // algebra factor for TG_GROUP, dual factor for TCG_GROUP, unused for GROUP
};

std::vector<Vec> coadjoint_action(CoadjointKind kind, const CoadjointElement& e,
                                  const std::vector<Vec>& dual_point);

bool isotropy_check(CoadjointKind kind, const CoadjointElement& e,
                    const std::vector<Vec>& dual_point, double tol);

/// A reduction-diagram scenario: integrate the full dynamics, project, and
/// compare with the reduced dynamics from the projected initial condition.
struct Scenario {
  std::string id;
  GroupId group = GroupId::SO3;
  Formulation full_form = Formulation::HAM_TTCG;
  Formulation reduced_form = Formulation::LP;
  std::string observable;  // hamiltonian or lagrangian source on the full space
  std::string reduced_observable;  // optional override; defaults to the renamed source
  std::optional<ActionId> action;           // invariance gate
  std::optional<ActionId> momentum_action;  // conserved-momentum monitor
  std::vector<std::pair<SlotName, SlotName>> projection;  // full slot -> reduced slot
  Vec initial;  // flat full-space point
  SchemeKind scheme = SchemeKind::RKMK4;
  double dt = 1e-3;
  double t_final = 1.0;
  double tol_drift = 1e-6;
  double tol_mismatch = 1e-6;
  std::uint64_t seed = 1234;
  int gate_samples = 20;
};

struct ReductionReport {
  std::string scenario_id;
  double momentum_drift = 0.0;
  double trajectory_mismatch = 0.0;
  bool pass = false;
  int full_steps = 0;
};

/// Throws usage_error when the observable fails the sampled act-invariance
/// gate (tolerance 1e-9).
ReductionReport verify_reduction(const Scenario& sc);

/// Default slot projection (matching names) for a full/reduced space pair.
std::vector<std::pair<SlotName, SlotName>> default_projection(SpaceId full, SpaceId reduced);

struct CheckRow {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

/// Orbit-form suite: antisymmetry, KKS identity and degenerate directions,
/// theta/chi compatibility relations.
std::vector<CheckRow> orbit_form_check(GroupId group, int samples, std::uint64_t seed);

/// Full structural form suite for one group: antisymmetry of every two-form,
/// flat-vs-form consistency (mismatches reported per form, not failed),
/// sigma pullback, embedding pullbacks, and the psi/phi witness.
std::vector<CheckRow> forms_check(GroupId group, int samples, std::uint64_t seed);

}  // namespace gmech
