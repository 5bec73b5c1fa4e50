#pragma once

#include <string>
#include <vector>

#include "gmech/dynamics.hpp"

namespace gmech {

/// Poisson bracket catalog. Names follow the reduction that produced each
/// bracket. All brackets satisfy dF/dt = -{F,H} along their paired flow.
enum class BracketId {
  CAN_TCG,          // canonical bracket on G (x) g*
  LP_D,             // Lie-Poisson on g*
  RED_TSTG_G,       // T*TG reduced by G, on (xi, mu, nu)
  RED_TSTG_ALG,     // T*TG reduced by g, on (g, mu, nu)
  LP_DD,            // Lie-Poisson on g* x g*
  ORB_OMU_D,        // bracket on O_mu x g*
  RED_TSTSG_G,      // T*T*G reduced by G, on (mu, nu, xi)
  RED_TSTSG_DS,     // T*T*G reduced by g*, on (g, nu, xi)
  LP_DA,            // Lie-Poisson on g* x g
  LP_DA_ALT,        // degenerate display variant, kept for the report
  RED_TTCG_G,       // TT*G reduced by G, on (mu, xi, nu)
  RED_TTCG_A2,      // TT*G reduced by g2, on (g, mu, nu)
  RED_TTCG_D1,      // TT*G reduced by g1*, on (g, xi, nu)
  RED_TTCG_GA2,     // TT*G reduced by G (x) g2, on (mu, nu)
  RED_TTCG_GD1,     // TT*G reduced by G (x) g1*, on (xi, nu)
  ORB_OMU_D2,       // bracket on O_mu x g2*
};

BracketId bracket_from_string(const std::string& name);
const char* to_string(BracketId id);
std::vector<BracketId> all_brackets();

SpaceId bracket_space(BracketId id);

double eval_bracket(BracketId id, const Observable& F, const Observable& K,
                    const BundlePoint& p);

/// {F,K} as an observable on the bracket's space; polynomial observables
/// only (group-functional dependence is rejected).
Observable bracket_observable(BracketId id, const Observable& F, const Observable& K);

/// |{F,{K,L}} + {K,{L,F}} + {L,{F,K}}| at p, nested symbolically.
double jacobi_residual(BracketId id, const Observable& F, const Observable& K,
                       const Observable& L, const BundlePoint& p);

/// Slot rates of the flow paired with a bracket (the reduced Hamiltonian
/// flow on the bracket's space).
Tuple bracket_flow_rates(BracketId id, const Observable& H, const BundlePoint& p);

/// |dF/dt along the paired flow of H + {F,H}|; the catalog sign is -1 for
/// every id.
double bracket_flow_consistency(BracketId id, const Observable& H, const Observable& F,
                                const BundlePoint& p);

}  // namespace gmech
