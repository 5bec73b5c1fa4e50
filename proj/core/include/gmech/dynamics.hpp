#pragma once

#include <string>
#include <vector>

#include "gmech/expr.hpp"

namespace gmech {

/// Equation-of-motion catalog. HAM_* / LP_* take a Hamiltonian, the rest a
/// Lagrangian. Each formulation binds to one SpaceId.
enum class Formulation {
  EL_TG,     // trivialized Euler-Lagrange on G (x) g
  EP,        // Euler-Poincare on g
  HAM_TCG,   // Hamilton on G (x) g*
  LP,        // Lie-Poisson on g*
  HAM_TSTG,  // Hamilton on T*TG
  HAM_TSTSG, // Hamilton on T*T*G
  HAM_TTCG,  // Hamilton on TT*G (Tulczyjew structure)
  EL_TTCG,   // Euler-Lagrange on TT*G
  EP_AD,     // Euler-Poincare on g (x) g*   (fiber reduction of EL_TTCG)
  EL_GAD,    // Euler-Lagrange on G (x) (g (x) g*)
  EL_GA,     // Euler-Lagrange on G (x) g for E = E(g, xi)
  EL_DAD,    // Euler-Lagrange on g* (x) (g (x) g*)
  LP_DD,     // Lie-Poisson on g* x g*
  LP_DA,     // Lie-Poisson on g* x g
  // Poisson-reduced Hamiltonian flows of the iterated spaces.
  RF_TSTG_G,    // T*TG / G        on (xi, mu, nu)
  RF_TSTG_A,    // T*TG / g        on (g, mu, nu)
  RF_TSTSG_G,   // T*T*G / G       on (mu, nu, xi)
  RF_TSTSG_D,   // T*T*G / g*      on (g, nu, xi)
  RF_TTCG_G,    // TT*G / G        on (mu, xi, nu)
  RF_TTCG_A2,   // TT*G / g2       on (g, mu, nu)
  RF_TTCG_D1,   // TT*G / g1*      on (g, xi, nu)
  RF_TTCG_GA2,  // TT*G / (G x g2) on (mu, nu)
  RF_TTCG_GD1,  // TT*G / (G x g1*) on (xi, nu)
};

Formulation formulation_from_string(const std::string& name);
const char* to_string(Formulation f);

SpaceId formulation_space(Formulation f);
bool is_lagrangian(Formulation f);

/// Dynamical state: the bundle point plus, for Lagrangian formulations, the
/// conjugate fiber momenta (concatenated dL/dxi and, on TT*G-type spaces,
/// dL/dnu). Velocity slots of the point are kept in sync with the momenta.
struct FlowState {
  BundlePoint p;
  Vec momenta;  // empty for Hamiltonian formulations
};

struct StateRates {
  Tuple point_rates;   // slot rates (velocity slots of Lagrangian states unused)
  Vec momenta_rates;   // empty for Hamiltonian formulations
};

/// Velocity slots the Lagrangian must be regular in.
std::vector<SlotName> velocity_slots(Formulation f);

/// Build a Lagrangian state from a point carrying velocities; computes the
/// conjugate momenta.
FlowState make_state(Formulation f, const Observable& obs, const BundlePoint& p0);

/// Solve the (quadratic) fiber derivative for the velocities and write them
/// into the point. Throws regularity_error on singular velocity mass.
void recover_velocities(Formulation f, const Observable& obs, FlowState& s);

StateRates vector_field(Formulation f, const Observable& obs, const FlowState& s);

/// Slot rates of the Hamiltonian vector field of H at p (Hamiltonian
/// formulations only).
Tuple hamiltonian_vf(Formulation f, const Observable& H, const BundlePoint& p);

/// Advance all integrated quantities by h * rates and re-derive velocities.
FlowState advance_state(Formulation f, const Observable& obs, const FlowState& s,
                        const StateRates& rates, double h);

/// Directional derivative of an observable along slot rates at p.
double derivative_along(const Observable& obs, const BundlePoint& p, const Tuple& rates);

/// Legendre transform of a regular Lagrangian on TG at (g, xi).
struct LegendreResult {
  CoalgebraVector mu;
  AlgebraVector xi;
  double hamiltonian;
};
LegendreResult legendre(const Observable& L, const BundlePoint& p);

/// Hamiltonian slot rates of the Legendre transform of L, evaluated at a
/// (g, mu) point of TCG without forming H symbolically.
Tuple legendre_ham_vf(const Observable& L, const BundlePoint& p_tcg);

/// Conserved quantity of the Lagrangian formulations:
/// <dL/dxi, xi> - L, and on TT*G-type spaces <dE/dxi,xi> + <dE/dnu,nu> - E.
double energy_invariant(Formulation f, const Observable& obs, const FlowState& s);

/// Residual of the combined second-order form of the T*TG dynamics,
/// (d/dt - coad_{dH/dmu})(coad_xi nu - mu) - T*R dH/dg, estimated by central
/// differences on three consecutive trajectory samples.
Vec combined_tstg_residual(const Observable& H, const BundlePoint& prev, const BundlePoint& cur,
                           const BundlePoint& next, double dt);

}  // namespace gmech
