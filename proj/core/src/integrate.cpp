#include "gmech/integrate.hpp"

#include <cmath>

namespace gmech {

SchemeKind scheme_from_string(const std::string& name) {
  if (name == "lie_euler") return SchemeKind::LIE_EULER;
  if (name == "rkmk4") return SchemeKind::RKMK4;
  throw usage_error("unknown scheme: " + name);
}

const char* to_string(SchemeKind k) {
  return k == SchemeKind::LIE_EULER ? "lie_euler" : "rkmk4";
}

namespace {

bool state_finite(const FlowState& s) {
  if (s.p.g && !s.p.g->m.allFinite()) return false;
  for (const Vec& f : s.p.fibers)
    if (!f.allFinite()) return false;
  return s.momenta.size() == 0 || s.momenta.allFinite();
}

StateRates combine4(const StateRates& k1, const StateRates& k2, const StateRates& k3,
                    const StateRates& k4) {
  StateRates out = k1;
  for (size_t i = 0; i < out.point_rates.comps.size(); ++i)
    out.point_rates.comps[i] =
        (k1.point_rates.comps[i] + 2.0 * k2.point_rates.comps[i] +
         2.0 * k3.point_rates.comps[i] + k4.point_rates.comps[i]) / 6.0;
  if (out.momenta_rates.size() > 0)
    out.momenta_rates = (k1.momenta_rates + 2.0 * k2.momenta_rates + 2.0 * k3.momenta_rates +
                         k4.momenta_rates) / 6.0;
  return out;
}

}  // namespace

Trajectory integrate(Formulation form, const Observable& obs, const FlowState& s0,
                     const Scheme& scheme, const std::vector<Monitor>& monitors) {
  if (scheme.dt <= 0 || scheme.t_final < scheme.dt)
    throw usage_error("scheme: need dt > 0 and t_final >= dt");
  const Group& gr = Group::get(s0.p.group);
  const long steps = static_cast<long>(std::floor(scheme.t_final / scheme.dt + 0.5 * scheme.dt));

  Trajectory traj;
  traj.form = form;
  traj.t.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  for (const auto& m : monitors) traj.monitor_names.push_back(m.name);

  FlowState s = s0;
  if (is_lagrangian(form) && s.momenta.size() == 0) s = make_state(form, obs, s0.p);

  auto record = [&](double t, const FlowState& st) {
    traj.t.push_back(t);
    traj.states.push_back(st);
    std::vector<double> row;
    row.reserve(monitors.size());
    for (const auto& m : monitors) row.push_back(m.value(st));
    traj.monitor_values.push_back(std::move(row));
  };

  record(0.0, s);
  for (long k = 0; k < steps; ++k) {
    const double h = scheme.dt;
    FlowState next;
    try {
      if (scheme.kind == SchemeKind::LIE_EULER) {
        next = advance_state(form, obs, s, vector_field(form, obs, s), h);
      } else {
        StateRates k1 = vector_field(form, obs, s);
        StateRates k2 = vector_field(form, obs, advance_state(form, obs, s, k1, h / 2));
        StateRates k3 = vector_field(form, obs, advance_state(form, obs, s, k2, h / 2));
        StateRates k4 = vector_field(form, obs, advance_state(form, obs, s, k3, h));
        next = advance_state(form, obs, s, combine4(k1, k2, k3, k4), h);
      }
    } catch (const numerical_error&) {
      traj.aborted_at = static_cast<int>(k);
      return traj;
    }
    if (!state_finite(next)) {
      traj.aborted_at = static_cast<int>(k);
      return traj;
    }
    if (next.p.g && gr.closure_residual(*next.p.g) > 1e-10) {
      gr.project(*next.p.g);
      ++traj.projections;
    }
    s = std::move(next);
    record((k + 1) * h, s);
  }
  return traj;
}

std::vector<DriftEntry> drift_report(const Trajectory& traj) {
  std::vector<DriftEntry> out;
  for (size_t m = 0; m < traj.monitor_names.size(); ++m) {
    double base = traj.monitor_values.empty() ? 0.0 : traj.monitor_values[0][m];
    double worst = 0.0;
    for (const auto& row : traj.monitor_values)
      worst = std::max(worst, std::abs(row[m] - base));
    out.push_back({traj.monitor_names[m], worst});
  }
  return out;
}

}  // namespace gmech
