#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gmech/dynamics.hpp"

namespace gmech {

enum class SchemeKind { LIE_EULER, RKMK4 };

SchemeKind scheme_from_string(const std::string& name);
const char* to_string(SchemeKind k);

/// Fixed-step time grid; group slots step multiplicatively through exp.
struct Scheme {
  SchemeKind kind = SchemeKind::RKMK4;
  double dt = 1e-3;
  double t_final = 1.0;
};

struct Monitor {
  std::string name;
  std::function<double(const FlowState&)> value;
};

struct Trajectory {
  Formulation form;
  std::vector<double> t;
  std::vector<FlowState> states;
  std::vector<std::string> monitor_names;
  std::vector<std::vector<double>> monitor_values;  // per step, per monitor
  int aborted_at = -1;   // last valid index when the state went non-finite
  int projections = 0;   // group-closure re-projections applied
};

Trajectory integrate(Formulation form, const Observable& obs, const FlowState& s0,
                     const Scheme& scheme, const std::vector<Monitor>& monitors = {});

struct DriftEntry {
  std::string name;
  double max_drift;
};

/// Per-monitor max |value(t) - value(0)| over the trajectory.
std::vector<DriftEntry> drift_report(const Trajectory& traj);

}  // namespace gmech
