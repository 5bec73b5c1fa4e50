#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace gmech {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Wrong usage of the API (mismatched groups, bad ids, malformed config).
struct usage_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A numerical-domain failure (non-finite values, singular solves).
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Degenerate fiber derivative where a regular Lagrangian is required.
struct regularity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline bool finite(const Vec& v) { return v.allFinite(); }
inline bool finite(const Mat& m) { return m.allFinite(); }

}  // namespace gmech
