#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace jorbit {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Malformed inputs: dimension mismatches, unknown names, bad files.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A computation that cannot meet its accuracy contract (ill-conditioned
// root extraction, evaluation at a metric pole, ...).
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what, double condition = 0.0)
      : std::runtime_error(what), conditionEstimate(condition) {}
  double conditionEstimate;
};

// Coordinate vector in the algebra basis.
struct Element {
  Vec coords;
};

// Covector in the basis dual to the algebra basis.
struct DualElement {
  Vec coords;
};

// Dense operator acting on Element coordinates.
struct LinearOperator {
  Mat matrix;
};

inline double pairing(const DualElement& xi, const Element& a) {
  return xi.coords.dot(a.coords);
}

}  // namespace jorbit
