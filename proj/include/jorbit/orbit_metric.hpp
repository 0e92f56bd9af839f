#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "jorbit/dual_geometry.hpp"
#include "jorbit/spectral.hpp"

namespace jorbit {

enum class ConeStatus { interior, boundary, exterior };
std::string coneStatusName(ConeStatus s);

struct OrbitClass {
  int positive = 0;
  int negative = 0;
  int rank = 0;
  bool regularOrbit = false;
  ConeStatus coneStatus = ConeStatus::exterior;
  int coneSign = 0;                   // +1 / -1 inside or on a cone, else 0
  std::vector<OrbitClass> perFactor;  // direct sums
  TraceVariant variant = TraceVariant::canonical;
};

struct MetricOptions {
  std::optional<TraceVariant> variant;  // default: entry.defaultVariant
  double zeroThreshold = 1e-8;
};

OrbitClass classifyOrbit(const CatalogEntry& entry, const DualElement& xi,
                         const MetricOptions& opts = {});

// Regularity of the point: no two nonzero spectral coefficients with a
// vanishing sum, except across pairs whose joint eigenspace block is empty
// (direct sums).
bool isRegularPoint(const CatalogEntry& entry, const DualElement& xi,
                    const MetricOptions& opts = {});

struct TangentDims {
  int dimLx = 0;     // rank of l_x
  int dimDer = 0;    // dim of the inner derivations applied to x
  int dimOrbit = 0;  // rank of the joint span
};
TangentDims tangentDims(const CatalogEntry& entry, const Element& x);

struct MetricReport {
  DualElement point;
  TraceVariant variant = TraceVariant::canonical;
  bool regularPoint = false;
  Vec coefficients;  // spectral coefficients of the sharpened point
  // columns: dual coordinates of a form-orthonormal tangent basis, grouped
  // by eigenspace block
  Mat tangentBasis;
  std::vector<std::pair<int, int>> blockOfColumn;
  Mat gram;  // diagonal in this basis
  std::map<std::pair<int, int>, double> blockCoefficients;
  int metricPositive = 0;
  int metricNegative = 0;
  int orbitDim = 0;
  double crossCheckResidual = 0.0;  // block formula vs direct evaluation
  bool poleProximity = false;
};

// Invariant metric of the structure-group orbit at a regular point;
// raises NumericalError at non-regular points, naming the offending
// coefficient pair.
MetricReport metricAt(const CatalogEntry& entry, const DualElement& xi,
                      const MetricOptions& opts = {});

// G(v, w) for tangent vectors given in dual coordinates; raises InputError
// when v or w is not in the tangent span.
double evaluateMetric(const MetricReport& report, const Vec& v, const Vec& w);

struct CheckReport {
  int trials = 0;
  double maxResidual = 0.0;
  double crossCheckResidual = 0.0;
  bool pass = false;
};

// Componentwise algebra on R^n: gram equals diag(1/xi_i) on the positive
// orthant.
CheckReport fisherRaoCheck(int n, std::uint64_t seed, int trials = 100,
                           double bound = 1e-9);

// Complex Hermitian entries: block coefficients 2/(lambda_a + lambda_i)
// against the closed matrix form.
CheckReport buresHelstromCheck(int n, std::uint64_t seed, int trials = 25,
                               double bound = 1e-8);

struct SpinCheckReport {
  int trials = 0;
  double maxResidual = 0.0;
  bool definitenessLawHolds = false;  // positive definite iff t0 > |s0|
  bool pass = false;
};
SpinCheckReport spinFactorCheck(int n, std::uint64_t seed, int trials = 30,
                                double bound = 1e-9);

// Speeds of alpha(t) = t^2 (c_1 + ... + c_{nPlus})^flat under the canonical
// variant; constant in t.
std::vector<double> incompletenessCurve(const CatalogEntry& entry, int nPlus,
                                        const std::vector<double>& tSamples);

struct SweepReport {
  int trials = 0;
  bool signatureConstant = false;
  double maxCoefficientDeviation = 0.0;  // automorphism-only sweeps
  double maxPullbackResidual = 0.0;      // automorphism-only sweeps
  int basePositive = 0;
  int baseNegative = 0;
};
// Transport xi by exponentials sampled from the (extended) structure
// algebra; signatures must not move.  Automorphism-only sweeps also pin the
// coefficients and the metric.
SweepReport signatureInvarianceSweep(const CatalogEntry& entry,
                                     const DualElement& xi, int trials,
                                     std::uint64_t seed,
                                     bool automorphismsOnly);

struct PoleSweepRow {
  double eps = 0.0;
  double maxGramEntry = 0.0;
};
// Metric blow-up along coefficients (1, -1 + eps, 0, ...): the largest gram
// entry scales like 1/eps.
std::vector<PoleSweepRow> poleSweep(const CatalogEntry& entry,
                                    const std::vector<double>& epsValues);

}  // namespace jorbit
