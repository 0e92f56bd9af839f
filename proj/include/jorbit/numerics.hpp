#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "jorbit/types.hpp"

namespace jorbit {

// Rank with the shared cutoff convention: singular values below
// tol * max(1, sigma_max) * n are treated as zero.
double rankCutoff(double sigmaMax, double tol, int n);
int rankWithTolerance(const Mat& m, double tol);

// Orthonormal basis (Euclidean) of the column span / null space.
Mat columnSpanBasis(const Mat& m, double relCutoff);
Mat nullSpaceBasis(const Mat& m, double absCutoff);

// Dense matrix exponential, scaling-and-squaring with a Pade core.
Mat matrixExponential(const Mat& m);

// Real roots of the monic polynomial  x^m + c[m-1] x^(m-1) + ... + c[0],
// from the companion matrix, each polished by one Newton step.  Roots with
// |imag| > imagTol * scale raise NumericalError.
std::vector<double> realPolynomialRoots(const std::vector<double>& coeffs,
                                        double imagTol);

std::uint64_t splitmix64(std::uint64_t x);

// Deterministic per-trial stream: state depends only on (seed, stream).
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  double gaussian();
  double uniform(double lo, double hi);
  std::uint64_t integer(std::uint64_t bound);  // [0, bound)
  Vec gaussianVec(int d);
  Vec uniformVec(int d, double lo, double hi);

 private:
  std::mt19937_64 eng_;
  std::normal_distribution<double> normal_;
};

}  // namespace jorbit
