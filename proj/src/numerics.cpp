#include "jorbit/numerics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>

namespace jorbit {

double rankCutoff(double sigmaMax, double tol, int n) {
  return tol * std::max(1.0, sigmaMax) * n;
}

int rankWithTolerance(const Mat& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const Vec& s = svd.singularValues();
  double cutoff = rankCutoff(s.size() ? s(0) : 0.0, tol,
                             static_cast<int>(std::max(m.rows(), m.cols())));
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > cutoff) ++r;
  return r;
}

Mat columnSpanBasis(const Mat& m, double relCutoff) {
  if (m.size() == 0 || m.norm() == 0.0) return Mat(m.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
  const Vec& s = svd.singularValues();
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > relCutoff * s(0)) ++r;
  return svd.matrixU().leftCols(r);
}

Mat nullSpaceBasis(const Mat& m, double absCutoff) {
  if (m.size() == 0) return Mat(0, 0);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > absCutoff) ++r;
  return svd.matrixV().rightCols(m.cols() - r);
}

Mat matrixExponential(const Mat& m) { return m.exp(); }

std::vector<double> realPolynomialRoots(const std::vector<double>& coeffs,
                                        double imagTol) {
  const int m = static_cast<int>(coeffs.size());
  if (m == 0) return {};
  Mat companion = Mat::Zero(m, m);
  for (int i = 0; i + 1 < m; ++i) companion(i + 1, i) = 1.0;
  for (int i = 0; i < m; ++i) companion(i, m - 1) = -coeffs[i];

  Eigen::EigenSolver<Mat> es(companion);
  if (es.info() != Eigen::Success)
    throw NumericalError("companion matrix eigensolver failed");

  double scale = 1.0;
  for (int i = 0; i < m; ++i)
    scale = std::max(scale, std::abs(es.eigenvalues()(i)));

  auto evalWithDerivative = [&](double x) {
    // Horner for p and p' of the monic polynomial.
    double p = 1.0, dp = 0.0;
    for (int i = m - 1; i >= 0; --i) {
      dp = dp * x + p;
      p = p * x + coeffs[i];
    }
    return std::pair<double, double>(p, dp);
  };

  std::vector<double> roots;
  roots.reserve(m);
  for (int i = 0; i < m; ++i) {
    std::complex<double> z = es.eigenvalues()(i);
    if (std::abs(z.imag()) > imagTol * scale)
      throw NumericalError("polynomial has a non-real root", std::abs(z.imag()));
    double x = z.real();
    auto [p, dp] = evalWithDerivative(x);
    if (std::abs(dp) > 1e-12 * std::max(1.0, std::abs(p))) {
      double step = p / dp;
      if (std::abs(step) < 0.5 * std::max(1.0, std::abs(x))) x -= step;
    }
    roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : eng_(splitmix64(splitmix64(seed) ^ (stream * 0xD1B54A32D192ED03ull))),
      normal_(0.0, 1.0) {}

double RngStream::gaussian() { return normal_(eng_); }

double RngStream::uniform(double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(eng_);
}

std::uint64_t RngStream::integer(std::uint64_t bound) {
  std::uniform_int_distribution<std::uint64_t> d(0, bound - 1);
  return d(eng_);
}

Vec RngStream::gaussianVec(int d) {
  Vec v(d);
  for (int i = 0; i < d; ++i) v(i) = gaussian();
  return v;
}

Vec RngStream::uniformVec(int d, double lo, double hi) {
  Vec v(d);
  for (int i = 0; i < d; ++i) v(i) = uniform(lo, hi);
  return v;
}

}  // namespace jorbit
