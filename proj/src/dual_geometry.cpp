#include "jorbit/dual_geometry.hpp"

#include <algorithm>
#include <cmath>

#include "jorbit/numerics.hpp"

namespace jorbit {

namespace {

void checkPoint(const AlgebraSpec& alg, const Vec& v, const char* what) {
  if (v.size() != alg.dim())
    throw InputError(std::string(what) + " size does not match the algebra dimension");
}

// Columns scaled to unit norm so rank cutoffs act uniformly; columns below
// the noise floor are zeroed instead of amplified.
Mat normalizedCols(const Mat& m) {
  Mat out = m;
  double top = 0.0;
  for (int c = 0; c < out.cols(); ++c) top = std::max(top, out.col(c).norm());
  const double floor = 1e-14 * std::max(1.0, top);
  for (int c = 0; c < out.cols(); ++c) {
    const double n = out.col(c).norm();
    if (n > floor)
      out.col(c) /= n;
    else
      out.col(c).setZero();
  }
  return out;
}

// Incrementally grown orthonormal basis of a space of operators, flattened
// to Frobenius vectors.
class OperatorSpan {
 public:
  explicit OperatorSpan(int d) : d_(d), q_(d * d, 0) {}

  // Returns true when m added a new direction; leak records the relative
  // residual of the rejected ones.
  bool add(const Mat& m, double* leak = nullptr) {
    Vec v = Eigen::Map<const Vec>(m.data(), d_ * d_);
    const double before = v.norm();
    v -= q_ * (q_.transpose() * v);
    v -= q_ * (q_.transpose() * v);
    if (v.norm() > 1e-10 * std::max(1.0, before)) {
      q_.conservativeResize(Eigen::NoChange, q_.cols() + 1);
      q_.col(q_.cols() - 1) = v / v.norm();
      ops_.push_back(Eigen::Map<const Mat>(q_.col(q_.cols() - 1).data(), d_, d_));
      return true;
    }
    if (leak != nullptr && before > 1e-14)
      *leak = std::max(*leak, v.norm() / std::max(1.0, before));
    return false;
  }

  double residualOf(const Mat& m) const {
    Vec v = Eigen::Map<const Vec>(m.data(), d_ * d_);
    const double before = v.norm();
    if (before <= 1e-14) return 0.0;
    v -= q_ * (q_.transpose() * v);
    return v.norm() / std::max(1.0, before);
  }

  const std::vector<Mat>& ops() const { return ops_; }
  int size() const { return static_cast<int>(ops_.size()); }

 private:
  int d_;
  Mat q_;
  std::vector<Mat> ops_;
};

}  // namespace

BivectorAt bivectorAt(const AlgebraSpec& alg, const DualElement& xi) {
  checkPoint(alg, xi.coords, "covector");
  const int d = alg.dim();
  BivectorAt out;
  out.point = xi;
  out.matrix.resize(d, d);
  for (int i = 0; i < d; ++i)
    out.matrix.row(i) = (alg.basisLeftMult(i).transpose() * xi.coords).transpose();
  return out;
}

Vec sharpAt(const AlgebraSpec& alg, const DualElement& xi, const Vec& theta) {
  checkPoint(alg, xi.coords, "covector");
  checkPoint(alg, theta, "covector");
  Vec out = Vec::Zero(alg.dim());
  for (int i = 0; i < alg.dim(); ++i)
    if (theta(i) != 0.0)
      out += theta(i) * (alg.basisLeftMult(i).transpose() * xi.coords);
  return out;
}

Vec dualVectorField(const AlgebraSpec& alg, const DualElement& xi,
                    const Vec& df) {
  return sharpAt(alg, xi, df);
}

DistributionBasis distributionBasis(const AlgebraSpec& alg,
                                    const DualElement& xi) {
  checkPoint(alg, xi.coords, "covector");
  const int d = alg.dim();
  DistributionBasis out;
  out.point = xi;
  out.generators.resize(d, d);
  for (int i = 0; i < d; ++i)
    out.generators.col(i) = alg.basisLeftMult(i).transpose() * xi.coords;
  out.rank = rankWithTolerance(normalizedCols(out.generators), alg.tolerance());
  return out;
}

StructureAlgebraBasis structureAlgebra(const AlgebraSpec& alg) {
  const int d = alg.dim();
  StructureAlgebraBasis out;
  OperatorSpan span(d);
  for (int i = 0; i < d; ++i) span.add(alg.basisLeftMult(i));

  int fresh = span.size();
  while (fresh > 0 && span.size() < d * d) {
    const int before = span.size();
    std::vector<Mat> current = span.ops();
    for (size_t a = 0; a < current.size(); ++a)
      for (size_t b = a + 1; b < current.size(); ++b)
        span.add(current[a] * current[b] - current[b] * current[a]);
    fresh = span.size() - before;
    if (fresh > 0) ++out.generationDepth;
  }

  out.operators = span.ops();
  for (size_t a = 0; a < out.operators.size(); ++a)
    for (size_t b = a + 1; b < out.operators.size(); ++b) {
      Mat br = out.operators[a] * out.operators[b] -
               out.operators[b] * out.operators[a];
      out.closureResidual = std::max(out.closureResidual, span.residualOf(br));
    }
  return out;
}

std::vector<Mat> innerDerivationBasis(const AlgebraSpec& alg) {
  const int d = alg.dim();
  OperatorSpan span(d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const Mat& li = alg.basisLeftMult(i);
      const Mat& lj = alg.basisLeftMult(j);
      span.add(li * lj - lj * li);
    }
  return span.ops();
}

ExtendedStructureAlgebra extendedStructureAlgebra(const AlgebraSpec& alg) {
  const int d = alg.dim();
  ExtendedStructureAlgebra out;
  out.innerDerivations = innerDerivationBasis(alg);
  const int k = static_cast<int>(out.innerDerivations.size());
  const int n = k + d;

  OperatorSpan derSpan(d);
  for (const Mat& m : out.innerDerivations) derSpan.add(m);

  // coordinates of a derivation in the orthonormal derivation basis,
  // tracking whatever escapes the span
  auto derCoords = [&](const Mat& m) {
    Vec c(k);
    for (int a = 0; a < k; ++a)
      c(a) = (out.innerDerivations[a].array() * m.array()).sum();
    Mat recon = Mat::Zero(d, d);
    for (int a = 0; a < k; ++a) recon += c(a) * out.innerDerivations[a];
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    out.closureResidual = std::max(
        out.closureResidual, (recon - m).cwiseAbs().maxCoeff() / scale);
    return c;
  };

  std::vector<Mat> lmats(n, Mat::Zero(n, n));
  std::vector<std::string> labels;
  for (int a = 0; a < k; ++a) labels.push_back("D" + std::to_string(a + 1));
  for (int i = 0; i < d; ++i) labels.push_back(alg.basisLabels()[i]);

  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      if (a == b) continue;
      Mat br = out.innerDerivations[a] * out.innerDerivations[b] -
               out.innerDerivations[b] * out.innerDerivations[a];
      lmats[a].col(b).head(k) = derCoords(br);
    }
  for (int a = 0; a < k; ++a)
    for (int i = 0; i < d; ++i) {
      Vec di = out.innerDerivations[a] * Vec::Unit(d, i);
      lmats[a].col(k + i).tail(d) = di;
      lmats[k + i].col(a).tail(d) = -di;
    }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      const Mat& li = alg.basisLeftMult(i);
      const Mat& lj = alg.basisLeftMult(j);
      lmats[k + i].col(k + j).head(k) = derCoords(li * lj - lj * li);
    }

  out.bracketTable = AlgebraSpec::create(AlgebraKind::lie, labels, lmats,
                                         alg.tolerance(), false);

  out.standardRep = out.innerDerivations;
  for (int i = 0; i < d; ++i) out.standardRep.push_back(alg.basisLeftMult(i));

  // the derivation part must be exactly what brackets of the element part
  // generate
  OperatorSpan fromM(d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const Mat& li = alg.basisLeftMult(i);
      const Mat& lj = alg.basisLeftMult(j);
      fromM.add(li * lj - lj * li);
    }
  out.transvective = fromM.size() == k;

  double hom = 0.0;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      Mat lhs = out.standardRep[u] * out.standardRep[v] -
                out.standardRep[v] * out.standardRep[u];
      Mat rhs = Mat::Zero(d, d);
      Vec bracket = out.bracketTable.basisLeftMult(u).col(v);
      for (int w = 0; w < n; ++w)
        if (bracket(w) != 0.0) rhs += bracket(w) * out.standardRep[w];
      hom = std::max(hom,
                     (lhs - rhs).cwiseAbs().maxCoeff() /
                         std::max(1.0, lhs.cwiseAbs().maxCoeff()));
    }
  out.homomorphismResidual = hom;
  return out;
}

InvolutivityVerdict involutivityTest(const AlgebraSpec& alg,
                                     const DualElement& xi) {
  checkPoint(alg, xi.coords, "covector");
  const int d = alg.dim();
  InvolutivityVerdict out;

  Mat gen(d, d);
  for (int i = 0; i < d; ++i)
    gen.col(i) = alg.basisLeftMult(i).transpose() * xi.coords;
  out.distRank = rankWithTolerance(normalizedCols(gen), alg.tolerance());
  out.stabilizerDim = d - out.distRank;

  // brackets of the linear generator fields evaluated at the point
  std::vector<Vec> brackets;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const Mat& li = alg.basisLeftMult(i);
      const Mat& lj = alg.basisLeftMult(j);
      brackets.push_back((li * lj - lj * li).transpose() * xi.coords);
    }
  Mat all(d, d + static_cast<int>(brackets.size()));
  all.leftCols(d) = gen;
  for (size_t b = 0; b < brackets.size(); ++b) all.col(d + b) = brackets[b];
  out.bracketRank = rankWithTolerance(normalizedCols(all), alg.tolerance());
  out.involutive = out.bracketRank == out.distRank;

  if (alg.kind() == AlgebraKind::jordan) {
    std::vector<Mat> ders = innerDerivationBasis(alg);
    Mat withDer(d, d + static_cast<int>(ders.size()));
    withDer.leftCols(d) = gen;
    for (size_t a = 0; a < ders.size(); ++a)
      withDer.col(d + a) = ders[a].transpose() * xi.coords;
    out.derivationsInsideImage =
        rankWithTolerance(normalizedCols(withDer), alg.tolerance()) ==
        out.distRank;
  }
  return out;
}

CanonicalFormValue canonicalForm(const AlgebraSpec& alg, const DualElement& xi,
                                 const Element& a, const Element& b) {
  checkPoint(alg, xi.coords, "covector");
  checkPoint(alg, a.coords, "element");
  checkPoint(alg, b.coords, "element");
  CanonicalFormValue out;
  out.value = pairing(xi, product(alg, a, b));
  DistributionBasis dist = distributionBasis(alg, xi);
  out.ambiguousRepresentatives = dist.rank < alg.dim();
  return out;
}

}  // namespace jorbit
