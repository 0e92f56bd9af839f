#include "jorbit/algebra.hpp"

#include <cmath>
#include <limits>

#include "jorbit/numerics.hpp"

namespace jorbit {

std::string kindName(AlgebraKind kind) {
  switch (kind) {
    case AlgebraKind::jordan: return "jordan";
    case AlgebraKind::lie: return "lie";
    case AlgebraKind::associative: return "associative";
    case AlgebraKind::general: return "general";
  }
  return "general";
}

AlgebraKind kindFromName(const std::string& name) {
  if (name == "jordan") return AlgebraKind::jordan;
  if (name == "lie") return AlgebraKind::lie;
  if (name == "associative") return AlgebraKind::associative;
  if (name == "general") return AlgebraKind::general;
  throw InputError("unknown algebra kind: " + name);
}

AlgebraSpec AlgebraSpec::create(AlgebraKind kind,
                                std::vector<std::string> basisLabels,
                                std::vector<Mat> basisLeftMult,
                                double tolerance, bool validateKind) {
  const int d = static_cast<int>(basisLeftMult.size());
  if (d == 0) throw InputError("algebra dimension must be positive");
  if (!(tolerance > 0.0)) throw InputError("tolerance must be positive");
  double cmax = 0.0;
  for (const Mat& m : basisLeftMult) {
    if (m.rows() != d || m.cols() != d)
      throw InputError("structure constant block has wrong shape");
    if (!m.allFinite()) throw InputError("structure constants must be finite");
    cmax = std::max(cmax, m.cwiseAbs().maxCoeff());
  }
  if (basisLabels.empty()) {
    for (int i = 0; i < d; ++i) basisLabels.push_back("e" + std::to_string(i));
  }
  if (static_cast<int>(basisLabels.size()) != d)
    throw InputError("basis label count does not match dimension");

  AlgebraSpec alg;
  alg.dim_ = d;
  alg.kind_ = kind;
  alg.labels_ = std::move(basisLabels);
  alg.lmats_ = std::move(basisLeftMult);
  alg.tol_ = tolerance;
  alg.cmax_ = cmax;

  if (validateKind) {
    AxiomReport r = checkAxioms(alg);
    if (!r.satisfiesKind(kind))
      throw InputError("structure constants violate the declared kind '" +
                       kindName(kind) + "'");
  }
  return alg;
}

bool AxiomReport::satisfiesKind(AlgebraKind kind) const {
  switch (kind) {
    case AlgebraKind::jordan: return commutative && jordanIdentity;
    case AlgebraKind::lie: return anticommutative && jacobi;
    case AlgebraKind::associative: return associative;
    case AlgebraKind::general: return true;
  }
  return true;
}

Element product(const AlgebraSpec& alg, const Element& x, const Element& y) {
  if (x.coords.size() != alg.dim() || y.coords.size() != alg.dim())
    throw InputError("element dimension mismatch");
  Vec out = Vec::Zero(alg.dim());
  for (int i = 0; i < alg.dim(); ++i)
    if (x.coords(i) != 0.0) out += x.coords(i) * (alg.basisLeftMult(i) * y.coords);
  return Element{out};
}

Mat leftMultiplicationMatrix(const AlgebraSpec& alg, const Vec& x) {
  if (x.size() != alg.dim()) throw InputError("element dimension mismatch");
  Mat out = Mat::Zero(alg.dim(), alg.dim());
  for (int i = 0; i < alg.dim(); ++i)
    if (x(i) != 0.0) out += x(i) * alg.basisLeftMult(i);
  return out;
}

LinearOperator leftMultiplication(const AlgebraSpec& alg, const Element& x) {
  return LinearOperator{leftMultiplicationMatrix(alg, x.coords)};
}

namespace {

// Right multiplication r_{e_i}: column j holds e_j * e_i.
Mat rightMultBasis(const AlgebraSpec& alg, int i) {
  Mat out(alg.dim(), alg.dim());
  for (int j = 0; j < alg.dim(); ++j) out.col(j) = alg.basisLeftMult(j).col(i);
  return out;
}

// Least-squares unit: l_u = id, and r_u = id when the product is not
// commutative.  Accepted when the relative residual stays within tol.
std::optional<std::pair<Element, double>> detectUnit(const AlgebraSpec& alg,
                                                     bool commutative) {
  const int d = alg.dim();
  const int rows = commutative ? d * d : 2 * d * d;
  Mat A(rows, d);
  Vec b(rows);
  const Mat id = Mat::Identity(d, d);
  for (int i = 0; i < d; ++i) {
    A.col(i).head(d * d) = alg.basisLeftMult(i).reshaped();
    if (!commutative) A.col(i).tail(d * d) = rightMultBasis(alg, i).reshaped();
  }
  b.head(d * d) = id.reshaped();
  if (!commutative) b.tail(d * d) = id.reshaped();

  Vec u = A.completeOrthogonalDecomposition().solve(b);
  double residual = (A * u - b).norm() / b.norm();
  if (residual > alg.tolerance()) return std::nullopt;
  return std::make_pair(Element{u}, residual);
}

}  // namespace

AxiomReport checkAxioms(const AlgebraSpec& alg) {
  const int d = alg.dim();
  const double scale1 = std::max(1.0, alg.maxStructureConstant());
  const double scale2 = std::max(1.0, scale1 * scale1);
  AxiomReport r;

  // Basis products and their left multiplications, shared by all checks.
  std::vector<std::vector<Vec>> prod(d, std::vector<Vec>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) prod[i][j] = alg.basisLeftMult(i).col(j);

  double comm = 0.0, anti = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      comm = std::max(comm, (prod[i][j] - prod[j][i]).norm());
      anti = std::max(anti, (prod[i][j] + prod[j][i]).norm());
    }
  r.commutativeResidual = comm / scale1;
  r.anticommutativeResidual = anti / scale1;
  r.commutative = r.commutativeResidual <= alg.tolerance();
  r.anticommutative = r.anticommutativeResidual <= alg.tolerance();

  double assoc = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Mat lhs = alg.basisLeftMult(i) * alg.basisLeftMult(j);
      assoc = std::max(
          (lhs - leftMultiplicationMatrix(alg, prod[i][j])).cwiseAbs().maxCoeff(),
          assoc);
    }
  r.associativeResidual = assoc / scale2;
  r.associative = r.associativeResidual <= alg.tolerance();

  double jac = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int k = j + 1; k < d; ++k) {
        Vec s = alg.basisLeftMult(i) * prod[j][k];
        s += alg.basisLeftMult(j) * prod[k][i];
        s += alg.basisLeftMult(k) * prod[i][j];
        jac = std::max(jac, s.lpNorm<Eigen::Infinity>());
      }
  r.jacobiResidual = jac / scale2;
  r.jacobi = r.jacobiResidual <= alg.tolerance();

  // Fully linearized operator form of the degree-four identity: for all
  // basis triples, [l_{e_i e_j}, l_{e_k}] summed over the three pairings
  // must vanish.  Applied to every basis vector this covers all quadruples.
  std::vector<std::vector<Mat>> lp(d, std::vector<Mat>(d));
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      lp[i][j] = leftMultiplicationMatrix(alg, prod[i][j]);
      if (j != i) lp[j][i] = leftMultiplicationMatrix(alg, prod[j][i]);
    }
  auto bracket = [](const Mat& a, const Mat& b) { return a * b - b * a; };
  double jordan = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j)
      for (int k = j; k < d; ++k) {
        Mat s = bracket(lp[j][k], alg.basisLeftMult(i));
        s += bracket(lp[k][i], alg.basisLeftMult(j));
        s += bracket(lp[i][j], alg.basisLeftMult(k));
        jordan = std::max(jordan, s.cwiseAbs().maxCoeff());
      }
  r.jordanResidual = jordan / scale2;
  r.jordanIdentity = r.commutative && r.jordanResidual <= alg.tolerance();

  if (auto u = detectUnit(alg, r.commutative)) {
    r.unit = u->first;
    r.unitResidual = u->second;
  } else {
    r.unitResidual = 1.0;
  }
  return r;
}

double derivationResidual(const AlgebraSpec& alg, const Mat& d) {
  if (d.rows() != alg.dim() || d.cols() != alg.dim())
    throw InputError("operator dimension mismatch");
  double worst = 0.0;
  for (int i = 0; i < alg.dim(); ++i) {
    const Mat& li = alg.basisLeftMult(i);
    Mat residual = d * li - li * d - leftMultiplicationMatrix(alg, d.col(i));
    worst = std::max(worst, residual.cwiseAbs().maxCoeff());
  }
  double scale = std::max(1.0, d.cwiseAbs().maxCoeff()) *
                 std::max(1.0, alg.maxStructureConstant());
  return worst / scale;
}

bool isDerivation(const AlgebraSpec& alg, const LinearOperator& d) {
  return derivationResidual(alg, d.matrix) <= alg.tolerance();
}

double automorphismResidual(const AlgebraSpec& alg, const Mat& g) {
  if (g.rows() != alg.dim() || g.cols() != alg.dim())
    throw InputError("operator dimension mismatch");
  double worst = 0.0;
  for (int i = 0; i < alg.dim(); ++i) {
    const Mat& li = alg.basisLeftMult(i);
    Mat residual = g * li - leftMultiplicationMatrix(alg, g.col(i)) * g;
    worst = std::max(worst, residual.cwiseAbs().maxCoeff());
  }
  double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  scale *= scale * std::max(1.0, alg.maxStructureConstant());
  return worst / scale;
}

bool isAutomorphism(const AlgebraSpec& alg, const LinearOperator& g) {
  if (rankWithTolerance(g.matrix, alg.tolerance()) != alg.dim()) return false;
  return automorphismResidual(alg, g.matrix) <= alg.tolerance();
}

}  // namespace jorbit
