#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jorbit/types.hpp"

namespace jorbit {

enum class AlgebraKind { jordan, lie, associative, general };

std::string kindName(AlgebraKind kind);
AlgebraKind kindFromName(const std::string& name);

// Finite-dimensional real algebra given by structure constants
//   e_i * e_j = sum_k C[i][j][k] e_k,
// stored as the basis left-multiplication matrices L_i with
// L_i(k, j) = C[i][j][k], so that l_x = sum_i x_i L_i.
class AlgebraSpec {
 public:
  // validateKind = true runs the axiom checks and rejects structure
  // constants that violate the declared kind.
  // An empty spec (dim 0); usable only as a placeholder to assign into.
  AlgebraSpec() = default;

  static AlgebraSpec create(AlgebraKind kind,
                            std::vector<std::string> basisLabels,
                            std::vector<Mat> basisLeftMult, double tolerance,
                            bool validateKind);

  int dim() const { return dim_; }
  AlgebraKind kind() const { return kind_; }
  double tolerance() const { return tol_; }
  const std::vector<std::string>& basisLabels() const { return labels_; }
  const Mat& basisLeftMult(int i) const { return lmats_[i]; }
  double structureConstant(int i, int j, int k) const {
    return lmats_[i](k, j);
  }
  double maxStructureConstant() const { return cmax_; }

 private:
  int dim_ = 0;
  AlgebraKind kind_ = AlgebraKind::general;
  std::vector<std::string> labels_;
  std::vector<Mat> lmats_;
  double tol_ = 1e-9;
  double cmax_ = 0.0;
};

Element product(const AlgebraSpec& alg, const Element& x, const Element& y);
Mat leftMultiplicationMatrix(const AlgebraSpec& alg, const Vec& x);
LinearOperator leftMultiplication(const AlgebraSpec& alg, const Element& x);

// Axiom flags with normalized residuals.  All flags are evaluated
// regardless of the declared kind; the unit, when present, satisfies
// l_u = id (and r_u = id for noncommutative kinds) in least squares.
struct AxiomReport {
  bool commutative = false;
  bool anticommutative = false;
  bool jordanIdentity = false;
  bool jacobi = false;
  bool associative = false;
  std::optional<Element> unit;

  double commutativeResidual = 0.0;
  double anticommutativeResidual = 0.0;
  double jordanResidual = 0.0;
  double jacobiResidual = 0.0;
  double associativeResidual = 0.0;
  double unitResidual = 0.0;

  bool satisfiesKind(AlgebraKind kind) const;
};

AxiomReport checkAxioms(const AlgebraSpec& alg);

// d is a derivation iff [d, l_a] = l_{d a} for all a.
bool isDerivation(const AlgebraSpec& alg, const LinearOperator& d);
double derivationResidual(const AlgebraSpec& alg, const Mat& d);

// g is an automorphism iff g is invertible and g l_a = l_{g a} g.
bool isAutomorphism(const AlgebraSpec& alg, const LinearOperator& g);
double automorphismResidual(const AlgebraSpec& alg, const Mat& g);

}  // namespace jorbit
