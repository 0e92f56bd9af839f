#pragma once

#include <optional>
#include <vector>

#include "jorbit/algebra.hpp"

namespace jorbit {

// R(i, j) = <xi, e_i * e_j>; symmetric for Jordan kind, antisymmetric for
// Lie kind.
struct BivectorAt {
  DualElement point;
  Mat matrix;
};
BivectorAt bivectorAt(const AlgebraSpec& alg, const DualElement& xi);

// Contraction of a covector theta into the first slot of the bivector;
// theta = delta_a gives the action generator coordinates of l_{e_a} at xi.
Vec sharpAt(const AlgebraSpec& alg, const DualElement& xi, const Vec& theta);

// The gradient-like vector field of f at xi, given df as a covector.
Vec dualVectorField(const AlgebraSpec& alg, const DualElement& xi,
                    const Vec& df);

struct DistributionBasis {
  DualElement point;
  Mat generators;  // column i = coordinates of the action of l_{e_i} at xi
  int rank = 0;
};
DistributionBasis distributionBasis(const AlgebraSpec& alg,
                                    const DualElement& xi);

struct StructureAlgebraBasis {
  std::vector<Mat> operators;  // orthonormal in the Frobenius inner product
  int generationDepth = 0;
  double closureResidual = 0.0;
};
// Bracket closure of span{l_x}.
StructureAlgebraBasis structureAlgebra(const AlgebraSpec& alg);

// Orthonormal operator basis of span{[l_x, l_y]} (inner derivations).
std::vector<Mat> innerDerivationBasis(const AlgebraSpec& alg);

// The Lie algebra der_0 + J with [d, x] = d(x) and [x, y] = [l_x, l_y],
// returned as a structure-constant table over the basis
// (D_1..D_k, e_1..e_d), together with its standard representation.
struct ExtendedStructureAlgebra {
  std::vector<Mat> innerDerivations;
  AlgebraSpec bracketTable;      // Lie kind, dim k + d
  std::vector<Mat> standardRep;  // basis order matches bracketTable
  bool transvective = false;     // [m, m] spans the derivation part
  double closureResidual = 0.0;
  double homomorphismResidual = 0.0;
};
ExtendedStructureAlgebra extendedStructureAlgebra(const AlgebraSpec& alg);

struct InvolutivityVerdict {
  int distRank = 0;
  int bracketRank = 0;
  bool involutive = false;
  int stabilizerDim = 0;  // dim - distRank
  // Jordan kind: second route, derivations acting at xi stay inside the
  // distribution span.
  std::optional<bool> derivationsInsideImage;
};
InvolutivityVerdict involutivityTest(const AlgebraSpec& alg,
                                     const DualElement& xi);

// G_xi on action generators: G(l_a xi, l_b xi) = <xi, a * b>.  The value is
// representative-independent for symmetric and antisymmetric products; the
// flag reports whether representatives are non-unique at this point.
struct CanonicalFormValue {
  double value = 0.0;
  bool ambiguousRepresentatives = false;
};
CanonicalFormValue canonicalForm(const AlgebraSpec& alg, const DualElement& xi,
                                 const Element& a, const Element& b);

}  // namespace jorbit
