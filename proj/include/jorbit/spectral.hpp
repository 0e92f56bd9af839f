#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "jorbit/builders.hpp"

namespace jorbit {

struct TraceForm {
  TraceVariant variant = TraceVariant::canonical;
  Mat matrix;
  int positive = 0;
  int negative = 0;
  int zero = 0;
  double associativityResidual = 0.0;
  std::optional<double> ratioToNormalized;
};

// Canonical form tau(e_i, e_j) = tr l_{e_i * e_j}; Jordan kind only.
TraceForm traceForm(const AlgebraSpec& alg);
TraceForm traceForm(const CatalogEntry& entry, TraceVariant variant);
Mat traceFormMatrix(const CatalogEntry& entry, TraceVariant variant);

bool isFormallyReal(const AlgebraSpec& alg);

struct JordanFrame {
  std::vector<Element> idempotents;
};

struct FrameCheck {
  bool pass = false;
  bool idempotent = false;
  bool orthogonal = false;
  bool complete = false;
  bool primitive = false;
  bool eigenvaluesValid = false;  // l_c spectrum inside {0, 1/2, 1}
  double idempotentResidual = 0.0;
  double orthogonalityResidual = 0.0;
  double completenessResidual = 0.0;
  double eigenvalueResidual = 0.0;
};

FrameCheck jordanFrameCheck(const AlgebraSpec& alg, const JordanFrame& frame,
                            const Element* unit);

struct SpectralData {
  JordanFrame frame;
  Vec coefficients;  // descending
  int positive = 0;
  int negative = 0;
  double zeroThreshold = 0.0;  // relative threshold used for zero tests
  double reconstructionResidual = 0.0;
};

struct SpectralOptions {
  double zeroThreshold = 1e-8;
  bool useFastRoute = true;
  std::uint64_t splitSeed = 0x6a6f7264616e32ull;  // fixed: results deterministic
};

// Full spectral resolution x = sum_i lambda_i c_i over a complete system of
// primitive orthogonal idempotents.  Requires a unital, formally real
// Jordan algebra.
SpectralData spectralDecompose(const CatalogEntry& entry, const Element& x,
                               const SpectralOptions& opts = {});
SpectralData spectralDecompose(const AlgebraSpec& alg, const Element& x,
                               const Element& unit, int rankHint,
                               const SpectralOptions& opts = {});

// Coefficients (a_0, ..., a_{r-1}) of prod_i (t - lambda_i), multiplicities
// included, so the degree always equals the rank.
std::vector<double> minimalPolynomialCoeffs(const CatalogEntry& entry,
                                            const Element& x,
                                            const SpectralOptions& opts = {});

struct PeirceDecomposition {
  JordanFrame frame;
  // (i, j) with i <= j -> orthonormal basis of the joint eigenspace,
  // one column per basis vector (zero columns for empty blocks).
  std::map<std::pair<int, int>, Mat> blocks;
  double eigenvalueResidual = 0.0;
  double orthogonalityResidual = 0.0;
  double productResidual = 0.0;  // multiplication rules between blocks
};

// Joint eigenspace split for the commuting family {l_{c_i}}.  Block bases
// are orthonormal for `form` (the canonical trace form when null).
PeirceDecomposition peirceDecompose(const AlgebraSpec& alg,
                                    const JordanFrame& frame,
                                    const Mat* form = nullptr);

DualElement flatMap(const CatalogEntry& entry, const Element& x,
                    TraceVariant variant);
Element sharpMap(const CatalogEntry& entry, const DualElement& xi,
                 TraceVariant variant);

}  // namespace jorbit
