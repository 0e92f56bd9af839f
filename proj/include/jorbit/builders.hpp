#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "jorbit/algebra.hpp"

namespace jorbit {

enum class HermitianField { real, complex, quaternion };

enum class TraceVariant {
  canonical,   // tau(x, y) = tr l_{x*y}
  normalized,  // the associative inner product that is the identity matrix
               // in the builder coordinates (unit-normalized basis)
};

std::string traceVariantName(TraceVariant v);

// Spectral output before sorting/classification: unordered coefficients
// and the matching idempotent coordinates.
struct RawSpectral {
  Vec coefficients;
  std::vector<Vec> frame;
};
using SpectralRoute = std::function<RawSpectral(const Vec&)>;

// A constructed algebra together with the metadata the geometry layers
// consume: rank, unit, a canonical frame, the canonical trace form, and
// (when available) a closed-form eigensolver route.
struct CatalogEntry {
  AlgebraSpec spec;
  std::string name;
  std::string notes;

  int rank = 0;  // 0 when unknown or not applicable
  std::optional<Element> unit;
  std::vector<Element> canonicalFrame;

  Mat tauMatrix;  // canonical trace form in these coordinates
  bool hasNormalizedForm = false;
  std::optional<double> traceRatio;  // tau == ratio * normalized form
  TraceVariant defaultVariant = TraceVariant::canonical;

  std::vector<std::shared_ptr<const CatalogEntry>> factors;  // direct sums
  std::vector<int> factorOffsets;

  SpectralRoute fastRoute;
};

CatalogEntry buildRn(int n);
CatalogEntry buildHermitian(int n, HermitianField field);
CatalogEntry buildSpin(int n);
CatalogEntry buildDirectSum(const std::vector<CatalogEntry>& parts);

// name: "so3", "sl2r", or "un:N"
CatalogEntry buildLie(const std::string& name);

// JSON algebra file; declared kind is re-validated, optional rank/unit/frame
// claims are checked rather than trusted.
CatalogEntry loadCustom(const std::string& path);
CatalogEntry loadCustomFromString(const std::string& text,
                                  const std::string& label = "custom");

// Wrap a bare spec: detect the unit, probe rank and a frame when the
// algebra is formally real Jordan.
CatalogEntry wrapSpec(AlgebraSpec spec, const std::string& name = "custom");

// Catalog syntax: "rn:5", "herm:2:complex", "spin:4", "so3", "sl2r",
// "un:2", direct sums joined with '+', anything else is read as a path.
CatalogEntry fromName(const std::string& name);

int hermitianDim(int n, HermitianField field);

}  // namespace jorbit
