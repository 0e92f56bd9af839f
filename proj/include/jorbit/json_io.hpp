#pragma once

#include <json.hpp>
#include <string>

#include "jorbit/dual_geometry.hpp"
#include "jorbit/orbit_metric.hpp"
#include "jorbit/spectral.hpp"

namespace jorbit {

// File format:
//   {"dim": d, "kind": "jordan", "basis": [...], "tolerance": 1e-9,
//    "constants": [[i, j, k, value], ...]}
// with zero-based indices; unspecified triples are zero.  Optional "rank",
// "unit", "frame" fields are validated against the constants.
AlgebraSpec algebraFromJson(const nlohmann::json& j);
nlohmann::json algebraToJson(const AlgebraSpec& alg);

nlohmann::json toJson(const AxiomReport& r);
nlohmann::json toJson(const SpectralData& r);
nlohmann::json toJson(const TraceForm& r);
nlohmann::json toJson(const PeirceDecomposition& r);
nlohmann::json toJson(const OrbitClass& r);
nlohmann::json toJson(const TangentDims& r);
nlohmann::json toJson(const MetricReport& r);
nlohmann::json toJson(const InvolutivityVerdict& r);
nlohmann::json toJson(const DistributionBasis& r);
nlohmann::json toJson(const SweepReport& r);

nlohmann::json vecToJson(const Vec& v);
nlohmann::json matToJson(const Mat& m);

}  // namespace jorbit
