#include "jorbit/json_io.hpp"

#include <fstream>
#include <sstream>

namespace jorbit {

namespace {

using nlohmann::json;

json optionalDouble(const std::optional<double>& v) {
  if (v) return *v;
  return nullptr;
}

}  // namespace

nlohmann::json vecToJson(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

nlohmann::json matToJson(const Mat& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

namespace {

Vec vecFromJson(const json& a, int expectedSize, const std::string& what) {
  if (!a.is_array() || (expectedSize >= 0 && static_cast<int>(a.size()) != expectedSize))
    throw InputError(what + ": expected an array of " +
                     std::to_string(expectedSize) + " numbers");
  Vec v(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) throw InputError(what + ": entries must be numbers");
    v(static_cast<int>(i)) = a[i].get<double>();
  }
  return v;
}

}  // namespace

AlgebraSpec algebraFromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("algebra file: top level must be an object");
  if (!j.contains("dim") || !j["dim"].is_number_integer())
    throw InputError("algebra file: integer field \"dim\" is required");
  const int d = j["dim"].get<int>();
  if (d < 1 || d > 4096) throw InputError("algebra file: dim out of range");

  if (!j.contains("kind") || !j["kind"].is_string())
    throw InputError("algebra file: string field \"kind\" is required");
  const AlgebraKind kind = kindFromName(j["kind"].get<std::string>());

  double tol = 1e-9;
  if (j.contains("tolerance")) {
    if (!j["tolerance"].is_number())
      throw InputError("algebra file: \"tolerance\" must be a number");
    tol = j["tolerance"].get<double>();
    if (!(tol > 0) || tol > 1e-2)
      throw InputError("algebra file: tolerance must lie in (0, 1e-2]");
  }

  std::vector<std::string> labels;
  if (j.contains("basis")) {
    if (!j["basis"].is_array() || static_cast<int>(j["basis"].size()) != d)
      throw InputError("algebra file: \"basis\" must list dim labels");
    for (const auto& s : j["basis"]) {
      if (!s.is_string()) throw InputError("algebra file: basis labels must be strings");
      labels.push_back(s.get<std::string>());
    }
  }

  if (!j.contains("constants") || !j["constants"].is_array())
    throw InputError("algebra file: array field \"constants\" is required");
  std::vector<Mat> lmats(d, Mat::Zero(d, d));
  for (const auto& row : j["constants"]) {
    if (!row.is_array() || row.size() != 4 || !row[0].is_number_integer() ||
        !row[1].is_number_integer() || !row[2].is_number_integer() ||
        !row[3].is_number())
      throw InputError("algebra file: constants rows must be [i, j, k, value]");
    const int i = row[0].get<int>(), jj = row[1].get<int>(), k = row[2].get<int>();
    if (i < 0 || i >= d || jj < 0 || jj >= d || k < 0 || k >= d)
      throw InputError("algebra file: constants index out of range");
    lmats[i](k, jj) = row[3].get<double>();
  }
  return AlgebraSpec::create(kind, std::move(labels), std::move(lmats), tol,
                             true);
}

nlohmann::json algebraToJson(const AlgebraSpec& alg) {
  const int d = alg.dim();
  json constants = json::array();
  for (int i = 0; i < d; ++i)
    for (int jj = 0; jj < d; ++jj)
      for (int k = 0; k < d; ++k) {
        const double v = alg.structureConstant(i, jj, k);
        if (v != 0.0) constants.push_back(json::array({i, jj, k, v}));
      }
  return json{{"dim", d},
              {"kind", kindName(alg.kind())},
              {"basis", alg.basisLabels()},
              {"tolerance", alg.tolerance()},
              {"constants", constants}};
}

CatalogEntry loadCustomFromString(const std::string& text,
                                  const std::string& label) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("algebra file: ") + e.what());
  }
  CatalogEntry entry = wrapSpec(algebraFromJson(j), label);
  const AlgebraSpec& alg = entry.spec;
  const double tol = alg.tolerance();

  if (j.contains("unit")) {
    Vec u = vecFromJson(j["unit"], alg.dim(), "algebra file: unit");
    Mat lu = leftMultiplicationMatrix(alg, u);
    double res = (lu - Mat::Identity(alg.dim(), alg.dim()))
                     .cwiseAbs()
                     .maxCoeff();
    if (res > tol * std::max(1.0, alg.maxStructureConstant() * u.cwiseAbs().maxCoeff()))
      throw InputError("algebra file: declared unit fails l_u = id");
    if (!entry.unit) entry.unit = Element{u};
  }

  const bool jordan = alg.kind() == AlgebraKind::jordan;
  if (j.contains("rank")) {
    if (!jordan)
      throw InputError("algebra file: rank only applies to the jordan kind");
    if (!j["rank"].is_number_integer())
      throw InputError("algebra file: rank must be an integer");
    const int claimed = j["rank"].get<int>();
    if (claimed < 1 || claimed > alg.dim())
      throw InputError("algebra file: rank out of range");
    if (entry.rank > 0 && entry.rank != claimed)
      throw InputError("algebra file: declared rank " + std::to_string(claimed) +
                       " does not match the computed rank " +
                       std::to_string(entry.rank));
    if (entry.rank == 0)
      throw InputError(
          "algebra file: rank cannot be validated (no spectral theory here)");
  }

  if (j.contains("frame")) {
    if (!jordan)
      throw InputError("algebra file: frame only applies to the jordan kind");
    if (!j["frame"].is_array() || j["frame"].empty())
      throw InputError("algebra file: frame must be a non-empty array");
    JordanFrame frame;
    for (const auto& row : j["frame"])
      frame.idempotents.push_back(
          Element{vecFromJson(row, alg.dim(), "algebra file: frame")});
    const Element* unitPtr = entry.unit ? &*entry.unit : nullptr;
    FrameCheck check = jordanFrameCheck(alg, frame, unitPtr);
    if (!check.pass)
      throw InputError("algebra file: declared frame fails validation");
    if (entry.rank > 0 &&
        entry.rank != static_cast<int>(frame.idempotents.size()))
      throw InputError("algebra file: frame size disagrees with the rank");
    entry.canonicalFrame = frame.idempotents;
  }
  return entry;
}

CatalogEntry loadCustom(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open algebra file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return loadCustomFromString(buf.str(), path);
}

nlohmann::json toJson(const AxiomReport& r) {
  json unit = nullptr;
  if (r.unit) unit = vecToJson(r.unit->coords);
  return json{{"commutative", r.commutative},
              {"anticommutative", r.anticommutative},
              {"jordanIdentity", r.jordanIdentity},
              {"jacobi", r.jacobi},
              {"associative", r.associative},
              {"unit", unit},
              {"residuals",
               json{{"commutative", r.commutativeResidual},
                    {"anticommutative", r.anticommutativeResidual},
                    {"jordan", r.jordanResidual},
                    {"jacobi", r.jacobiResidual},
                    {"associative", r.associativeResidual},
                    {"unit", r.unitResidual}}}};
}

nlohmann::json toJson(const SpectralData& r) {
  json frame = json::array();
  for (const auto& c : r.frame.idempotents) frame.push_back(vecToJson(c.coords));
  return json{{"coefficients", vecToJson(r.coefficients)},
              {"frame", frame},
              {"positive", r.positive},
              {"negative", r.negative},
              {"zeroThreshold", r.zeroThreshold},
              {"reconstructionResidual", r.reconstructionResidual}};
}

nlohmann::json toJson(const TraceForm& r) {
  return json{{"variant", traceVariantName(r.variant)},
              {"matrix", matToJson(r.matrix)},
              {"signature",
               json{{"positive", r.positive},
                    {"negative", r.negative},
                    {"zero", r.zero}}},
              {"associativityResidual", r.associativityResidual},
              {"ratioToNormalized", optionalDouble(r.ratioToNormalized)}};
}

nlohmann::json toJson(const PeirceDecomposition& r) {
  json frame = json::array();
  for (const auto& c : r.frame.idempotents) frame.push_back(vecToJson(c.coords));
  json blocks = json::array();
  for (const auto& [key, basis] : r.blocks)
    blocks.push_back(json{{"i", key.first},
                          {"j", key.second},
                          {"dim", static_cast<int>(basis.cols())},
                          {"basis", matToJson(basis)}});
  return json{{"frame", frame},
              {"blocks", blocks},
              {"residuals",
               json{{"eigenvalue", r.eigenvalueResidual},
                    {"orthogonality", r.orthogonalityResidual},
                    {"product", r.productResidual}}}};
}

nlohmann::json toJson(const OrbitClass& r) {
  json perFactor = json::array();
  for (const auto& f : r.perFactor) perFactor.push_back(toJson(f));
  return json{{"positive", r.positive},
              {"negative", r.negative},
              {"rank", r.rank},
              {"regularOrbit", r.regularOrbit},
              {"coneStatus", coneStatusName(r.coneStatus)},
              {"coneSign", r.coneSign},
              {"variant", traceVariantName(r.variant)},
              {"perFactor", perFactor}};
}

nlohmann::json toJson(const TangentDims& r) {
  return json{{"dimLx", r.dimLx}, {"dimDer", r.dimDer}, {"dimOrbit", r.dimOrbit}};
}

nlohmann::json toJson(const MetricReport& r) {
  json columns = json::array();
  for (const auto& [a, i] : r.blockOfColumn) columns.push_back(json::array({a, i}));
  json blockCoeffs = json::array();
  for (const auto& [key, value] : r.blockCoefficients)
    blockCoeffs.push_back(
        json{{"a", key.first}, {"i", key.second}, {"value", value}});
  return json{{"point", vecToJson(r.point.coords)},
              {"variant", traceVariantName(r.variant)},
              {"regularPoint", r.regularPoint},
              {"coefficients", vecToJson(r.coefficients)},
              {"tangentBasis", matToJson(r.tangentBasis)},
              {"blockOfColumn", columns},
              {"gram", matToJson(r.gram)},
              {"blockCoefficients", blockCoeffs},
              {"metricPositive", r.metricPositive},
              {"metricNegative", r.metricNegative},
              {"orbitDim", r.orbitDim},
              {"crossCheckResidual", r.crossCheckResidual},
              {"poleProximity", r.poleProximity}};
}

nlohmann::json toJson(const InvolutivityVerdict& r) {
  json derInside = nullptr;
  if (r.derivationsInsideImage) derInside = *r.derivationsInsideImage;
  return json{{"distRank", r.distRank},
              {"bracketRank", r.bracketRank},
              {"involutive", r.involutive},
              {"stabilizerDim", r.stabilizerDim},
              {"derivationsInsideImage", derInside}};
}

nlohmann::json toJson(const DistributionBasis& r) {
  return json{{"point", vecToJson(r.point.coords)},
              {"generators", matToJson(r.generators)},
              {"rank", r.rank}};
}

nlohmann::json toJson(const SweepReport& r) {
  return json{{"trials", r.trials},
              {"signatureConstant", r.signatureConstant},
              {"maxCoefficientDeviation", r.maxCoefficientDeviation},
              {"maxPullbackResidual", r.maxPullbackResidual},
              {"basePositive", r.basePositive},
              {"baseNegative", r.baseNegative}};
}

}  // namespace jorbit
