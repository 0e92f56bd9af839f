#include <doctest.h>

#include <string>

#include "jorbit/builders.hpp"
#include "jorbit/json_io.hpp"
#include "jorbit/numerics.hpp"

using namespace jorbit;
using nlohmann::json;

namespace {
const char* kDataDir = JORBIT_TEST_DATA_DIR;
}

TEST_CASE("algebra specs round-trip through json") {
  CatalogEntry h = buildHermitian(2, HermitianField::real);
  json j = algebraToJson(h.spec);
  AlgebraSpec back = algebraFromJson(j);
  CHECK(back.dim() == 3);
  CHECK(back.kind() == AlgebraKind::jordan);
  CHECK(back.basisLabels() == h.spec.basisLabels());
  for (int i = 0; i < 3; ++i)
    CHECK((back.basisLeftMult(i) - h.spec.basisLeftMult(i))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
}

TEST_CASE("malformed files fail with a clear error") {
  CHECK_THROWS_AS(algebraFromJson(json::array()), InputError);
  CHECK_THROWS_AS(algebraFromJson(json{{"dim", 2}}), InputError);
  CHECK_THROWS_AS(
      algebraFromJson(json{{"dim", 2},
                           {"kind", "jordan"},
                           {"constants", json::array({json::array({5, 0, 0, 1.0})})}}),
      InputError);
  CHECK_THROWS_AS(loadCustom("/nonexistent/path.json"), InputError);
  CHECK_THROWS_AS(loadCustomFromString("{ not json"), InputError);
}

TEST_CASE("vector and matrix serialization shapes") {
  Vec v(3);
  v << 1.0, 2.0, 3.0;
  json jv = vecToJson(v);
  REQUIRE(jv.is_array());
  CHECK(jv.size() == 3);
  CHECK(jv[2].get<double>() == 3.0);

  Mat m(2, 3);
  m << 1, 2, 3, 4, 5, 6;
  json jm = matToJson(m);
  REQUIRE(jm.is_array());
  REQUIRE(jm.size() == 2);
  CHECK(jm[1].size() == 3);
  CHECK(jm[1][2].get<double>() == 6.0);
}

TEST_CASE("report serializers carry their key fields") {
  CatalogEntry h = buildHermitian(2, HermitianField::complex);
  DualElement xi{2.0 * h.canonicalFrame[0].coords +
                 1.0 * h.canonicalFrame[1].coords};

  json jm = toJson(metricAt(h, xi));
  CHECK(jm["regularPoint"].get<bool>());
  CHECK(jm["orbitDim"].get<int>() == 4);
  CHECK(jm["variant"].get<std::string>() == "normalized");
  REQUIRE(jm["blockCoefficients"].is_array());
  bool sawOffDiag = false;
  for (const auto& b : jm["blockCoefficients"]) {
    REQUIRE(b.contains("a"));
    REQUIRE(b.contains("i"));
    REQUIRE(b.contains("value"));
    if (b["a"] != b["i"]) {
      sawOffDiag = true;
      CHECK(b["value"].get<double>() ==
            doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    }
  }
  CHECK(sawOffDiag);

  json jo = toJson(classifyOrbit(h, xi));
  CHECK(jo["positive"].get<int>() == 2);
  CHECK(jo["negative"].get<int>() == 0);
  CHECK(jo["regularOrbit"].get<bool>());
  CHECK(jo["coneStatus"].get<std::string>() == "interior");

  json ji = toJson(involutivityTest(h.spec, xi));
  CHECK(ji["involutive"].get<bool>());
  CHECK(ji["distRank"].get<int>() == 4);

  json ja = toJson(checkAxioms(h.spec));
  CHECK(ja["jordanIdentity"].get<bool>());
  CHECK(ja["residuals"]["jordan"].get<double>() < 1e-9);

  json js = toJson(spectralDecompose(h, Element{xi.coords}));
  CHECK(js["coefficients"][0].get<double>() == doctest::Approx(2.0));
  CHECK(js["positive"].get<int>() == 2);
}

TEST_CASE("fixture files parse to entries with validated claims") {
  CatalogEntry nil = loadCustom(std::string(kDataDir) + "/nilpotent.json");
  CHECK(nil.spec.basisLabels()[0] == "u");
  CHECK(nil.spec.tolerance() == doctest::Approx(1e-9));

  const std::string good = R"({
    "dim": 2, "kind": "jordan",
    "constants": [[0,0,0,1.0],[0,1,1,1.0],[1,0,1,1.0],[1,1,1,0.0]],
    "unit": [1.0, 0.0]
  })";
  CatalogEntry e = loadCustomFromString(good);
  REQUIRE(e.unit.has_value());
  CHECK(e.unit->coords(0) == doctest::Approx(1.0).epsilon(1e-9));

  const std::string badUnit = R"({
    "dim": 2, "kind": "jordan",
    "constants": [[0,0,0,1.0],[0,1,1,1.0],[1,0,1,1.0]],
    "unit": [0.0, 1.0]
  })";
  CHECK_THROWS_AS(loadCustomFromString(badUnit), InputError);

  const std::string badRank = R"({
    "dim": 3, "kind": "jordan",
    "constants": [[0,0,0,1.0],[1,1,1,1.0],[2,2,2,1.0]],
    "unit": [1.0, 1.0, 1.0],
    "rank": 2
  })";
  CHECK_THROWS_AS(loadCustomFromString(badRank), InputError);

  const std::string goodRank = R"({
    "dim": 3, "kind": "jordan",
    "constants": [[0,0,0,1.0],[1,1,1,1.0],[2,2,2,1.0]],
    "unit": [1.0, 1.0, 1.0],
    "rank": 3,
    "frame": [[1.0,0,0],[0,1.0,0],[0,0,1.0]]
  })";
  CatalogEntry r3 = loadCustomFromString(goodRank);
  CHECK(r3.rank == 3);
  CHECK(r3.canonicalFrame.size() == 3);
}
