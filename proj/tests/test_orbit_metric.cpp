#include <doctest.h>

#include <cmath>
#include <string>

#include "jorbit/builders.hpp"
#include "jorbit/numerics.hpp"
#include "jorbit/orbit_metric.hpp"

using namespace jorbit;

namespace {

DualElement dualFromFrame(const CatalogEntry& e, std::initializer_list<double> c) {
  Vec x = Vec::Zero(e.spec.dim());
  int i = 0;
  for (double v : c) x += v * e.canonicalFrame[i++].coords;
  return flatMap(e, Element{x}, e.defaultVariant);
}

}  // namespace

TEST_CASE("orbit classification on the componentwise algebra") {
  CatalogEntry e = buildRn(3);
  MetricOptions opts;

  DualElement inside{Vec(3)};
  inside.coords << 1.0, 2.0, 3.0;
  OrbitClass in = classifyOrbit(e, inside, opts);
  CHECK(in.positive == 3);
  CHECK(in.negative == 0);
  CHECK(in.regularOrbit);
  CHECK(in.coneStatus == ConeStatus::interior);
  CHECK(in.coneSign == 1);

  DualElement mixed{Vec(3)};
  mixed.coords << 1.0, -1.0, 0.0;
  OrbitClass mx = classifyOrbit(e, mixed, opts);
  CHECK(mx.positive == 1);
  CHECK(mx.negative == 1);
  CHECK_FALSE(mx.regularOrbit);
  CHECK(mx.coneStatus == ConeStatus::exterior);
  CHECK(mx.coneSign == 0);

  DualElement negBoundary{Vec(3)};
  negBoundary.coords << -1.0, -2.0, 0.0;
  OrbitClass nb = classifyOrbit(e, negBoundary, opts);
  CHECK(nb.regularOrbit);
  CHECK(nb.coneStatus == ConeStatus::boundary);
  CHECK(nb.coneSign == -1);

  DualElement negInterior{Vec(3)};
  negInterior.coords << -1.0, -2.0, -3.0;
  CHECK(classifyOrbit(e, negInterior, opts).coneSign == -1);
  CHECK(classifyOrbit(e, negInterior, opts).coneStatus ==
        ConeStatus::interior);
}

TEST_CASE("mixed signs stay regular when the joint blocks are empty") {
  CatalogEntry e = buildRn(3);
  DualElement mixed{Vec(3)};
  mixed.coords << 1.0, -1.0, 0.0;
  CHECK(isRegularPoint(e, mixed));

  MetricReport m = metricAt(e, mixed);
  CHECK(m.orbitDim == 2);
  CHECK(m.metricPositive == 1);
  CHECK(m.metricNegative == 1);
  CHECK(m.gram(0, 0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(m.gram(1, 1) == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("cancelling coefficients on a nonempty block raise") {
  CatalogEntry h = buildHermitian(2, HermitianField::real);
  DualElement bad = dualFromFrame(h, {1.0, -1.0});
  CHECK_FALSE(isRegularPoint(h, bad));
  CHECK_THROWS_AS(metricAt(h, bad), NumericalError);
  try {
    metricAt(h, bad);
  } catch (const NumericalError& err) {
    CHECK(std::string(err.what()).find("cancel") != std::string::npos);
    CHECK(err.conditionEstimate > 1e6);
  }
}

TEST_CASE("tangent dimensions split into multiplication and derivation parts") {
  CatalogEntry h = buildHermitian(2, HermitianField::real);
  TangentDims atCancelling = tangentDims(h, Element{
      h.canonicalFrame[0].coords - h.canonicalFrame[1].coords});
  CHECK(atCancelling.dimLx == 2);
  CHECK(atCancelling.dimDer == 1);
  CHECK(atCancelling.dimOrbit == 3);

  TangentDims atRegular = tangentDims(h, Element{
      2.0 * h.canonicalFrame[0].coords + h.canonicalFrame[1].coords});
  CHECK(atRegular.dimLx == 3);
  CHECK(atRegular.dimOrbit == 3);

  TangentDims atIdempotent = tangentDims(h, Element{h.canonicalFrame[0].coords});
  CHECK(atIdempotent.dimLx == 2);
  CHECK(atIdempotent.dimOrbit == 2);
}

TEST_CASE("metric values do not depend on the trace variant") {
  CatalogEntry h = buildHermitian(2, HermitianField::complex);
  RngStream rng(41, 0);
  DualElement xi{2.3 * h.canonicalFrame[0].coords +
                 0.7 * h.canonicalFrame[1].coords};

  MetricOptions canon, norm;
  canon.variant = TraceVariant::canonical;
  norm.variant = TraceVariant::normalized;
  MetricReport mc = metricAt(h, xi, canon);
  MetricReport mn = metricAt(h, xi, norm);

  // the sharpened points differ by the fixed trace ratio, the values do not
  CHECK(mn.coefficients.isApprox(2.0 * mc.coefficients, 1e-9));
  CHECK(mc.orbitDim == mn.orbitDim);

  for (int t = 0; t < 3; ++t) {
    Vec v = rng.gaussianVec(4), w = rng.gaussianVec(4);
    CHECK(evaluateMetric(mc, v, w) ==
          doctest::Approx(evaluateMetric(mn, v, w)).epsilon(1e-8));
  }
}

TEST_CASE("block coefficients come from sums of paired eigenvalues") {
  CatalogEntry h = buildHermitian(2, HermitianField::complex);
  MetricReport m = metricAt(h, dualFromFrame(h, {3.0, 1.0}));
  CHECK(m.regularPoint);
  CHECK(m.blockCoefficients.at({0, 0}) == doctest::Approx(2.0 / 6.0));
  CHECK(m.blockCoefficients.at({0, 1}) == doctest::Approx(0.5));
  CHECK(m.blockCoefficients.at({1, 1}) == doctest::Approx(1.0));
  CHECK(m.orbitDim == 4);
  CHECK(m.metricPositive == 4);
  CHECK(m.metricNegative == 0);
  CHECK(m.crossCheckResidual < 1e-9);
  CHECK_FALSE(m.poleProximity);

  // diagonal gram in the block basis
  for (int p = 0; p < m.gram.rows(); ++p)
    for (int q = 0; q < m.gram.cols(); ++q)
      if (p != q) CHECK(std::abs(m.gram(p, q)) < 1e-12);
}

TEST_CASE("cross check residuals stay small away from poles") {
  for (const char* name :
       {"rn:5", "herm:2:complex", "spin:4", "herm:2:real+rn:2"}) {
    CatalogEntry e = fromName(name);
    RngStream rng(43, 7);
    for (int t = 0; t < 4; ++t) {
      Vec x = Vec::Zero(e.spec.dim());
      for (int k = 0; k < e.rank; ++k)
        x += (0.5 + rng.uniform(0.0, 2.0)) * e.canonicalFrame[k].coords;
      DualElement xi = flatMap(e, Element{x}, e.defaultVariant);
      MetricReport m = metricAt(e, xi);
      CHECK(m.crossCheckResidual < 1e-8);
      CHECK(m.regularPoint);
    }
  }
}

TEST_CASE("direct sum metrics factor blockwise") {
  CatalogEntry sum = fromName("herm:2:real+rn:2");
  CatalogEntry left = fromName("herm:2:real");
  CatalogEntry right = fromName("rn:2");

  Vec xl(3), xr(2);
  xl << 1.4, 0.6, 0.3;
  xr << 0.9, 2.2;
  Vec xs(5);
  xs << xl, xr;

  DualElement xiSum = flatMap(sum, Element{xs}, sum.defaultVariant);
  MetricReport ms = metricAt(sum, xiSum);

  MetricOptions factorOpts;
  factorOpts.variant = sum.defaultVariant;
  MetricReport ml = metricAt(
      left, flatMap(left, Element{xl}, sum.defaultVariant), factorOpts);
  MetricReport mr = metricAt(
      right, flatMap(right, Element{xr}, sum.defaultVariant), factorOpts);
  CHECK(ms.orbitDim == ml.orbitDim + mr.orbitDim);

  RngStream rng(44, 0);
  for (int t = 0; t < 3; ++t) {
    Vec vl = rng.gaussianVec(3), wl = rng.gaussianVec(3);
    Vec vs = Vec::Zero(5), ws = Vec::Zero(5);
    vs.head(3) = vl;
    ws.head(3) = wl;
    CHECK(evaluateMetric(ms, vs, ws) ==
          doctest::Approx(evaluateMetric(ml, vl, wl)).epsilon(1e-9));

    Vec vr = rng.gaussianVec(2), wr = rng.gaussianVec(2);
    vs.setZero();
    ws.setZero();
    vs.tail(2) = vr;
    ws.tail(2) = wr;
    CHECK(evaluateMetric(ms, vs, ws) ==
          doctest::Approx(evaluateMetric(mr, vr, wr)).epsilon(1e-9));
  }

  OrbitClass cls = classifyOrbit(sum, xiSum);
  REQUIRE(cls.perFactor.size() == 2);
  CHECK(cls.positive == cls.perFactor[0].positive + cls.perFactor[1].positive);
}

TEST_CASE("vectors outside the tangent span are rejected") {
  CatalogEntry e = buildRn(3);
  DualElement xi{Vec(3)};
  xi.coords << 1.0, 2.0, 0.0;
  MetricReport m = metricAt(e, xi);
  CHECK(m.orbitDim == 2);
  Vec out = Vec::Zero(3);
  out(2) = 1.0;
  CHECK_THROWS_AS(evaluateMetric(m, out, out), InputError);
}

TEST_CASE("randomized closed form checks pass with reduced trials") {
  CheckReport fr = fisherRaoCheck(5, 7, 10, 1e-9);
  CHECK(fr.pass);
  CHECK(fr.trials == 10);
  CHECK(fr.maxResidual < 1e-9);

  CheckReport bh = buresHelstromCheck(2, 7, 5, 1e-8);
  CHECK(bh.pass);

  SpinCheckReport sp = spinFactorCheck(4, 7, 8, 1e-9);
  CHECK(sp.pass);
  CHECK(sp.definitenessLawHolds);
}

TEST_CASE("curve speeds are constant with the frozen values") {
  const std::vector<double> ts{0.3, 0.7, 1.1, 2.0};
  auto speeds = incompletenessCurve(buildRn(3), 2, ts);
  for (double s : speeds) CHECK(s == doctest::Approx(8.0).epsilon(1e-9));

  auto hs = incompletenessCurve(buildHermitian(2, HermitianField::real), 1, ts);
  for (double s : hs) CHECK(s == doctest::Approx(6.0).epsilon(1e-9));

  auto ss = incompletenessCurve(buildSpin(4), 1, ts);
  for (double s : ss) CHECK(s == doctest::Approx(10.0).epsilon(1e-9));

  CHECK_THROWS_AS(incompletenessCurve(buildRn(3), 0, ts), InputError);
  CHECK_THROWS_AS(incompletenessCurve(buildRn(3), 4, ts), InputError);
}

TEST_CASE("transported points keep their signature") {
  CatalogEntry h = buildHermitian(2, HermitianField::complex);
  DualElement xi = dualFromFrame(h, {3.0, 1.0});
  SweepReport wide = signatureInvarianceSweep(h, xi, 5, 7, false);
  CHECK(wide.signatureConstant);
  CHECK(wide.basePositive == 2);
  CHECK(wide.baseNegative == 0);

  SweepReport aut = signatureInvarianceSweep(h, xi, 5, 7, true);
  CHECK(aut.signatureConstant);
  CHECK(aut.maxCoefficientDeviation < 1e-8);
  CHECK(aut.maxPullbackResidual < 1e-7);
}

TEST_CASE("gram entries blow up linearly at the pole") {
  CatalogEntry h = buildHermitian(2, HermitianField::complex);
  std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  auto rows = poleSweep(h, eps);
  REQUIRE(rows.size() == 5);
  const double ref = rows[0].eps * rows[0].maxGramEntry;
  for (const auto& row : rows) {
    CHECK(row.maxGramEntry > 0.0);
    CHECK(row.eps * row.maxGramEntry == doctest::Approx(ref).epsilon(0.05));
  }
  CHECK(rows[4].maxGramEntry > rows[0].maxGramEntry);
}
