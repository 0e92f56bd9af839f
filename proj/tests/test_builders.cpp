#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "jorbit/builders.hpp"
#include "jorbit/spectral.hpp"

using namespace jorbit;

TEST_CASE("hermitian dimension table") {
  CHECK(hermitianDim(2, HermitianField::real) == 3);
  CHECK(hermitianDim(3, HermitianField::real) == 6);
  CHECK(hermitianDim(5, HermitianField::real) == 15);
  CHECK(hermitianDim(2, HermitianField::complex) == 4);
  CHECK(hermitianDim(3, HermitianField::complex) == 9);
  CHECK(hermitianDim(2, HermitianField::quaternion) == 6);
  CHECK(hermitianDim(3, HermitianField::quaternion) == 15);
}

TEST_CASE("componentwise algebra entry") {
  CatalogEntry e = buildRn(5);
  CHECK(e.spec.dim() == 5);
  CHECK(e.rank == 5);
  CHECK(e.name == "rn:5");
  REQUIRE(e.unit.has_value());
  CHECK(e.unit->coords.isApprox(Vec::Ones(5)));
  REQUIRE(e.canonicalFrame.size() == 5);
  Vec sum = Vec::Zero(5);
  for (const auto& c : e.canonicalFrame) sum += c.coords;
  CHECK(sum.isApprox(Vec::Ones(5)));
  CHECK(e.tauMatrix.isApprox(Mat::Identity(5, 5)));
  CHECK(e.hasNormalizedForm);
  REQUIRE(e.traceRatio.has_value());
  CHECK(*e.traceRatio == doctest::Approx(1.0));
  CHECK(e.defaultVariant == TraceVariant::canonical);
}

TEST_CASE("hermitian entries carry the right trace scale") {
  auto ratioOf = [](const CatalogEntry& e) {
    REQUIRE(e.traceRatio.has_value());
    const int d = e.spec.dim();
    CHECK(e.tauMatrix.isApprox(*e.traceRatio * Mat::Identity(d, d), 1e-9));
    return *e.traceRatio;
  };
  CHECK(ratioOf(buildHermitian(2, HermitianField::real)) ==
        doctest::Approx(1.5));
  CHECK(ratioOf(buildHermitian(3, HermitianField::real)) ==
        doctest::Approx(2.0));
  CHECK(ratioOf(buildHermitian(2, HermitianField::complex)) ==
        doctest::Approx(2.0));
  CHECK(ratioOf(buildHermitian(3, HermitianField::complex)) ==
        doctest::Approx(3.0));
  CHECK(ratioOf(buildHermitian(2, HermitianField::quaternion)) ==
        doctest::Approx(3.0));
  CHECK(ratioOf(buildSpin(4)) == doctest::Approx(5.0));
  CHECK(ratioOf(buildSpin(10)) == doctest::Approx(11.0));

  CatalogEntry h = buildHermitian(2, HermitianField::complex);
  CHECK(h.rank == 2);
  CHECK(h.defaultVariant == TraceVariant::normalized);
  REQUIRE(h.unit.has_value());
  FrameCheck fc = jordanFrameCheck(h.spec, JordanFrame{h.canonicalFrame},
                                   &*h.unit);
  CHECK(fc.pass);
}

TEST_CASE("spin factor product rule") {
  CatalogEntry s = buildSpin(3);
  CHECK(s.spec.dim() == 4);
  CHECK(s.rank == 2);
  REQUIRE(s.unit.has_value());
  Vec e0 = Vec::Zero(4);
  e0(0) = 1.0;
  CHECK(s.unit->coords.isApprox(e0));

  // (t, x)(s, y) = (t s + <x, y>, t y + s x)
  Element v{Vec::Zero(4)};
  v.coords(1) = 1.0;
  Element sq = product(s.spec, v, v);
  CHECK(sq.coords.isApprox(e0, 1e-12));

  Element a{Vec(4)}, b{Vec(4)};
  a.coords << 2.0, 0.5, -1.0, 0.0;
  b.coords << -1.0, 1.5, 2.0, 0.5;
  Element ab = product(s.spec, a, b);
  CHECK(ab.coords(0) == doctest::Approx(2.0 * -1.0 + 0.5 * 1.5 - 2.0));
  CHECK(ab.coords(1) == doctest::Approx(2.0 * 1.5 + -1.0 * 0.5));
  CHECK(ab.coords(2) == doctest::Approx(2.0 * 2.0 + -1.0 * -1.0));
  CHECK(ab.coords(3) == doctest::Approx(2.0 * 0.5));

  FrameCheck fc = jordanFrameCheck(s.spec, JordanFrame{s.canonicalFrame},
                                   &*s.unit);
  CHECK(fc.pass);
  CHECK(jordanFrameCheck(buildSpin(5).spec,
                         JordanFrame{buildSpin(5).canonicalFrame}, nullptr)
            .pass);
}

TEST_CASE("rank two spectral values on the spin factor") {
  CatalogEntry s1 = buildSpin(1);
  CHECK(s1.spec.dim() == 2);
  Element x{Vec(2)};
  x.coords << 1.0, 0.3;
  SpectralData sd = spectralDecompose(s1, x);
  CHECK(sd.coefficients(0) == doctest::Approx(1.3).epsilon(1e-10));
  CHECK(sd.coefficients(1) == doctest::Approx(0.7).epsilon(1e-10));

  CatalogEntry s4 = buildSpin(4);
  Element y{Vec::Zero(5)};
  y.coords << 0.4, 0.3, 0.0, -0.4, 0.0;  // |v| = 0.5
  SpectralData sy = spectralDecompose(s4, y);
  CHECK(sy.coefficients(0) == doctest::Approx(0.9).epsilon(1e-10));
  CHECK(sy.coefficients(1) == doctest::Approx(-0.1).epsilon(1e-10));
}

TEST_CASE("direct sums keep factor structure") {
  CatalogEntry e = fromName("herm:2:real+rn:2");
  CHECK(e.spec.dim() == 5);
  CHECK(e.rank == 4);
  REQUIRE(e.factors.size() == 2);
  CHECK(e.factorOffsets == std::vector<int>{0, 3});
  CHECK(e.hasNormalizedForm);
  CHECK_FALSE(e.traceRatio.has_value());
  REQUIRE(e.unit.has_value());

  // cross products vanish
  Element a{Vec::Zero(5)}, b{Vec::Zero(5)};
  a.coords(0) = 1.0;
  b.coords(4) = 1.0;
  CHECK(product(e.spec, a, b).coords.norm() == doctest::Approx(0.0));

  FrameCheck fc = jordanFrameCheck(e.spec, JordanFrame{e.canonicalFrame},
                                   &*e.unit);
  CHECK(fc.pass);
}

TEST_CASE("matrix trace forms of the rotation and special linear algebras") {
  CatalogEntry so3 = buildLie("so3");
  CHECK(so3.spec.dim() == 3);
  CHECK(so3.spec.kind() == AlgebraKind::lie);

  auto killingSignature = [](const AlgebraSpec& alg) {
    const int d = alg.dim();
    Mat k(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        k(i, j) = (alg.basisLeftMult(i) * alg.basisLeftMult(j)).trace();
    Eigen::SelfAdjointEigenSolver<Mat> es(k);
    int pos = 0, neg = 0;
    for (int i = 0; i < d; ++i) {
      if (es.eigenvalues()(i) > 1e-9) ++pos;
      if (es.eigenvalues()(i) < -1e-9) ++neg;
    }
    return std::pair<int, int>{pos, neg};
  };
  CHECK(killingSignature(so3.spec) == std::pair<int, int>{0, 3});
  CHECK(killingSignature(buildLie("sl2r").spec) == std::pair<int, int>{2, 1});

  CatalogEntry u2 = buildLie("un:2");
  CHECK(u2.spec.dim() == 4);
  CHECK(checkAxioms(u2.spec).satisfiesKind(AlgebraKind::lie));
}

TEST_CASE("catalog names and failure modes") {
  CHECK(fromName("rn:3").name == "rn:3");
  CHECK(fromName("spin:4").name == "spin:4");
  CHECK(fromName("herm:3:complex").spec.dim() == 9);
  CHECK_THROWS_AS(fromName("rn:0"), InputError);
  CHECK_THROWS_AS(fromName("herm:2:octonion"), InputError);
  CHECK_THROWS_AS(fromName("spin:0"), InputError);
  CHECK_THROWS_AS(fromName("un:0"), InputError);
  CHECK_THROWS_AS(fromName("definitely-not-a-file.json"), InputError);

  CatalogEntry w = wrapSpec(buildRn(3).spec, "wrapped");
  CHECK(w.rank == 3);
  REQUIRE(w.unit.has_value());
  CHECK(w.unit->coords.isApprox(Vec::Ones(3)));
}
