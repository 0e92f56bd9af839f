#include <doctest.h>

#include <cmath>

#include "jorbit/builders.hpp"
#include "jorbit/dual_geometry.hpp"
#include "jorbit/numerics.hpp"

using namespace jorbit;

TEST_CASE("bivector symmetry follows the product symmetry") {
  CatalogEntry h = buildHermitian(2, HermitianField::real);
  RngStream rng(31, 0);
  DualElement xi{rng.gaussianVec(3)};
  Mat r = bivectorAt(h.spec, xi).matrix;
  CHECK((r - r.transpose()).cwiseAbs().maxCoeff() < 1e-12);

  CatalogEntry so3 = buildLie("so3");
  DualElement eta{rng.gaussianVec(3)};
  Mat b = bivectorAt(so3.spec, eta).matrix;
  CHECK((b + b.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("componentwise gradient field") {
  CatalogEntry e = buildRn(4);
  DualElement xi{Vec(4)};
  xi.coords << 0.4, 1.0, 2.5, 0.1;
  Vec df(4);
  df << 1.0, -2.0, 0.5, 3.0;
  Vec dir = dualVectorField(e.spec, xi, df);
  CHECK(dir.isApprox(Vec(xi.coords.array() * df.array()), 1e-12));

  // contraction against a coordinate covector picks out one generator
  Vec theta = Vec::Zero(4);
  theta(2) = 1.0;
  Vec gen = sharpAt(e.spec, xi, theta);
  CHECK(gen.isApprox(Vec(xi.coords.array() *
                         Vec(theta).array()),
                     1e-12));
}

TEST_CASE("action generators of the symmetrized matrix product") {
  CatalogEntry h = buildHermitian(2, HermitianField::real);
  RngStream rng(32, 0);
  DualElement xi{rng.gaussianVec(3)};
  DistributionBasis dist = distributionBasis(h.spec, xi);
  CHECK(dist.generators.cols() == 3);
  // column a equals l_{e_a}^T xi
  for (int a = 0; a < 3; ++a) {
    Vec ea = Vec::Zero(3);
    ea(a) = 1.0;
    Vec expected = leftMultiplicationMatrix(h.spec, ea).transpose() * xi.coords;
    CHECK((dist.generators.col(a) - expected).norm() < 1e-12);
  }
}

TEST_CASE("distribution rank drops at non-regular points") {
  CatalogEntry h = buildHermitian(2, HermitianField::real);
  const Vec c0 = h.canonicalFrame[0].coords;
  const Vec c1 = h.canonicalFrame[1].coords;

  DualElement regular{2.0 * c0 + 1.0 * c1};
  DualElement cancelling{c0 - c1};

  CHECK(distributionBasis(h.spec, regular).rank == 3);
  CHECK(distributionBasis(h.spec, cancelling).rank == 2);

  InvolutivityVerdict good = involutivityTest(h.spec, regular);
  CHECK(good.distRank == 3);
  CHECK(good.involutive);
  CHECK(good.stabilizerDim == 0);
  REQUIRE(good.derivationsInsideImage.has_value());
  CHECK(*good.derivationsInsideImage);

  InvolutivityVerdict bad = involutivityTest(h.spec, cancelling);
  CHECK(bad.distRank == 2);
  CHECK(bad.bracketRank == 3);
  CHECK_FALSE(bad.involutive);
  REQUIRE(bad.derivationsInsideImage.has_value());
  CHECK_FALSE(*bad.derivationsInsideImage);
}

TEST_CASE("structure algebra closes and has the right size") {
  CatalogEntry h = buildHermitian(2, HermitianField::real);
  StructureAlgebraBasis str = structureAlgebra(h.spec);
  // span{l_x} has dim 3; one inner derivation closes it
  CHECK(str.operators.size() == 4);
  CHECK(str.closureResidual < 1e-9);

  CHECK(innerDerivationBasis(h.spec).size() == 1);
  CHECK(innerDerivationBasis(buildRn(4).spec).empty());
  CHECK(innerDerivationBasis(
            buildHermitian(3, HermitianField::complex).spec)
            .size() == 8);
}

TEST_CASE("extended structure algebra is a lie algebra acting correctly") {
  CatalogEntry h = buildHermitian(2, HermitianField::real);
  ExtendedStructureAlgebra ext = extendedStructureAlgebra(h.spec);
  CHECK(ext.innerDerivations.size() == 1);
  CHECK(ext.bracketTable.dim() == 4);
  CHECK(ext.bracketTable.kind() == AlgebraKind::lie);
  CHECK(checkAxioms(ext.bracketTable).satisfiesKind(AlgebraKind::lie));
  CHECK(ext.transvective);
  CHECK(ext.closureResidual < 1e-9);
  CHECK(ext.homomorphismResidual < 1e-9);
  CHECK(ext.standardRep.size() == 4);
}

TEST_CASE("canonical form values and flags") {
  CatalogEntry h = buildHermitian(2, HermitianField::complex);
  const Vec c0 = h.canonicalFrame[0].coords;
  const Vec c1 = h.canonicalFrame[1].coords;
  DualElement xi{2.0 * c0 + 1.0 * c1};
  RngStream rng(33, 0);
  Element a{rng.gaussianVec(4)}, b{rng.gaussianVec(4)};

  CanonicalFormValue v = canonicalForm(h.spec, xi, a, b);
  const double direct =
      xi.coords.dot(product(h.spec, a, b).coords);
  CHECK(v.value == doctest::Approx(direct).epsilon(1e-9));
  CHECK_FALSE(v.ambiguousRepresentatives);
  CHECK(canonicalForm(h.spec, xi, b, a).value ==
        doctest::Approx(v.value).epsilon(1e-9));

  CatalogEntry so3 = buildLie("so3");
  DualElement eta{Vec::Zero(3)};
  eta.coords(2) = 1.0;
  Element p{Vec::Zero(3)}, q{Vec::Zero(3)};
  p.coords(0) = 1.0;
  q.coords(1) = 1.0;
  CanonicalFormValue w = canonicalForm(so3.spec, eta, p, q);
  CHECK(w.value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(canonicalForm(so3.spec, eta, q, p).value ==
        doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(w.ambiguousRepresentatives);  // the stabilizer axis is nontrivial
}

TEST_CASE("rotation algebra orbits are involutive spheres") {
  CatalogEntry so3 = buildLie("so3");
  DualElement eta{Vec::Zero(3)};
  eta.coords(2) = 1.0;
  Mat b = bivectorAt(so3.spec, eta).matrix;
  CHECK(rankWithTolerance(b, 1e-9) == 2);

  InvolutivityVerdict v = involutivityTest(so3.spec, eta);
  CHECK(v.distRank == 2);
  CHECK(v.involutive);
  CHECK(v.stabilizerDim == 1);
  CHECK_FALSE(v.derivationsInsideImage.has_value());
}
