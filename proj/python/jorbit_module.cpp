#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <utility>

#include "jorbit/builders.hpp"
#include "jorbit/dual_geometry.hpp"
#include "jorbit/orbit_metric.hpp"
#include "jorbit/spectral.hpp"

namespace py = pybind11;
using namespace jorbit;

namespace {

TraceVariant parseVariant(const CatalogEntry& entry,
                          const std::optional<std::string>& name) {
  if (!name) return entry.defaultVariant;
  if (*name == "canonical") return TraceVariant::canonical;
  if (*name == "normalized") return TraceVariant::normalized;
  throw InputError("unknown trace variant: " + *name);
}

void checkDim(const CatalogEntry& entry, const Vec& v, const char* what) {
  if (v.size() != entry.spec.dim())
    throw InputError(std::string(what) + " has size " +
                     std::to_string(v.size()) + ", expected " +
                     std::to_string(entry.spec.dim()));
}

struct PyAlgebra {
  CatalogEntry entry;
};

py::dict axiomDict(const AxiomReport& ax) {
  py::dict d;
  d["commutative"] = ax.commutative;
  d["anticommutative"] = ax.anticommutative;
  d["jordan_identity"] = ax.jordanIdentity;
  d["jacobi"] = ax.jacobi;
  d["associative"] = ax.associative;
  d["has_unit"] = ax.unit.has_value();
  if (ax.unit) d["unit"] = Vec(ax.unit->coords);
  d["jordan_residual"] = ax.jordanResidual;
  d["jacobi_residual"] = ax.jacobiResidual;
  return d;
}

py::dict orbitDict(const OrbitClass& c) {
  py::dict d;
  d["positive"] = c.positive;
  d["negative"] = c.negative;
  d["rank"] = c.rank;
  d["regular_orbit"] = c.regularOrbit;
  d["cone_status"] = coneStatusName(c.coneStatus);
  d["cone_sign"] = c.coneSign;
  if (!c.perFactor.empty()) {
    py::list parts;
    for (const auto& f : c.perFactor) parts.append(orbitDict(f));
    d["per_factor"] = parts;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(jorbit_py, m) {
  m.doc() = "Structure-group orbit geometry of real algebras.";

  py::register_exception<NumericalError>(m, "NumericalError",
                                         PyExc_ArithmeticError);

  py::class_<PyAlgebra>(m, "Algebra")
      .def_property_readonly(
          "name", [](const PyAlgebra& a) { return a.entry.name; })
      .def_property_readonly(
          "dim", [](const PyAlgebra& a) { return a.entry.spec.dim(); })
      .def_property_readonly(
          "kind",
          [](const PyAlgebra& a) { return kindName(a.entry.spec.kind()); })
      .def_property_readonly(
          "rank", [](const PyAlgebra& a) { return a.entry.rank; })
      .def_property_readonly("unit",
                             [](const PyAlgebra& a) -> py::object {
                               if (!a.entry.unit) return py::none();
                               return py::cast(Vec(a.entry.unit->coords));
                             })
      .def_property_readonly("frame",
                             [](const PyAlgebra& a) {
                               py::list out;
                               for (const auto& c : a.entry.canonicalFrame)
                                 out.append(Vec(c.coords));
                               return out;
                             })
      .def_property_readonly(
          "trace_matrix",
          [](const PyAlgebra& a) { return Mat(a.entry.tauMatrix); })
      .def("product",
           [](const PyAlgebra& a, const Vec& x, const Vec& y) {
             checkDim(a.entry, x, "x");
             checkDim(a.entry, y, "y");
             return Vec(product(a.entry.spec, Element{x}, Element{y}).coords);
           })
      .def("left_mult",
           [](const PyAlgebra& a, const Vec& x) {
             checkDim(a.entry, x, "x");
             return leftMultiplicationMatrix(a.entry.spec, x);
           })
      .def("axioms",
           [](const PyAlgebra& a) { return axiomDict(checkAxioms(a.entry.spec)); })
      .def(
          "trace_form",
          [](const PyAlgebra& a, const std::optional<std::string>& variant) {
            TraceForm tf = traceForm(a.entry, parseVariant(a.entry, variant));
            py::dict d;
            d["variant"] = traceVariantName(tf.variant);
            d["matrix"] = Mat(tf.matrix);
            d["positive"] = tf.positive;
            d["negative"] = tf.negative;
            d["zero"] = tf.zero;
            d["associativity_residual"] = tf.associativityResidual;
            if (tf.ratioToNormalized)
              d["ratio_to_normalized"] = *tf.ratioToNormalized;
            return d;
          },
          py::arg("variant") = py::none())
      .def("spectral",
           [](const PyAlgebra& a, const Vec& x) {
             checkDim(a.entry, x, "x");
             SpectralData sd = spectralDecompose(a.entry, Element{x});
             py::dict d;
             d["coefficients"] = Vec(sd.coefficients);
             py::list frame;
             for (const auto& c : sd.frame.idempotents)
               frame.append(Vec(c.coords));
             d["frame"] = frame;
             d["positive"] = sd.positive;
             d["negative"] = sd.negative;
             d["residual"] = sd.reconstructionResidual;
             return d;
           })
      .def("minimal_polynomial",
           [](const PyAlgebra& a, const Vec& x) {
             checkDim(a.entry, x, "x");
             return minimalPolynomialCoeffs(a.entry, Element{x});
           })
      .def("peirce_dims",
           [](const PyAlgebra& a) {
             if (a.entry.canonicalFrame.empty())
               throw InputError("no canonical frame on " + a.entry.name);
             PeirceDecomposition pd = peirceDecompose(
                 a.entry.spec, JordanFrame{a.entry.canonicalFrame},
                 &a.entry.tauMatrix);
             py::dict d;
             for (const auto& [key, block] : pd.blocks)
               d[py::make_tuple(key.first, key.second)] =
                   static_cast<int>(block.cols());
             return d;
           })
      .def(
          "flat",
          [](const PyAlgebra& a, const Vec& x,
             const std::optional<std::string>& variant) {
            checkDim(a.entry, x, "x");
            return Vec(
                flatMap(a.entry, Element{x}, parseVariant(a.entry, variant))
                    .coords);
          },
          py::arg("x"), py::arg("variant") = py::none())
      .def(
          "sharp",
          [](const PyAlgebra& a, const Vec& xi,
             const std::optional<std::string>& variant) {
            checkDim(a.entry, xi, "xi");
            return Vec(sharpMap(a.entry, DualElement{xi},
                                parseVariant(a.entry, variant))
                           .coords);
          },
          py::arg("xi"), py::arg("variant") = py::none())
      .def("classify",
           [](const PyAlgebra& a, const Vec& xi) {
             checkDim(a.entry, xi, "xi");
             return orbitDict(classifyOrbit(a.entry, DualElement{xi}));
           })
      .def("is_regular",
           [](const PyAlgebra& a, const Vec& xi) {
             checkDim(a.entry, xi, "xi");
             return isRegularPoint(a.entry, DualElement{xi});
           })
      .def("metric",
           [](const PyAlgebra& a, const Vec& xi) {
             checkDim(a.entry, xi, "xi");
             MetricReport r = metricAt(a.entry, DualElement{xi});
             py::dict d;
             d["variant"] = traceVariantName(r.variant);
             d["regular_point"] = r.regularPoint;
             d["coefficients"] = Vec(r.coefficients);
             d["tangent_basis"] = Mat(r.tangentBasis);
             py::list cols;
             for (const auto& [x, y] : r.blockOfColumn)
               cols.append(py::make_tuple(x, y));
             d["block_of_column"] = cols;
             d["gram_diagonal"] = Vec(r.gram.diagonal());
             py::dict blocks;
             for (const auto& [key, g] : r.blockCoefficients)
               blocks[py::make_tuple(key.first, key.second)] = g;
             d["block_coefficients"] = blocks;
             d["positive"] = r.metricPositive;
             d["negative"] = r.metricNegative;
             d["orbit_dim"] = r.orbitDim;
             d["cross_check_residual"] = r.crossCheckResidual;
             d["pole_proximity"] = r.poleProximity;
             return d;
           })
      .def("metric_value",
           [](const PyAlgebra& a, const Vec& xi, const Vec& v, const Vec& w) {
             checkDim(a.entry, xi, "xi");
             checkDim(a.entry, v, "v");
             checkDim(a.entry, w, "w");
             MetricReport r = metricAt(a.entry, DualElement{xi});
             return evaluateMetric(r, v, w);
           })
      .def("involutive",
           [](const PyAlgebra& a, const Vec& xi) {
             checkDim(a.entry, xi, "xi");
             InvolutivityVerdict v =
                 involutivityTest(a.entry.spec, DualElement{xi});
             py::dict d;
             d["dist_rank"] = v.distRank;
             d["bracket_rank"] = v.bracketRank;
             d["involutive"] = v.involutive;
             d["stabilizer_dim"] = v.stabilizerDim;
             if (v.derivationsInsideImage)
               d["derivations_inside_image"] = *v.derivationsInsideImage;
             return d;
           })
      .def("bivector",
           [](const PyAlgebra& a, const Vec& xi) {
             checkDim(a.entry, xi, "xi");
             return Mat(bivectorAt(a.entry.spec, DualElement{xi}).matrix);
           })
      .def("natural_gradient",
           [](const PyAlgebra& a, const Vec& xi, const Vec& df) {
             checkDim(a.entry, xi, "xi");
             checkDim(a.entry, df, "df");
             return Vec(dualVectorField(a.entry.spec, DualElement{xi}, df));
           })
      .def("__repr__", [](const PyAlgebra& a) {
        return "<Algebra " + a.entry.name + " dim=" +
               std::to_string(a.entry.spec.dim()) + ">";
      });

  m.def(
      "build", [](const std::string& name) { return PyAlgebra{fromName(name)}; },
      py::arg("name"),
      "Catalog lookup: rn:N, herm:N:FIELD, spin:N, so3, sl2r, un:N, sums "
      "with '+', or a JSON file path.");
  m.def(
      "load", [](const std::string& path) { return PyAlgebra{loadCustom(path)}; },
      py::arg("path"), "Load an algebra from a JSON structure-constant file.");
  m.def(
      "load_string",
      [](const std::string& text) {
        return PyAlgebra{loadCustomFromString(text)};
      },
      py::arg("text"));
}
