#include "jorbit/builders.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "jorbit/numerics.hpp"
#include "jorbit/spectral.hpp"

namespace jorbit {

namespace {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using namespace std::complex_literals;

Mat canonicalTraceMatrix(const AlgebraSpec& alg) {
  return traceForm(alg).matrix;
}

std::vector<Mat> lmatsFromProducts(
    int d, const std::function<Vec(int, int)>& productOf) {
  std::vector<Mat> lmats(d, Mat::Zero(d, d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) lmats[i].col(j) = productOf(i, j);
  return lmats;
}

int parseCatalogInt(const std::string& text, const std::string& name) {
  try {
    size_t used = 0;
    int v = std::stoi(text, &used);
    if (used != text.size()) throw InputError("bad catalog name: " + name);
    return v;
  } catch (const InputError&) {
    throw;
  } catch (const std::exception&) {
    throw InputError("bad catalog name: " + name);
  }
}

}  // namespace

std::string traceVariantName(TraceVariant v) {
  return v == TraceVariant::canonical ? "canonical" : "normalized";
}

int hermitianDim(int n, HermitianField field) {
  switch (field) {
    case HermitianField::real: return n * (n + 1) / 2;
    case HermitianField::complex: return n * n;
    case HermitianField::quaternion: return n * (2 * n - 1);
  }
  return 0;
}

CatalogEntry buildRn(int n) {
  if (n < 1) throw InputError("rn: n must be >= 1");
  std::vector<Mat> lmats(n, Mat::Zero(n, n));
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) {
    lmats[i](i, i) = 1.0;
    labels.push_back("e" + std::to_string(i + 1));
  }

  CatalogEntry e;
  e.spec = AlgebraSpec::create(AlgebraKind::jordan, labels, lmats, 1e-9, false);
  e.name = "rn:" + std::to_string(n);
  e.notes = "componentwise product on R^n";
  e.rank = n;
  e.unit = Element{Vec::Ones(n)};
  for (int i = 0; i < n; ++i) e.canonicalFrame.push_back(Element{Vec::Unit(n, i)});
  e.tauMatrix = Mat::Identity(n, n);
  e.hasNormalizedForm = true;
  e.traceRatio = 1.0;
  e.defaultVariant = TraceVariant::canonical;
  e.factorOffsets = {0};
  e.fastRoute = [n](const Vec& x) {
    RawSpectral out;
    out.coefficients = x;
    for (int i = 0; i < n; ++i) out.frame.push_back(Vec::Unit(n, i));
    return out;
  };
  return e;
}

namespace {

std::vector<CMat> hermitianBasis(int n, HermitianField field,
                                 std::vector<std::string>* labels) {
  const int t = field == HermitianField::quaternion ? 2 * n : n;
  const double isq2 = 1.0 / std::sqrt(2.0);
  std::vector<CMat> basis;

  auto unitEntry = [&](int a, int i, int part) {
    // part: 0 -> 1, 1 -> i, 2 -> j, 3 -> k.  Quaternionic matrices A + B j
    // are embedded as [[A, B], [-conj(B), conj(A)]]; for the other fields
    // only the top-left block is used.
    CMat m = CMat::Zero(t, t);
    auto put = [&](int r, int c, std::complex<double> v) {
      m(r, c) += v;
      if (field == HermitianField::quaternion) m(n + r, n + c) += std::conj(v);
    };
    auto putJ = [&](int r, int c, std::complex<double> v) {
      m(r, n + c) += v;
      m(n + r, c) += -std::conj(v);
    };
    switch (part) {
      case 0: put(a, i, isq2); put(i, a, isq2); break;
      case 1: put(a, i, 1i * isq2); put(i, a, -1i * isq2); break;
      case 2: putJ(a, i, isq2); putJ(i, a, -isq2); break;
      case 3: putJ(a, i, 1i * isq2); putJ(i, a, -1i * isq2); break;
    }
    return m;
  };

  for (int a = 0; a < n; ++a) {
    CMat m = CMat::Zero(t, t);
    m(a, a) = 1.0;
    if (field == HermitianField::quaternion) m(n + a, n + a) = 1.0;
    basis.push_back(m);
    if (labels) labels->push_back("E" + std::to_string(a + 1) + std::to_string(a + 1));
  }
  const int parts = field == HermitianField::real      ? 1
                    : field == HermitianField::complex ? 2
                                                       : 4;
  const char* tag = "SAJK";
  for (int a = 0; a < n; ++a)
    for (int i = a + 1; i < n; ++i)
      for (int p = 0; p < parts; ++p) {
        basis.push_back(unitEntry(a, i, p));
        if (labels)
          labels->push_back(std::string(1, tag[p]) + std::to_string(a + 1) +
                            std::to_string(i + 1));
      }
  return basis;
}

// Pairs the eigenvector v with J conj(v) and emits the rank-two complex
// projector that represents one quaternionic eigen-line.
CMat quaternionicProjector(const CVec& v, int n) {
  CVec w(v.size());
  w.head(n) = v.tail(n).conjugate();
  w.tail(n) = -v.head(n).conjugate();
  w -= v * v.dot(w);
  w.normalize();
  return v * v.adjoint() + w * w.adjoint();
}

}  // namespace

CatalogEntry buildHermitian(int n, HermitianField field) {
  if (n < 1) throw InputError("herm: n must be >= 1");
  std::vector<std::string> labels;
  auto basisPtr = std::make_shared<std::vector<CMat>>(
      hermitianBasis(n, field, &labels));
  const auto& basis = *basisPtr;
  const int d = static_cast<int>(basis.size());
  const double kappa = field == HermitianField::quaternion ? 0.5 : 1.0;

  auto inner = [&](const CMat& x, const CMat& y) {
    return kappa * (x * y).trace().real();
  };
  auto coordsOf = [&, d](const CMat& x) {
    Vec c(d);
    for (int g = 0; g < d; ++g) c(g) = inner(x, basis[g]);
    return c;
  };

  std::vector<Mat> lmats(d, Mat::Zero(d, d));
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      CMat p = 0.5 * (basis[i] * basis[j] + basis[j] * basis[i]);
      Vec c = coordsOf(p);
      lmats[i].col(j) = c;
      if (j != i) lmats[j].col(i) = c;
    }

  CatalogEntry e;
  e.spec = AlgebraSpec::create(AlgebraKind::jordan, labels, lmats, 1e-9, false);
  const char* fieldName = field == HermitianField::real      ? "real"
                          : field == HermitianField::complex ? "complex"
                                                             : "quaternion";
  e.name = "herm:" + std::to_string(n) + ":" + fieldName;
  e.notes = "self-adjoint matrices with the symmetrized product";
  e.rank = n;
  Vec u = Vec::Zero(d);
  u.head(n).setOnes();
  e.unit = Element{u};
  for (int a = 0; a < n; ++a) e.canonicalFrame.push_back(Element{Vec::Unit(d, a)});
  e.tauMatrix = canonicalTraceMatrix(e.spec);
  e.hasNormalizedForm = true;
  e.traceRatio = static_cast<double>(d) / n;
  e.defaultVariant = TraceVariant::normalized;
  e.factorOffsets = {0};

  e.fastRoute = [basisPtr, n, d, field, kappa](const Vec& x) -> RawSpectral {
    const auto& b = *basisPtr;
    const int t = field == HermitianField::quaternion ? 2 * n : n;
    CMat xm = CMat::Zero(t, t);
    for (int g = 0; g < d; ++g)
      if (x(g) != 0.0) xm += x(g) * b[g];
    auto coordsOf = [&](const CMat& m) {
      Vec c(d);
      for (int g = 0; g < d; ++g) c(g) = kappa * (m * b[g]).trace().real();
      return c;
    };

    RawSpectral out;
    out.coefficients.resize(n);
    if (field == HermitianField::real) {
      Eigen::SelfAdjointEigenSolver<Mat> es(xm.real());
      for (int a = 0; a < n; ++a) {
        out.coefficients(a) = es.eigenvalues()(a);
        Mat proj = es.eigenvectors().col(a) * es.eigenvectors().col(a).transpose();
        out.frame.push_back(coordsOf(proj.cast<std::complex<double>>()));
      }
    } else if (field == HermitianField::complex) {
      Eigen::SelfAdjointEigenSolver<CMat> es(xm);
      for (int a = 0; a < n; ++a) {
        out.coefficients(a) = es.eigenvalues()(a);
        CMat proj = es.eigenvectors().col(a) * es.eigenvectors().col(a).adjoint();
        out.frame.push_back(coordsOf(proj));
      }
    } else {
      // Doubled spectrum; peel quaternionic eigen-lines cluster by cluster.
      Eigen::SelfAdjointEigenSolver<CMat> es(xm);
      const Vec& ev = es.eigenvalues();
      const double gap = 1e-9 * std::max(1.0, std::abs(ev(t - 1)) + std::abs(ev(0)));
      int emitted = 0;
      int lo = 0;
      while (lo < t) {
        int hi = lo + 1;
        while (hi < t && ev(hi) - ev(hi - 1) <= gap) ++hi;
        CMat cols = es.eigenvectors().middleCols(lo, hi - lo);
        int lines = (hi - lo) / 2;
        if (lines * 2 != hi - lo)
          throw NumericalError("quaternionic spectrum failed to pair up");
        for (int k = 0; k < lines; ++k) {
          // first column still carrying weight after deflation
          int pick = 0;
          double best = 0.0;
          for (int c = 0; c < cols.cols(); ++c) {
            double nc = cols.col(c).norm();
            if (nc > best) { best = nc; pick = c; }
          }
          CVec v = cols.col(pick) / best;
          CMat proj = quaternionicProjector(v, n);
          cols -= proj * cols;
          out.coefficients(emitted) = ev(lo);
          out.frame.push_back(coordsOf(proj));
          ++emitted;
        }
        lo = hi;
      }
      if (emitted != n)
        throw NumericalError("quaternionic eigen-line count mismatch");
    }
    return out;
  };
  return e;
}

CatalogEntry buildSpin(int n) {
  if (n < 1) throw InputError("spin: n must be >= 1");
  const int d = n + 1;
  std::vector<Mat> lmats(d, Mat::Zero(d, d));
  lmats[0] = Mat::Identity(d, d);
  for (int i = 1; i < d; ++i) {
    lmats[i](i, 0) = 1.0;
    lmats[i](0, i) = 1.0;
  }
  std::vector<std::string> labels{"1"};
  for (int i = 1; i < d; ++i) labels.push_back("v" + std::to_string(i));

  CatalogEntry e;
  e.spec = AlgebraSpec::create(AlgebraKind::jordan, labels, lmats, 1e-9, false);
  e.name = "spin:" + std::to_string(n);
  e.notes = "spin factor: unit line plus an inner-product space";
  e.rank = 2;
  e.unit = Element{Vec::Unit(d, 0)};
  {
    Vec cp = Vec::Zero(d), cm = Vec::Zero(d);
    cp(0) = cm(0) = 0.5;
    cp(1) = 0.5;
    cm(1) = -0.5;
    e.canonicalFrame = {Element{cp}, Element{cm}};
  }
  e.tauMatrix = static_cast<double>(d) * Mat::Identity(d, d);
  e.hasNormalizedForm = true;
  e.traceRatio = static_cast<double>(d);
  e.defaultVariant = TraceVariant::canonical;
  e.factorOffsets = {0};
  e.fastRoute = [n, d](const Vec& x) {
    RawSpectral out;
    double t0 = x(0);
    Vec v = x.tail(n);
    double s = v.norm();
    Vec dir = s > 1e-14 * std::max(1.0, x.norm()) ? Vec(v / s)
                                                  : Vec(Vec::Unit(n, 0));
    Vec cp = Vec::Zero(d), cm = Vec::Zero(d);
    cp(0) = cm(0) = 0.5;
    cp.tail(n) = 0.5 * dir;
    cm.tail(n) = -0.5 * dir;
    out.coefficients.resize(2);
    out.coefficients << t0 + s, t0 - s;
    out.frame = {cp, cm};
    return out;
  };
  return e;
}

CatalogEntry buildDirectSum(const std::vector<CatalogEntry>& parts) {
  if (parts.empty()) throw InputError("direct sum needs at least one part");
  const AlgebraKind kind = parts[0].spec.kind();
  int d = 0;
  double tol = 0.0;
  for (const auto& p : parts) {
    if (p.spec.kind() != kind)
      throw InputError("direct sum parts must share one kind");
    d += p.spec.dim();
    tol = std::max(tol, p.spec.tolerance());
  }

  std::vector<Mat> lmats(d, Mat::Zero(d, d));
  std::vector<std::string> labels;
  CatalogEntry e;
  e.tauMatrix = Mat::Zero(d, d);
  int off = 0;
  int part = 0;
  bool allUnits = true, allFrames = true, allRoutes = true, allNormalized = true;
  bool allNormalizedDefault = true;
  for (const auto& p : parts) {
    const int pd = p.spec.dim();
    for (int i = 0; i < pd; ++i) {
      lmats[off + i].block(off, off, pd, pd) = p.spec.basisLeftMult(i);
      labels.push_back("f" + std::to_string(part) + "." +
                       p.spec.basisLabels()[i]);
    }
    if (p.tauMatrix.size() > 0)
      e.tauMatrix.block(off, off, pd, pd) = p.tauMatrix;
    e.factors.push_back(std::make_shared<const CatalogEntry>(p));
    e.factorOffsets.push_back(off);
    allUnits = allUnits && p.unit.has_value();
    allFrames = allFrames && !p.canonicalFrame.empty();
    allRoutes = allRoutes && static_cast<bool>(p.fastRoute);
    allNormalized = allNormalized && p.hasNormalizedForm;
    allNormalizedDefault =
        allNormalizedDefault && p.defaultVariant == TraceVariant::normalized;
    e.rank += p.rank;
    off += pd;
    ++part;
  }
  e.spec = AlgebraSpec::create(kind, labels, lmats, tol > 0 ? tol : 1e-9, false);

  std::string name;
  for (const auto& p : parts) name += (name.empty() ? "" : "+") + p.name;
  e.name = name;
  e.notes = "direct sum";
  e.hasNormalizedForm = allNormalized;
  e.defaultVariant = allNormalizedDefault ? TraceVariant::normalized
                                          : TraceVariant::canonical;
  e.traceRatio = parts[0].traceRatio;
  for (const auto& p : parts)
    if (!p.traceRatio || !e.traceRatio ||
        std::abs(*p.traceRatio - *e.traceRatio) > 1e-12)
      e.traceRatio.reset();

  if (allUnits) {
    Vec u = Vec::Zero(d);
    off = 0;
    for (const auto& p : parts) {
      u.segment(off, p.spec.dim()) = p.unit->coords;
      off += p.spec.dim();
    }
    e.unit = Element{u};
  }
  if (allFrames) {
    off = 0;
    for (const auto& p : parts) {
      for (const auto& c : p.canonicalFrame) {
        Vec v = Vec::Zero(d);
        v.segment(off, p.spec.dim()) = c.coords;
        e.canonicalFrame.push_back(Element{v});
      }
      off += p.spec.dim();
    }
  }
  if (allRoutes) {
    auto factors = e.factors;
    auto offsets = e.factorOffsets;
    e.fastRoute = [factors, offsets, d](const Vec& x) {
      RawSpectral out;
      std::vector<double> coeffs;
      for (size_t f = 0; f < factors.size(); ++f) {
        const int pd = factors[f]->spec.dim();
        RawSpectral sub = factors[f]->fastRoute(x.segment(offsets[f], pd));
        for (int i = 0; i < sub.coefficients.size(); ++i) {
          coeffs.push_back(sub.coefficients(i));
          Vec v = Vec::Zero(d);
          v.segment(offsets[f], pd) = sub.frame[i];
          out.frame.push_back(v);
        }
      }
      out.coefficients = Eigen::Map<Vec>(coeffs.data(), coeffs.size());
      return out;
    };
  }
  return e;
}

CatalogEntry buildLie(const std::string& name) {
  CatalogEntry e;
  if (name == "so3") {
    std::vector<Mat> lmats(3, Mat::Zero(3, 3));
    // [e_i, e_j] = eps_ijk e_k
    lmats[0](2, 1) = 1.0; lmats[0](1, 2) = -1.0;
    lmats[1](0, 2) = 1.0; lmats[1](2, 0) = -1.0;
    lmats[2](1, 0) = 1.0; lmats[2](0, 1) = -1.0;
    e.spec = AlgebraSpec::create(AlgebraKind::lie, {"x", "y", "z"}, lmats,
                                 1e-9, false);
    e.notes = "rotation generators";
  } else if (name == "sl2r") {
    // basis h, e, f with [h,e] = 2e, [h,f] = -2f, [e,f] = h
    std::vector<Mat> lmats(3, Mat::Zero(3, 3));
    lmats[0](1, 1) = 2.0; lmats[0](2, 2) = -2.0;
    lmats[1](1, 0) = -2.0; lmats[1](0, 2) = 1.0;
    lmats[2](2, 0) = 2.0; lmats[2](0, 1) = -1.0;
    e.spec = AlgebraSpec::create(AlgebraKind::lie, {"h", "e", "f"}, lmats,
                                 1e-9, false);
    e.notes = "traceless 2x2 real matrices";
  } else if (name.rfind("un:", 0) == 0) {
    const int n = parseCatalogInt(name.substr(3), name);
    if (n < 1) throw InputError("un: n must be >= 1");
    // anti-Hermitian matrices, commutator bracket
    std::vector<CMat> basis;
    std::vector<std::string> labels;
    for (int a = 0; a < n; ++a) {
      CMat m = CMat::Zero(n, n);
      m(a, a) = 1i;
      basis.push_back(m);
      labels.push_back("iE" + std::to_string(a + 1) + std::to_string(a + 1));
    }
    const double isq2 = 1.0 / std::sqrt(2.0);
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        CMat m = CMat::Zero(n, n);
        m(a, b) = isq2; m(b, a) = -isq2;
        basis.push_back(m);
        labels.push_back("A" + std::to_string(a + 1) + std::to_string(b + 1));
        m = CMat::Zero(n, n);
        m(a, b) = 1i * isq2; m(b, a) = 1i * isq2;
        basis.push_back(m);
        labels.push_back("S" + std::to_string(a + 1) + std::to_string(b + 1));
      }
    const int d = static_cast<int>(basis.size());
    auto coordsOf = [&](const CMat& x) {
      Vec c(d);
      for (int g = 0; g < d; ++g)
        c(g) = (x * basis[g].adjoint()).trace().real();
      return c;
    };
    auto productOf = [&](int i, int j) {
      return coordsOf(basis[i] * basis[j] - basis[j] * basis[i]);
    };
    e.spec = AlgebraSpec::create(AlgebraKind::lie, labels,
                                 lmatsFromProducts(d, productOf), 1e-9, false);
    e.notes = "anti-Hermitian matrices under the commutator";
  } else {
    throw InputError("unknown Lie catalog name: " + name);
  }
  e.name = name;
  e.factorOffsets = {0};
  return e;
}

CatalogEntry wrapSpec(AlgebraSpec spec, const std::string& name) {
  CatalogEntry e;
  e.spec = std::move(spec);
  e.name = name;
  e.factorOffsets = {0};
  AxiomReport axioms = checkAxioms(e.spec);
  if (axioms.unit) e.unit = axioms.unit;
  if (e.spec.kind() == AlgebraKind::jordan) {
    e.tauMatrix = canonicalTraceMatrix(e.spec);
    if (e.unit && isFormallyReal(e.spec)) {
      RngStream rng(0x77726170, 0);
      SpectralData sd = spectralDecompose(
          e.spec, Element{rng.gaussianVec(e.spec.dim())}, *e.unit, 0, {});
      e.rank = static_cast<int>(sd.frame.idempotents.size());
      e.canonicalFrame = sd.frame.idempotents;
    }
  }
  return e;
}

CatalogEntry fromName(const std::string& name) {
  if (name.find('+') != std::string::npos) {
    std::vector<CatalogEntry> parts;
    size_t start = 0;
    while (start <= name.size()) {
      size_t stop = name.find('+', start);
      if (stop == std::string::npos) stop = name.size();
      parts.push_back(fromName(name.substr(start, stop - start)));
      start = stop + 1;
    }
    return buildDirectSum(parts);
  }
  if (name.rfind("rn:", 0) == 0)
    return buildRn(parseCatalogInt(name.substr(3), name));
  if (name.rfind("spin:", 0) == 0)
    return buildSpin(parseCatalogInt(name.substr(5), name));
  if (name.rfind("herm:", 0) == 0) {
    size_t sep = name.find(':', 5);
    if (sep == std::string::npos)
      throw InputError("herm syntax: herm:<n>:<real|complex|quaternion>");
    const int n = parseCatalogInt(name.substr(5, sep - 5), name);
    const std::string field = name.substr(sep + 1);
    if (field == "real") return buildHermitian(n, HermitianField::real);
    if (field == "complex") return buildHermitian(n, HermitianField::complex);
    if (field == "quaternion")
      return buildHermitian(n, HermitianField::quaternion);
    throw InputError("unknown field: " + field);
  }
  if (name == "so3" || name == "sl2r" || name.rfind("un:", 0) == 0)
    return buildLie(name);
  return loadCustom(name);
}

}  // namespace jorbit
