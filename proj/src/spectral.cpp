#include "jorbit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "jorbit/numerics.hpp"

namespace jorbit {

namespace {

Mat canonicalMatrix(const AlgebraSpec& alg) {
  const int d = alg.dim();
  Vec traces(d);
  for (int i = 0; i < d; ++i) traces(i) = alg.basisLeftMult(i).trace();
  Mat t(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j)
      t(i, j) = t(j, i) = traces.dot(alg.basisLeftMult(i).col(j));
  return t;
}

void formSignature(const Mat& t, double tol, int& pos, int& neg, int& zero) {
  Eigen::SelfAdjointEigenSolver<Mat> es(t);
  const Vec& ev = es.eigenvalues();
  const double thr =
      tol * std::max(1.0, ev.cwiseAbs().maxCoeff()) * static_cast<double>(t.rows());
  pos = neg = zero = 0;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) > thr)
      ++pos;
    else if (ev(i) < -thr)
      ++neg;
    else
      ++zero;
  }
}

double associativityResidualOf(const AlgebraSpec& alg, const Mat& t) {
  double res = 0.0;
  const double scale =
      std::max(1.0, t.cwiseAbs().maxCoeff() * std::max(1.0, alg.maxStructureConstant()));
  for (int i = 0; i < alg.dim(); ++i) {
    const Mat& li = alg.basisLeftMult(i);
    res = std::max(res, (li.transpose() * t - t * li).cwiseAbs().maxCoeff());
  }
  return res / scale;
}

}  // namespace

TraceForm traceForm(const AlgebraSpec& alg) {
  if (alg.kind() != AlgebraKind::jordan)
    throw InputError("the canonical trace form needs the jordan kind");
  TraceForm tf;
  tf.variant = TraceVariant::canonical;
  tf.matrix = canonicalMatrix(alg);
  formSignature(tf.matrix, alg.tolerance(), tf.positive, tf.negative, tf.zero);
  tf.associativityResidual = associativityResidualOf(alg, tf.matrix);
  const double r = tf.matrix.trace() / alg.dim();
  if ((tf.matrix - r * Mat::Identity(alg.dim(), alg.dim()))
          .cwiseAbs()
          .maxCoeff() <= 1e-9 * std::max(1.0, std::abs(r)))
    tf.ratioToNormalized = r;
  return tf;
}

TraceForm traceForm(const CatalogEntry& entry, TraceVariant variant) {
  if (variant == TraceVariant::canonical) {
    TraceForm tf = traceForm(entry.spec);
    if (entry.traceRatio) tf.ratioToNormalized = entry.traceRatio;
    return tf;
  }
  if (!entry.hasNormalizedForm)
    throw InputError("no normalized trace form for \"" + entry.name + "\"");
  TraceForm tf;
  tf.variant = TraceVariant::normalized;
  const int d = entry.spec.dim();
  tf.matrix = Mat::Identity(d, d);
  tf.positive = d;
  tf.associativityResidual = associativityResidualOf(entry.spec, tf.matrix);
  tf.ratioToNormalized = entry.traceRatio;
  return tf;
}

Mat traceFormMatrix(const CatalogEntry& entry, TraceVariant variant) {
  if (variant == TraceVariant::normalized) {
    if (!entry.hasNormalizedForm)
      throw InputError("no normalized trace form for \"" + entry.name + "\"");
    return Mat::Identity(entry.spec.dim(), entry.spec.dim());
  }
  if (entry.tauMatrix.rows() == entry.spec.dim()) return entry.tauMatrix;
  return canonicalMatrix(entry.spec);
}

bool isFormallyReal(const AlgebraSpec& alg) {
  if (alg.kind() != AlgebraKind::jordan) return false;
  int pos, neg, zero;
  formSignature(canonicalMatrix(alg), alg.tolerance(), pos, neg, zero);
  return pos == alg.dim();
}

FrameCheck jordanFrameCheck(const AlgebraSpec& alg, const JordanFrame& frame,
                            const Element* unit) {
  FrameCheck out;
  const int d = alg.dim();
  const size_t r = frame.idempotents.size();
  if (r == 0 || alg.kind() != AlgebraKind::jordan) return out;
  for (const auto& c : frame.idempotents)
    if (c.coords.size() != d) throw InputError("frame coordinate size mismatch");

  const double tol = std::max(100.0 * alg.tolerance(), 1e-7);
  out.eigenvalueResidual = 0.0;
  bool primitive = true;
  for (size_t a = 0; a < r; ++a) {
    const Vec& c = frame.idempotents[a].coords;
    Vec sq = product(alg, frame.idempotents[a], frame.idempotents[a]).coords;
    out.idempotentResidual = std::max(
        out.idempotentResidual,
        (sq - c).cwiseAbs().maxCoeff() / std::max(1.0, c.cwiseAbs().maxCoeff()));
    Mat lc = leftMultiplicationMatrix(alg, c);
    Eigen::EigenSolver<Mat> es(lc);
    int ones = 0;
    for (int i = 0; i < d; ++i) {
      const std::complex<double> ev = es.eigenvalues()(i);
      double dist = std::min({std::abs(ev - std::complex<double>(0.0, 0.0)),
                              std::abs(ev - std::complex<double>(0.5, 0.0)),
                              std::abs(ev - std::complex<double>(1.0, 0.0))});
      out.eigenvalueResidual = std::max(out.eigenvalueResidual, dist);
      if (std::abs(ev - std::complex<double>(1.0, 0.0)) < 0.25) ++ones;
    }
    if (ones != 1) primitive = false;
  }
  for (size_t a = 0; a < r; ++a)
    for (size_t b = a + 1; b < r; ++b) {
      Vec p = product(alg, frame.idempotents[a], frame.idempotents[b]).coords;
      out.orthogonalityResidual =
          std::max(out.orthogonalityResidual, p.cwiseAbs().maxCoeff());
    }
  Vec sum = Vec::Zero(d);
  for (const auto& c : frame.idempotents) sum += c.coords;
  if (unit) {
    out.completenessResidual = (sum - unit->coords).cwiseAbs().maxCoeff() /
                               std::max(1.0, unit->coords.cwiseAbs().maxCoeff());
  } else {
    // no unit given: the sum must itself act as one
    out.completenessResidual =
        (leftMultiplicationMatrix(alg, sum) - Mat::Identity(d, d))
            .cwiseAbs()
            .maxCoeff();
  }

  out.idempotent = out.idempotentResidual <= tol;
  out.orthogonal = out.orthogonalityResidual <= tol;
  out.complete = out.completenessResidual <= tol;
  out.primitive = primitive;
  out.eigenvaluesValid = out.eigenvalueResidual <= std::max(tol, 1e-6);
  out.pass = out.idempotent && out.orthogonal && out.complete &&
             out.primitive && out.eigenvaluesValid;
  return out;
}

namespace {

struct FramePair {
  double coefficient;
  Vec idempotent;
};

Vec mul(const AlgebraSpec& alg, const Vec& a, const Vec& b) {
  return product(alg, Element{a}, Element{b}).coords;
}

// Distinct-root idempotents of x via the minimal polynomial; roots closer
// than the cluster gap are merged and the merged idempotent is polished
// back onto the idempotent variety.
std::vector<std::pair<double, Vec>> clusterIdempotents(const AlgebraSpec& alg,
                                                       const Vec& x,
                                                       const Vec& unit) {
  const int d = alg.dim();

  // Krylov basis of the subalgebra generated by x and the unit.
  std::vector<Vec> powers{unit};
  std::vector<Vec> ortho;
  int degree = -1;
  for (int i = 0; i <= d; ++i) {
    if (i > 0) powers.push_back(mul(alg, x, powers.back()));
    Vec v = powers.back();
    const double before = v.norm();
    for (const Vec& q : ortho) v -= q.dot(v) * q;
    for (const Vec& q : ortho) v -= q.dot(v) * q;
    if (v.norm() <= 1e-11 * std::max(1.0, before)) {
      degree = i;
      break;
    }
    ortho.push_back(v / v.norm());
  }
  if (degree < 0) degree = d;
  if (degree == 0)
    throw NumericalError("degenerate unit while building the minimal polynomial");

  // monic minimal polynomial: x^degree + sum c_i x^i = 0 in least squares
  Mat krylov(d, degree);
  for (int i = 0; i < degree; ++i) krylov.col(i) = powers[i];
  Vec c = krylov.colPivHouseholderQr().solve(-powers[degree]);
  std::vector<double> coeffs(c.data(), c.data() + degree);
  std::vector<double> roots = realPolynomialRoots(coeffs, 1e-4);

  // merge roots that are numerically indistinguishable
  double rootScale = 1.0;
  for (double r : roots) rootScale = std::max(rootScale, std::abs(r));
  const double gap = 1e-5 * rootScale;
  std::vector<double> reps;
  for (size_t i = 0; i < roots.size();) {
    size_t j = i + 1;
    double sum = roots[i];
    while (j < roots.size() && roots[j] - roots[j - 1] <= gap) {
      sum += roots[j];
      ++j;
    }
    reps.push_back(sum / static_cast<double>(j - i));
    i = j;
  }

  std::vector<std::pair<double, Vec>> out;
  if (reps.size() == 1) {
    out.emplace_back(reps[0], unit);
    return out;
  }
  for (size_t i = 0; i < reps.size(); ++i) {
    Vec e = unit;
    for (size_t j = 0; j < reps.size(); ++j) {
      if (j == i) continue;
      e = mul(alg, e, (x - reps[j] * unit) / (reps[i] - reps[j]));
    }
    // pull back onto the idempotent variety: e <- 3e^2 - 2e^3
    for (int it = 0; it < 40; ++it) {
      Vec sq = mul(alg, e, e);
      double res = (sq - e).cwiseAbs().maxCoeff();
      if (res < 1e-13) break;
      e = 3.0 * sq - 2.0 * mul(alg, e, sq);
    }
    out.emplace_back(reps[i], e);
  }
  return out;
}

void decomposeRec(const AlgebraSpec& alg, const Vec& x, const Vec& unit,
                  RngStream& rng, int depth, std::vector<FramePair>& out) {
  const int d = alg.dim();
  if (depth > 64)
    throw NumericalError("spectral recursion failed to terminate");
  if (d == 1) {
    out.push_back({x(0) / unit(0), unit});
    return;
  }

  const double nx = x.cwiseAbs().maxCoeff();
  std::vector<std::pair<double, Vec>> clusters;
  if (nx <= 1e-12) {
    clusters.emplace_back(0.0, unit);
  } else {
    clusters = clusterIdempotents(alg, Vec(x / nx), unit);
    for (auto& cl : clusters) cl.first *= nx;
  }

  for (const auto& [mu, e] : clusters) {
    Mat le = leftMultiplicationMatrix(alg, e);
    Mat basis = nullSpaceBasis(le - Mat::Identity(d, d), 0.25);
    const int k = static_cast<int>(basis.cols());
    if (k == 0)
      throw NumericalError("spectral idempotent lost its eigenspace");
    if (k == 1) {
      // one-dimensional peirce space: the idempotent itself is primitive
      out.push_back({mu, e});
      continue;
    }

    // restrict to the peirce 1-space of e (euclidean-orthonormal basis)
    std::vector<Mat> sublmats(k, Mat::Zero(k, k));
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j)
        sublmats[i].col(j) = basis.transpose() * mul(alg, basis.col(i), basis.col(j));
    }
    AlgebraSpec sub = AlgebraSpec::create(AlgebraKind::jordan, {}, sublmats,
                                          alg.tolerance(), false);
    Vec unitSub = basis.transpose() * e;

    // splitter: the part of x living in this block, recentered; any
    // multiple of the sub-unit only shifts the spectrum
    Mat pOne = 2.0 * le * le - le;
    Vec xSub = basis.transpose() * (pOne * x);
    Vec y = xSub - (unitSub.dot(xSub) / unitSub.squaredNorm()) * unitSub;
    if (y.cwiseAbs().maxCoeff() <= 1e-8 * std::max(1.0, xSub.cwiseAbs().maxCoeff()))
      y = rng.gaussianVec(k);

    std::vector<FramePair> sub_out;
    decomposeRec(sub, y, unitSub, rng, depth + 1, sub_out);
    if (static_cast<int>(sub_out.size()) > k)
      throw NumericalError("peirce block produced too many idempotents");
    for (auto& p : sub_out) out.push_back({mu, basis * p.idempotent});
  }
}

SpectralData finishSpectral(const AlgebraSpec& alg, const Mat& tau,
                            const Vec& x, std::vector<FramePair> pairs,
                            const SpectralOptions& opts, int rankHint) {
  if (rankHint > 0 && static_cast<int>(pairs.size()) != rankHint)
    throw NumericalError("spectral frame size " + std::to_string(pairs.size()) +
                         " does not match the rank " + std::to_string(rankHint));

  // sharpen each coefficient against the original element
  for (auto& p : pairs) {
    const double denom = p.idempotent.dot(tau * p.idempotent);
    if (denom > 1e-12) p.coefficient = x.dot(tau * p.idempotent) / denom;
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const FramePair& a, const FramePair& b) {
                     return a.coefficient > b.coefficient;
                   });

  SpectralData sd;
  sd.zeroThreshold = opts.zeroThreshold;
  sd.coefficients.resize(pairs.size());
  Vec recon = Vec::Zero(x.size());
  double maxAbs = 0.0;
  for (size_t i = 0; i < pairs.size(); ++i) {
    sd.coefficients(static_cast<int>(i)) = pairs[i].coefficient;
    sd.frame.idempotents.push_back(Element{pairs[i].idempotent});
    recon += pairs[i].coefficient * pairs[i].idempotent;
    maxAbs = std::max(maxAbs, std::abs(pairs[i].coefficient));
  }
  const double thr = opts.zeroThreshold * std::max(1.0, maxAbs);
  for (size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].coefficient > thr)
      ++sd.positive;
    else if (pairs[i].coefficient < -thr)
      ++sd.negative;
  }
  sd.reconstructionResidual = (recon - x).cwiseAbs().maxCoeff() /
                              std::max(1.0, x.cwiseAbs().maxCoeff());
  if (sd.reconstructionResidual > 1e-6)
    throw NumericalError("spectral reconstruction failed",
                         sd.reconstructionResidual);
  return sd;
}

}  // namespace

SpectralData spectralDecompose(const AlgebraSpec& alg, const Element& x,
                               const Element& unit, int rankHint,
                               const SpectralOptions& opts) {
  if (alg.kind() != AlgebraKind::jordan)
    throw InputError("spectral decomposition needs the jordan kind");
  if (x.coords.size() != alg.dim() || unit.coords.size() != alg.dim())
    throw InputError("element size does not match the algebra dimension");
  Mat tau = canonicalMatrix(alg);
  {
    int pos, neg, zero;
    formSignature(tau, alg.tolerance(), pos, neg, zero);
    if (pos != alg.dim())
      throw InputError(
          "spectral decomposition needs a formally real algebra "
          "(positive definite trace form)");
  }
  Mat lu = leftMultiplicationMatrix(alg, unit.coords);
  if ((lu - Mat::Identity(alg.dim(), alg.dim())).cwiseAbs().maxCoeff() > 1e-6)
    throw InputError("the provided unit does not satisfy l_u = id");

  RngStream rng(opts.splitSeed, 0);
  std::vector<FramePair> pairs;
  decomposeRec(alg, x.coords, unit.coords, rng, 0, pairs);
  return finishSpectral(alg, tau, x.coords, std::move(pairs), opts, rankHint);
}

SpectralData spectralDecompose(const CatalogEntry& entry, const Element& x,
                               const SpectralOptions& opts) {
  if (entry.spec.kind() != AlgebraKind::jordan)
    throw InputError("spectral decomposition needs the jordan kind");
  if (x.coords.size() != entry.spec.dim())
    throw InputError("element size does not match the algebra dimension");
  if (entry.fastRoute && opts.useFastRoute) {
    RawSpectral raw = entry.fastRoute(x.coords);
    std::vector<FramePair> pairs;
    for (size_t i = 0; i < raw.frame.size(); ++i)
      pairs.push_back({raw.coefficients(static_cast<int>(i)), raw.frame[i]});
    Mat tau = traceFormMatrix(entry, TraceVariant::canonical);
    return finishSpectral(entry.spec, tau, x.coords, std::move(pairs), opts,
                          entry.rank);
  }
  if (!entry.unit)
    throw InputError("\"" + entry.name +
                     "\" has no unit; spectral decomposition is unavailable");
  return spectralDecompose(entry.spec, x, *entry.unit, entry.rank, opts);
}

std::vector<double> minimalPolynomialCoeffs(const CatalogEntry& entry,
                                            const Element& x,
                                            const SpectralOptions& opts) {
  SpectralData sd = spectralDecompose(entry, x, opts);
  std::vector<double> poly{1.0};  // ascending, poly(t) = 1
  for (int i = 0; i < sd.coefficients.size(); ++i) {
    const double lambda = sd.coefficients(i);
    std::vector<double> next(poly.size() + 1, 0.0);
    for (size_t k = 0; k < poly.size(); ++k) {
      next[k + 1] += poly[k];
      next[k] -= lambda * poly[k];
    }
    poly = std::move(next);
  }
  poly.pop_back();  // drop the monic leading 1
  return poly;
}

PeirceDecomposition peirceDecompose(const AlgebraSpec& alg,
                                    const JordanFrame& frame, const Mat* form) {
  const int d = alg.dim();
  const int r = static_cast<int>(frame.idempotents.size());
  if (r == 0) throw InputError("peirce decomposition needs a frame");
  Mat tau = form ? *form : canonicalMatrix(alg);

  PeirceDecomposition out;
  out.frame = frame;

  std::vector<Mat> lmats;
  for (const auto& c : frame.idempotents)
    lmats.push_back(leftMultiplicationMatrix(alg, c.coords));
  const Mat id = Mat::Identity(d, d);

  std::map<std::pair<int, int>, Mat> projectors;
  for (int i = 0; i < r; ++i)
    for (int j = i; j < r; ++j) {
      Mat p;
      if (i == j)
        p = lmats[i] * (2.0 * lmats[i] - id);
      else
        p = (4.0 * lmats[i] * (id - lmats[i])) *
            (4.0 * lmats[j] * (id - lmats[j]));
      projectors[{i, j}] = p;
    }

  // form-orthonormal basis of each projector range
  for (const auto& [key, p] : projectors) {
    Mat span;
    if (p.cwiseAbs().maxCoeff() < 1e-3) {
      span = Mat(d, 0);
    } else {
      span = columnSpanBasis(p, 0.1);
    }
    Mat basis(d, span.cols());
    int kept = 0;
    for (int c = 0; c < span.cols(); ++c) {
      Vec v = span.col(c);
      for (int q = 0; q < kept; ++q)
        v -= (basis.col(q).dot(tau * v)) * basis.col(q);
      const double n2 = v.dot(tau * v);
      if (n2 > 1e-10) basis.col(kept++) = v / std::sqrt(n2);
    }
    out.blocks[key] = basis.leftCols(kept);
  }

  // eigenvalue laws: l_{c_k} acts on block (i, j) by (delta_ki + delta_kj)/2
  for (const auto& [key, basis] : out.blocks)
    for (int c = 0; c < basis.cols(); ++c)
      for (int k = 0; k < r; ++k) {
        const double theta = 0.5 * ((k == key.first) + (k == key.second));
        Vec resid = lmats[k] * basis.col(c) - theta * basis.col(c);
        out.eigenvalueResidual = std::max(
            out.eigenvalueResidual,
            resid.cwiseAbs().maxCoeff() / std::max(1.0, basis.col(c).cwiseAbs().maxCoeff()));
      }

  // form-orthogonality within and across blocks
  {
    std::vector<std::pair<std::pair<int, int>, int>> cols;
    for (const auto& [key, basis] : out.blocks)
      for (int c = 0; c < basis.cols(); ++c) cols.push_back({key, c});
    for (size_t a = 0; a < cols.size(); ++a)
      for (size_t b = a; b < cols.size(); ++b) {
        const Vec& va = out.blocks[cols[a].first].col(cols[a].second);
        const Vec& vb = out.blocks[cols[b].first].col(cols[b].second);
        double g = va.dot(tau * vb);
        double expected = (a == b) ? 1.0 : 0.0;
        out.orthogonalityResidual =
            std::max(out.orthogonalityResidual, std::abs(g - expected));
      }
  }

  // multiplication rules between blocks
  auto allowedTargets = [r](std::pair<int, int> a, std::pair<int, int> b) {
    std::vector<std::pair<int, int>> targets;
    const bool sharesFirst = a.first == b.first || a.first == b.second;
    const bool sharesSecond = a.second == b.first || a.second == b.second;
    if (!sharesFirst && !sharesSecond) return targets;  // disjoint: product 0
    if (a == b) {
      targets.push_back({a.first, a.first});
      if (a.second != a.first) targets.push_back({a.second, a.second});
      return targets;
    }
    if (a.first == a.second) {  // diagonal times off-diagonal
      targets.push_back(b);
      return targets;
    }
    if (b.first == b.second) {
      targets.push_back(a);
      return targets;
    }
    // both off-diagonal sharing exactly one index
    int shared = (a.first == b.first || a.first == b.second) ? a.first : a.second;
    int pa = a.first == shared ? a.second : a.first;
    int pb = b.first == shared ? b.second : b.first;
    targets.push_back({std::min(pa, pb), std::max(pa, pb)});
    return targets;
  };

  for (const auto& [ka, basisA] : out.blocks)
    for (const auto& [kb, basisB] : out.blocks) {
      if (basisA.cols() == 0 || basisB.cols() == 0) continue;
      Mat allowed = Mat::Zero(d, d);
      for (const auto& t : allowedTargets(ka, kb)) allowed += projectors[t];
      for (int ca = 0; ca < basisA.cols(); ++ca)
        for (int cb = 0; cb < basisB.cols(); ++cb) {
          Vec prod = mul(alg, basisA.col(ca), basisB.col(cb));
          Vec leak = prod - allowed * prod;
          out.productResidual = std::max(
              out.productResidual,
              leak.cwiseAbs().maxCoeff() / std::max(1.0, prod.cwiseAbs().maxCoeff()));
        }
    }
  return out;
}

DualElement flatMap(const CatalogEntry& entry, const Element& x,
                    TraceVariant variant) {
  if (x.coords.size() != entry.spec.dim())
    throw InputError("element size does not match the algebra dimension");
  return DualElement{traceFormMatrix(entry, variant) * x.coords};
}

Element sharpMap(const CatalogEntry& entry, const DualElement& xi,
                 TraceVariant variant) {
  if (xi.coords.size() != entry.spec.dim())
    throw InputError("covector size does not match the algebra dimension");
  Mat t = traceFormMatrix(entry, variant);
  Eigen::FullPivLU<Mat> lu(t);
  lu.setThreshold(1e-10);
  if (!lu.isInvertible())
    throw NumericalError("the trace form is degenerate; cannot raise the index");
  return Element{lu.solve(xi.coords)};
}

}  // namespace jorbit
