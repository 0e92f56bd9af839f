#include "jorbit/orbit_metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "jorbit/numerics.hpp"

namespace jorbit {

std::string coneStatusName(ConeStatus s) {
  switch (s) {
    case ConeStatus::interior:
      return "interior";
    case ConeStatus::boundary:
      return "boundary";
    default:
      return "exterior";
  }
}

namespace {

void checkDual(const CatalogEntry& entry, const DualElement& xi) {
  if (static_cast<int>(xi.coords.size()) != entry.spec.dim())
    throw InputError("dual element size does not match the algebra dimension");
}

// Spectral data of the sharpened point plus the joint eigenspace split,
// everything expressed in one trace variant.
struct BlockLayout {
  TraceVariant variant = TraceVariant::canonical;
  Mat form;
  SpectralData sd;
  PeirceDecomposition peirce;
  double scale = 1.0;
  double zeroThr = 0.0;
  std::vector<bool> zero;
};

BlockLayout resolveLayout(const CatalogEntry& entry, const DualElement& xi,
                          const MetricOptions& opts) {
  checkDual(entry, xi);
  BlockLayout lay;
  lay.variant = opts.variant.value_or(entry.defaultVariant);
  lay.form = traceFormMatrix(entry, lay.variant);
  Element x = sharpMap(entry, xi, lay.variant);
  SpectralOptions sopts;
  sopts.zeroThreshold = opts.zeroThreshold;
  lay.sd = spectralDecompose(entry, x, sopts);
  lay.peirce = peirceDecompose(entry.spec, lay.sd.frame, &lay.form);
  lay.scale = std::max(1.0, lay.sd.coefficients.cwiseAbs().maxCoeff());
  lay.zeroThr = opts.zeroThreshold * lay.scale;
  const int r = static_cast<int>(lay.sd.frame.idempotents.size());
  lay.zero.resize(r);
  for (int a = 0; a < r; ++a)
    lay.zero[a] = std::abs(lay.sd.coefficients(a)) <= lay.zeroThr;
  return lay;
}

int blockDim(const BlockLayout& lay, int a, int b) {
  auto it = lay.peirce.blocks.find({std::min(a, b), std::max(a, b)});
  return it == lay.peirce.blocks.end() ? 0
                                       : static_cast<int>(it->second.cols());
}

// Pair of nonzero coefficients with a vanishing sum on a nonempty block.
std::optional<std::pair<int, int>> cancellingPair(const BlockLayout& lay) {
  const int r = static_cast<int>(lay.sd.frame.idempotents.size());
  for (int a = 0; a < r; ++a)
    for (int b = a + 1; b < r; ++b) {
      if (lay.zero[a] || lay.zero[b]) continue;
      if (std::abs(lay.sd.coefficients(a) + lay.sd.coefficients(b)) >
          lay.zeroThr)
        continue;
      if (blockDim(lay, a, b) > 0) return std::make_pair(a, b);
    }
  return std::nullopt;
}

}  // namespace

OrbitClass classifyOrbit(const CatalogEntry& entry, const DualElement& xi,
                         const MetricOptions& opts) {
  checkDual(entry, xi);
  OrbitClass cls;
  cls.variant = opts.variant.value_or(entry.defaultVariant);
  Element x = sharpMap(entry, xi, cls.variant);
  SpectralOptions sopts;
  sopts.zeroThreshold = opts.zeroThreshold;
  SpectralData sd = spectralDecompose(entry, x, sopts);

  const int r = static_cast<int>(sd.frame.idempotents.size());
  cls.positive = sd.positive;
  cls.negative = sd.negative;
  cls.rank = r;
  cls.regularOrbit = (sd.positive == 0 || sd.negative == 0);

  if (sd.positive > 0 && sd.negative > 0) {
    cls.coneStatus = ConeStatus::exterior;
    cls.coneSign = 0;
  } else if (sd.positive == r) {
    cls.coneStatus = ConeStatus::interior;
    cls.coneSign = 1;
  } else if (sd.negative == r) {
    cls.coneStatus = ConeStatus::interior;
    cls.coneSign = -1;
  } else {
    cls.coneStatus = ConeStatus::boundary;
    cls.coneSign = sd.positive > 0 ? 1 : (sd.negative > 0 ? -1 : 0);
  }

  MetricOptions fopts = opts;
  fopts.variant = cls.variant;
  for (std::size_t k = 0; k < entry.factors.size(); ++k) {
    const CatalogEntry& f = *entry.factors[k];
    DualElement part{xi.coords.segment(entry.factorOffsets[k], f.spec.dim())};
    cls.perFactor.push_back(classifyOrbit(f, part, fopts));
  }
  return cls;
}

bool isRegularPoint(const CatalogEntry& entry, const DualElement& xi,
                    const MetricOptions& opts) {
  BlockLayout lay = resolveLayout(entry, xi, opts);
  return !cancellingPair(lay).has_value();
}

TangentDims tangentDims(const CatalogEntry& entry, const Element& x) {
  if (static_cast<int>(x.coords.size()) != entry.spec.dim())
    throw InputError("element size does not match the algebra dimension");
  SpectralData sd = spectralDecompose(entry, x);
  Mat form = traceFormMatrix(entry, TraceVariant::canonical);
  PeirceDecomposition peirce = peirceDecompose(entry.spec, sd.frame, &form);
  const double scale = std::max(1.0, sd.coefficients.cwiseAbs().maxCoeff());
  const double thr = 1e-8 * scale;

  TangentDims dims;
  for (const auto& [key, basis] : peirce.blocks) {
    const int m = static_cast<int>(basis.cols());
    if (m == 0) continue;
    const double la = sd.coefficients(key.first);
    const double lb = sd.coefficients(key.second);
    if (std::abs(la + lb) > thr) dims.dimLx += m;
    if (std::abs(la - lb) > thr) dims.dimDer += m;
    if (std::abs(la) > thr || std::abs(lb) > thr) dims.dimOrbit += m;
  }
  return dims;
}

MetricReport metricAt(const CatalogEntry& entry, const DualElement& xi,
                      const MetricOptions& opts) {
  BlockLayout lay = resolveLayout(entry, xi, opts);
  if (auto bad = cancellingPair(lay)) {
    const double gap = std::abs(lay.sd.coefficients(bad->first) +
                                lay.sd.coefficients(bad->second));
    std::ostringstream msg;
    msg << "metric pole: spectral coefficients "
        << lay.sd.coefficients(bad->first) << " (index " << bad->first
        << ") and " << lay.sd.coefficients(bad->second) << " (index "
        << bad->second << ") cancel on a nonempty block";
    throw NumericalError(msg.str(), lay.scale / std::max(gap, 1e-300));
  }

  const int d = entry.spec.dim();
  MetricReport rep;
  rep.point = xi;
  rep.variant = lay.variant;
  rep.regularPoint = true;
  rep.coefficients = lay.sd.coefficients;

  std::vector<Vec> primal;
  std::vector<double> weight;
  double minAbsSum = std::numeric_limits<double>::infinity();
  for (const auto& [key, basis] : lay.peirce.blocks) {
    const int m = static_cast<int>(basis.cols());
    if (m == 0) continue;
    const auto [a, i] = key;
    if (lay.zero[a] && lay.zero[i]) continue;
    const double sum = lay.sd.coefficients(a) + lay.sd.coefficients(i);
    minAbsSum = std::min(minAbsSum, std::abs(sum));
    const double g = 2.0 / sum;
    rep.blockCoefficients[key] = g;
    for (int j = 0; j < m; ++j) {
      primal.push_back(basis.col(j));
      weight.push_back(g);
      rep.blockOfColumn.push_back(key);
    }
  }

  const int ncols = static_cast<int>(primal.size());
  rep.tangentBasis.resize(d, ncols);
  rep.gram = Mat::Zero(ncols, ncols);
  for (int p = 0; p < ncols; ++p) {
    rep.tangentBasis.col(p) = lay.form * primal[p];
    rep.gram(p, p) = weight[p];
    (weight[p] > 0 ? rep.metricPositive : rep.metricNegative) += 1;
  }
  rep.orbitDim = ncols;
  rep.poleProximity = ncols > 0 && minAbsSum < 1e-6 * lay.scale;

  // The generator of a = g_p b_p at the point is exactly the column T b_p,
  // so the canonical pairing <xi, a_p * a_q> must reproduce the gram matrix.
  double worst = 0.0;
  for (int p = 0; p < ncols; ++p) {
    Mat lp = leftMultiplicationMatrix(entry.spec, primal[p]);
    for (int q = p; q < ncols; ++q) {
      const double direct =
          weight[p] * weight[q] * xi.coords.dot(lp * primal[q]);
      const double expected = p == q ? rep.gram(p, p) : 0.0;
      worst = std::max(worst, std::abs(direct - expected) /
                                  std::max(1.0, std::abs(expected)));
    }
  }
  rep.crossCheckResidual = worst;
  return rep;
}

double evaluateMetric(const MetricReport& report, const Vec& v, const Vec& w) {
  const auto d = report.tangentBasis.rows();
  if (v.size() != d || w.size() != d)
    throw InputError("tangent vector size does not match the point");
  Eigen::ColPivHouseholderQR<Mat> qr(report.tangentBasis);
  const Vec alpha = qr.solve(v);
  const Vec beta = qr.solve(w);
  const double vErr = (report.tangentBasis * alpha - v).cwiseAbs().maxCoeff();
  const double wErr = (report.tangentBasis * beta - w).cwiseAbs().maxCoeff();
  const double vTop = std::max(1.0, v.cwiseAbs().maxCoeff());
  const double wTop = std::max(1.0, w.cwiseAbs().maxCoeff());
  if (vErr > 1e-8 * vTop || wErr > 1e-8 * wTop)
    throw InputError("vector lies outside the tangent span at this point");
  double out = 0.0;
  for (int p = 0; p < report.gram.rows(); ++p)
    out += alpha(p) * beta(p) * report.gram(p, p);
  return out;
}

CheckReport fisherRaoCheck(int n, std::uint64_t seed, int trials,
                           double bound) {
  if (n < 1) throw InputError("fisherRaoCheck needs n >= 1");
  CatalogEntry entry = buildRn(n);
  CheckReport rep;
  rep.trials = trials;
  for (int t = 0; t < trials; ++t) {
    RngStream rng(seed, static_cast<std::uint64_t>(t));
    DualElement xi{rng.uniformVec(n, 0.15, 3.0)};
    MetricReport m = metricAt(entry, xi, {});
    rep.crossCheckResidual =
        std::max(rep.crossCheckResidual, m.crossCheckResidual);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double got =
            evaluateMetric(m, Vec::Unit(n, i), Vec::Unit(n, j));
        const double want = i == j ? 1.0 / xi.coords(i) : 0.0;
        rep.maxResidual =
            std::max(rep.maxResidual,
                     std::abs(got - want) / std::max(1.0, std::abs(want)));
      }
  }
  rep.pass = rep.maxResidual <= bound;
  return rep;
}

CheckReport buresHelstromCheck(int n, std::uint64_t seed, int trials,
                               double bound) {
  if (n < 2) throw InputError("buresHelstromCheck needs n >= 2");
  CatalogEntry entry = buildHermitian(n, HermitianField::complex);
  const int d = entry.spec.dim();
  MetricOptions mopts;
  mopts.variant = TraceVariant::normalized;

  CheckReport rep;
  rep.trials = trials;
  for (int t = 0; t < trials; ++t) {
    RngStream rng(seed, 1000 + static_cast<std::uint64_t>(t));
    SpectralData base = spectralDecompose(entry, Element{rng.gaussianVec(d)});

    Vec lam(n);
    for (int a = 0; a < n; ++a)
      lam(a) = 0.8 + 0.5 * (n - 1 - a) + 0.2 * rng.uniform(-1.0, 1.0);
    Vec x = Vec::Zero(d);
    for (int a = 0; a < n; ++a) x += lam(a) * base.frame.idempotents[a].coords;

    MetricReport m = metricAt(entry, flatMap(entry, Element{x},
                                             TraceVariant::normalized),
                              mopts);
    rep.crossCheckResidual =
        std::max(rep.crossCheckResidual, m.crossCheckResidual);

    double res = (m.coefficients - lam).cwiseAbs().maxCoeff() /
                 std::max(1.0, lam.cwiseAbs().maxCoeff());
    if (m.orbitDim != d) res = std::max(res, 1.0);
    for (const auto& [key, g] : m.blockCoefficients) {
      const double want = 2.0 / (lam(key.first) + lam(key.second));
      res = std::max(res, std::abs(g - want) / std::max(1.0, std::abs(want)));
      int cols = 0;
      for (const auto& b : m.blockOfColumn) cols += b == key ? 1 : 0;
      const int expectCols = key.first == key.second ? 1 : 2;
      if (cols != expectCols) res = std::max(res, 1.0);
    }
    rep.maxResidual = std::max(rep.maxResidual, res);
  }
  rep.pass = rep.maxResidual <= bound;
  return rep;
}

SpinCheckReport spinFactorCheck(int n, std::uint64_t seed, int trials,
                                double bound) {
  if (n < 2) throw InputError("spinFactorCheck needs n >= 2");
  CatalogEntry entry = buildSpin(n);
  const int d = n + 1;
  MetricOptions mopts;
  mopts.variant = TraceVariant::normalized;

  SpinCheckReport rep;
  rep.trials = trials;
  rep.definitenessLawHolds = true;
  for (int t = 0; t < trials; ++t) {
    RngStream rng(seed, 2000 + static_cast<std::uint64_t>(t));
    const double t0 = (t % 2 == 0 ? 1.0 : -1.0) * rng.uniform(0.4, 2.0);
    const double ratio =
        t % 3 == 2 ? rng.uniform(1.15, 2.0) : rng.uniform(0.15, 0.85);
    const double s0 = (t % 4 < 2 ? 1.0 : -1.0) * ratio * t0;
    Vec dir = rng.gaussianVec(n);
    if (dir.norm() < 1e-12) dir = Vec::Unit(n, 0);
    dir.normalize();

    Vec xi = Vec::Zero(d);
    xi(0) = t0;
    xi.tail(n) = s0 * dir;
    MetricReport m = metricAt(entry, DualElement{xi}, mopts);

    const bool positiveDefinite =
        m.metricNegative == 0 && m.orbitDim == d && m.metricPositive == d;
    if (positiveDefinite != (t0 > std::abs(s0)))
      rep.definitenessLawHolds = false;

    Vec want(2);
    want << std::max(t0 + s0, t0 - s0), std::min(t0 + s0, t0 - s0);
    rep.maxResidual = std::max(
        rep.maxResidual, (m.coefficients - want).cwiseAbs().maxCoeff() /
                             std::max(1.0, want.cwiseAbs().maxCoeff()));

    for (int k = 0; k < 4; ++k) {
      const Vec v1 = rng.gaussianVec(d);
      const Vec v2 = rng.gaussianVec(d);
      const double a1 = v1(0), a2 = v2(0);
      const double b1 = dir.dot(v1.tail(n)), b2 = dir.dot(v2.tail(n));
      const Vec p1 = v1.tail(n) - b1 * dir;
      const Vec p2 = v2.tail(n) - b2 * dir;
      const double oracle = (a1 + b1) * (a2 + b2) / (2.0 * (t0 + s0)) +
                            (a1 - b1) * (a2 - b2) / (2.0 * (t0 - s0)) +
                            p1.dot(p2) / t0;
      const double got = evaluateMetric(m, v1, v2);
      rep.maxResidual =
          std::max(rep.maxResidual,
                   std::abs(got - oracle) / std::max(1.0, std::abs(oracle)));
    }
  }
  rep.pass = rep.maxResidual <= bound && rep.definitenessLawHolds;
  return rep;
}

std::vector<double> incompletenessCurve(const CatalogEntry& entry, int nPlus,
                                        const std::vector<double>& tSamples) {
  if (entry.canonicalFrame.empty())
    throw InputError("entry carries no canonical frame");
  const int r = static_cast<int>(entry.canonicalFrame.size());
  if (nPlus < 1 || nPlus > r)
    throw InputError("nPlus must lie in [1, rank]");
  const Mat form = traceFormMatrix(entry, TraceVariant::canonical);
  Vec c = Vec::Zero(entry.spec.dim());
  for (int a = 0; a < nPlus; ++a) c += entry.canonicalFrame[a].coords;

  MetricOptions mopts;
  mopts.variant = TraceVariant::canonical;
  std::vector<double> speeds;
  speeds.reserve(tSamples.size());
  for (double t : tSamples) {
    if (t <= 0.0) throw InputError("curve parameter must be positive");
    DualElement xi{(t * t) * (form * c)};
    const Vec rate = (2.0 * t) * (form * c);
    MetricReport m = metricAt(entry, xi, mopts);
    speeds.push_back(evaluateMetric(m, rate, rate));
  }
  return speeds;
}

SweepReport signatureInvarianceSweep(const CatalogEntry& entry,
                                     const DualElement& xi, int trials,
                                     std::uint64_t seed,
                                     bool automorphismsOnly) {
  checkDual(entry, xi);
  const int d = entry.spec.dim();
  const TraceVariant variant = entry.defaultVariant;
  std::vector<Mat> ops = automorphismsOnly
                             ? innerDerivationBasis(entry.spec)
                             : structureAlgebra(entry.spec).operators;

  SpectralData sd0 =
      spectralDecompose(entry, sharpMap(entry, xi, variant));
  const double scale0 =
      std::max(1.0, sd0.coefficients.cwiseAbs().maxCoeff());

  SweepReport rep;
  rep.trials = trials;
  rep.signatureConstant = true;
  rep.basePositive = sd0.positive;
  rep.baseNegative = sd0.negative;

  MetricReport m0;
  bool haveMetric = false;
  if (automorphismsOnly) {
    m0 = metricAt(entry, xi, {});
    haveMetric = m0.orbitDim > 0;
  }

  for (int t = 0; t < trials; ++t) {
    RngStream rng(seed, 3000 + static_cast<std::uint64_t>(t));
    Mat a = Mat::Zero(d, d);
    if (!ops.empty()) {
      const double amp = 0.5 / std::sqrt(static_cast<double>(ops.size()));
      for (const Mat& op : ops) a += amp * rng.gaussian() * op;
    }
    const Mat transport = matrixExponential(a.transpose());
    DualElement moved{transport * xi.coords};

    SpectralData sd =
        spectralDecompose(entry, sharpMap(entry, moved, variant));
    if (sd.positive != sd0.positive || sd.negative != sd0.negative)
      rep.signatureConstant = false;

    if (!automorphismsOnly) continue;
    rep.maxCoefficientDeviation = std::max(
        rep.maxCoefficientDeviation,
        (sd.coefficients - sd0.coefficients).cwiseAbs().maxCoeff() / scale0);
    if (!haveMetric) continue;
    const Vec v = m0.tangentBasis * rng.gaussianVec(m0.orbitDim);
    const Vec w = m0.tangentBasis * rng.gaussianVec(m0.orbitDim);
    const double g0 = evaluateMetric(m0, v, w);
    MetricReport m1 = metricAt(entry, moved, {});
    const double g1 = evaluateMetric(m1, transport * v, transport * w);
    rep.maxPullbackResidual =
        std::max(rep.maxPullbackResidual,
                 std::abs(g1 - g0) / std::max(1.0, std::abs(g0)));
  }
  return rep;
}

std::vector<PoleSweepRow> poleSweep(const CatalogEntry& entry,
                                    const std::vector<double>& epsValues) {
  if (entry.canonicalFrame.size() < 2)
    throw InputError("pole sweep needs a catalog entry of rank >= 2");
  const Mat form = traceFormMatrix(entry, TraceVariant::canonical);
  MetricOptions mopts;
  mopts.variant = TraceVariant::canonical;

  std::vector<PoleSweepRow> rows;
  rows.reserve(epsValues.size());
  for (double eps : epsValues) {
    if (eps <= 0.0) throw InputError("eps must be positive");
    const Vec x = entry.canonicalFrame[0].coords -
                  (1.0 - eps) * entry.canonicalFrame[1].coords;
    MetricReport m = metricAt(entry, DualElement{form * x}, mopts);
    PoleSweepRow row;
    row.eps = eps;
    row.maxGramEntry = m.gram.diagonal().cwiseAbs().maxCoeff();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace jorbit
