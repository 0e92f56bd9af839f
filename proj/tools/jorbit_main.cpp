#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "jorbit/json_io.hpp"
#include "jorbit/numerics.hpp"
#include "jorbit/verify.hpp"

namespace {

using nlohmann::json;

struct Options {
  std::string algebra;
  std::string xiSpec;
  std::string xSpec;
  std::string covectorSpec;
  std::string mode;  // sweep only
  double tol = 0.0;
  std::uint64_t seed = 7;
  std::string format = "json";
  std::string out;
  int trials = 0;
  int nPlus = 1;
  bool formatGiven = false;
  bool algebraGiven = false;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

jorbit::Vec parseNumberList(const std::string& body) {
  std::vector<double> vals;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(item, &used));
      if (used != item.size()) throw jorbit::InputError("");
    } catch (const std::exception&) {
      throw jorbit::InputError("bad number in element list: '" + item + "'");
    }
  }
  if (vals.empty()) throw jorbit::InputError("empty element list");
  jorbit::Vec v(static_cast<int>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i)
    v(static_cast<int>(i)) = vals[i];
  return v;
}

// diag:a,b,...  coefficients over the canonical frame
// vec:x1,...,xd raw coordinates
// rand          seeded gaussian draw
jorbit::Vec parseCoords(const std::string& spec,
                        const jorbit::CatalogEntry& entry, bool dualSide,
                        jorbit::RngStream& rng) {
  const int d = entry.spec.dim();
  if (spec == "rand") return rng.gaussianVec(d);
  if (spec.rfind("vec:", 0) == 0) {
    jorbit::Vec v = parseNumberList(spec.substr(4));
    if (v.size() != d)
      throw jorbit::InputError("vec: expects " + std::to_string(d) +
                               " coordinates");
    return v;
  }
  if (spec.rfind("diag:", 0) == 0) {
    if (entry.canonicalFrame.empty())
      throw jorbit::InputError(
          "diag: needs a catalog entry with a canonical frame");
    jorbit::Vec a = parseNumberList(spec.substr(5));
    const int r = static_cast<int>(entry.canonicalFrame.size());
    if (a.size() > r)
      throw jorbit::InputError("diag: expects at most " + std::to_string(r) +
                               " coefficients");
    jorbit::Vec x = jorbit::Vec::Zero(d);
    for (int k = 0; k < a.size(); ++k)
      x += a(k) * entry.canonicalFrame[k].coords;
    if (!dualSide) return x;
    return jorbit::flatMap(entry, jorbit::Element{x}, entry.defaultVariant)
        .coords;
  }
  throw jorbit::InputError(
      "element syntax: diag:a,b,...  vec:x1,...,xd  rand");
}

json envelope(const Options& opt, const jorbit::CatalogEntry& entry,
              const std::string& command) {
  json env;
  env["schema"] = "jordan-orbit/1";
  env["command"] = command;
  env["algebra"] = opt.algebra;
  env["name"] = entry.name;
  env["dim"] = entry.spec.dim();
  env["kind"] = jorbit::kindName(entry.spec.kind());
  env["seed"] = opt.seed;
  env["tolerance"] = entry.spec.tolerance();
  return env;
}

void emit(const Options& opt, const std::string& payload) {
  if (opt.out.empty()) {
    std::cout << payload;
    return;
  }
  const std::string tmp = opt.out + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw jorbit::InputError("cannot open output file: " + opt.out);
    f << payload;
    if (!f.good())
      throw jorbit::InputError("short write to output file: " + opt.out);
  }
  if (std::rename(tmp.c_str(), opt.out.c_str()) != 0)
    throw jorbit::InputError("cannot move report into place: " + opt.out);
}

void emitJson(const Options& opt, const json& env) {
  emit(opt, env.dump(2) + "\n");
}

jorbit::CatalogEntry requireAlgebra(const Options& opt) {
  if (opt.algebra.empty())
    throw jorbit::InputError("--algebra is required for this command");
  return jorbit::fromName(opt.algebra);
}

double zeroThreshold(const Options& opt) {
  return opt.tol > 0.0 ? opt.tol : 1e-8;
}

int runAxioms(const Options& opt) {
  jorbit::CatalogEntry entry = requireAlgebra(opt);
  jorbit::AxiomReport report = jorbit::checkAxioms(entry.spec);
  json env = envelope(opt, entry, "axioms");
  env["report"] = jorbit::toJson(report);
  const bool ok = report.satisfiesKind(entry.spec.kind());
  env["satisfiesDeclaredKind"] = ok;
  emitJson(opt, env);
  return ok ? 0 : 1;
}

int runSpectral(const Options& opt) {
  jorbit::CatalogEntry entry = requireAlgebra(opt);
  if (opt.xSpec.empty())
    throw jorbit::InputError("spectral needs an element (or --x)");
  jorbit::RngStream rng(opt.seed, 11);
  jorbit::Element x{parseCoords(opt.xSpec, entry, false, rng)};
  jorbit::SpectralOptions sopts;
  sopts.zeroThreshold = zeroThreshold(opt);
  jorbit::SpectralData sd = jorbit::spectralDecompose(entry, x, sopts);
  json env = envelope(opt, entry, "spectral");
  env["element"] = jorbit::vecToJson(x.coords);
  env["spectral"] = jorbit::toJson(sd);
  env["minimalPolynomial"] = jorbit::minimalPolynomialCoeffs(entry, x, sopts);
  emitJson(opt, env);
  return 0;
}

int runPeirce(const Options& opt) {
  jorbit::CatalogEntry entry = requireAlgebra(opt);
  if (entry.canonicalFrame.empty())
    throw jorbit::InputError("peirce needs an entry with a canonical frame");
  jorbit::PeirceDecomposition p =
      jorbit::peirceDecompose(entry.spec, jorbit::JordanFrame{entry.canonicalFrame});
  json env = envelope(opt, entry, "peirce");
  env["peirce"] = jorbit::toJson(p);
  emitJson(opt, env);
  const double worst = std::max(
      {p.eigenvalueResidual, p.orthogonalityResidual, p.productResidual});
  return worst <= 1e-7 ? 0 : 1;
}

int runOrbit(const Options& opt) {
  jorbit::CatalogEntry entry = requireAlgebra(opt);
  if (opt.xiSpec.empty())
    throw jorbit::InputError("orbit needs a dual element (or --xi)");
  jorbit::RngStream rng(opt.seed, 12);
  jorbit::DualElement xi{parseCoords(opt.xiSpec, entry, true, rng)};
  jorbit::MetricOptions mopts;
  mopts.zeroThreshold = zeroThreshold(opt);
  jorbit::OrbitClass cls = jorbit::classifyOrbit(entry, xi, mopts);
  jorbit::Element x = jorbit::sharpMap(entry, xi, cls.variant);
  json env = envelope(opt, entry, "orbit");
  env["point"] = jorbit::vecToJson(xi.coords);
  env["orbit"] = jorbit::toJson(cls);
  env["tangent"] = jorbit::toJson(jorbit::tangentDims(entry, x));
  env["regularPoint"] = jorbit::isRegularPoint(entry, xi, mopts);
  emitJson(opt, env);
  return 0;
}

int runMetric(const Options& opt) {
  jorbit::CatalogEntry entry = requireAlgebra(opt);
  if (opt.xiSpec.empty())
    throw jorbit::InputError("metric needs a dual element (or --xi)");
  jorbit::RngStream rng(opt.seed, 12);
  jorbit::DualElement xi{parseCoords(opt.xiSpec, entry, true, rng)};
  jorbit::MetricOptions mopts;
  mopts.zeroThreshold = zeroThreshold(opt);
  jorbit::MetricReport m = jorbit::metricAt(entry, xi, mopts);
  json env = envelope(opt, entry, "metric");
  env["metric"] = jorbit::toJson(m);
  emitJson(opt, env);
  return 0;
}

int runInvolutive(const Options& opt) {
  jorbit::CatalogEntry entry = requireAlgebra(opt);
  if (opt.xiSpec.empty())
    throw jorbit::InputError("involutive needs a dual element (or --xi)");
  jorbit::RngStream rng(opt.seed, 12);
  jorbit::DualElement xi{parseCoords(opt.xiSpec, entry, true, rng)};
  jorbit::InvolutivityVerdict v = jorbit::involutivityTest(entry.spec, xi);
  json env = envelope(opt, entry, "involutive");
  env["point"] = jorbit::vecToJson(xi.coords);
  env["involutivity"] = jorbit::toJson(v);
  env["distribution"] =
      jorbit::toJson(jorbit::distributionBasis(entry.spec, xi));
  emitJson(opt, env);
  return 0;
}

int runNatgrad(const Options& opt) {
  jorbit::CatalogEntry entry = requireAlgebra(opt);
  if (opt.xiSpec.empty() || opt.covectorSpec.empty())
    throw jorbit::InputError("natgrad needs a dual element and a covector");
  jorbit::RngStream rngXi(opt.seed, 12);
  jorbit::RngStream rngDf(opt.seed, 13);
  jorbit::DualElement xi{parseCoords(opt.xiSpec, entry, true, rngXi)};
  jorbit::Vec df = parseCoords(opt.covectorSpec, entry, true, rngDf);
  jorbit::Vec direction = jorbit::dualVectorField(entry.spec, xi, df);
  json env = envelope(opt, entry, "natgrad");
  env["point"] = jorbit::vecToJson(xi.coords);
  env["covector"] = jorbit::vecToJson(df);
  env["direction"] = jorbit::vecToJson(direction);
  emitJson(opt, env);
  return 0;
}

int runVerify(const Options& opt) {
  jorbit::VerifyOptions vo;
  vo.seed = opt.seed;
  vo.trials = opt.trials;
  vo.algebraFilter = opt.algebraGiven ? opt.algebra : "";
  std::vector<jorbit::CheckResult> results = jorbit::runAcceptance(vo);

  json env;
  env["schema"] = "jordan-orbit/1";
  env["command"] = "verify";
  env["algebra"] = vo.algebraFilter.empty() ? "all" : vo.algebraFilter;
  env["seed"] = vo.seed;
  json checks = json::array();
  bool all = true;
  for (const auto& r : results) {
    checks.push_back({{"id", r.id},
                      {"passed", r.passed},
                      {"observed", r.observed},
                      {"bound", r.bound},
                      {"details", r.details}});
    all = all && r.passed;
  }
  env["checks"] = checks;
  env["reportText"] = jorbit::acceptanceReportText(results, vo);
  env["allPassed"] = all;
  emitJson(opt, env);
  return all ? 0 : 1;
}

int runSweep(const Options& opt) {
  jorbit::CatalogEntry entry = requireAlgebra(opt);
  const std::string format =
      opt.formatGiven ? opt.format : std::string("csv");

  if (opt.mode == "pole") {
    const std::vector<double> eps = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
    std::vector<jorbit::PoleSweepRow> rows = jorbit::poleSweep(entry, eps);
    if (format == "csv") {
      std::ostringstream csv;
      csv << "eps,maxGramEntry\n";
      for (const auto& r : rows)
        csv << num(r.eps) << "," << num(r.maxGramEntry) << "\n";
      emit(opt, csv.str());
    } else {
      json env = envelope(opt, entry, "sweep pole");
      json arr = json::array();
      for (const auto& r : rows)
        arr.push_back({{"eps", r.eps}, {"maxGramEntry", r.maxGramEntry}});
      env["rows"] = arr;
      emitJson(opt, env);
    }
    return 0;
  }

  if (opt.mode == "signature") {
    if (opt.xiSpec.empty())
      throw jorbit::InputError("sweep signature needs --xi");
    jorbit::RngStream rng(opt.seed, 12);
    jorbit::DualElement xi{parseCoords(opt.xiSpec, entry, true, rng)};
    const int trials = opt.trials > 0 ? opt.trials : 20;
    jorbit::SweepReport wide =
        jorbit::signatureInvarianceSweep(entry, xi, trials, opt.seed, false);
    jorbit::SweepReport aut = jorbit::signatureInvarianceSweep(
        entry, xi, trials, opt.seed + 1, true);
    if (format == "csv") {
      std::ostringstream csv;
      csv << "mode,trials,signatureConstant,maxCoefficientDeviation,"
             "maxPullbackResidual,basePositive,baseNegative\n";
      csv << "structure," << wide.trials << "," << wide.signatureConstant
          << "," << num(wide.maxCoefficientDeviation) << ","
          << num(wide.maxPullbackResidual) << "," << wide.basePositive << ","
          << wide.baseNegative << "\n";
      csv << "automorphism," << aut.trials << "," << aut.signatureConstant
          << "," << num(aut.maxCoefficientDeviation) << ","
          << num(aut.maxPullbackResidual) << "," << aut.basePositive << ","
          << aut.baseNegative << "\n";
      emit(opt, csv.str());
    } else {
      json env = envelope(opt, entry, "sweep signature");
      env["structure"] = jorbit::toJson(wide);
      env["automorphism"] = jorbit::toJson(aut);
      emitJson(opt, env);
    }
    return wide.signatureConstant && aut.signatureConstant ? 0 : 1;
  }

  if (opt.mode == "curve") {
    std::vector<double> tSamples;
    for (int k = 1; k <= 10; ++k) tSamples.push_back(0.25 * k);
    std::vector<double> speeds =
        jorbit::incompletenessCurve(entry, opt.nPlus, tSamples);
    if (format == "csv") {
      std::ostringstream csv;
      csv << "t,speed\n";
      for (std::size_t i = 0; i < speeds.size(); ++i)
        csv << num(tSamples[i]) << "," << num(speeds[i]) << "\n";
      emit(opt, csv.str());
    } else {
      json env = envelope(opt, entry, "sweep curve");
      env["nPlus"] = opt.nPlus;
      json arr = json::array();
      for (std::size_t i = 0; i < speeds.size(); ++i)
        arr.push_back({{"t", tSamples[i]}, {"speed", speeds[i]}});
      env["rows"] = arr;
      emitJson(opt, env);
    }
    double lo = speeds.front(), hi = speeds.front();
    for (double s : speeds) {
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    return hi - lo <= 1e-6 * std::max(1.0, hi) ? 0 : 1;
  }

  throw jorbit::InputError("sweep mode must be pole, signature, or curve");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"structure-group orbit geometry of real algebras"};
  app.require_subcommand(1);

  Options opt;
  auto addCommon = [&opt](CLI::App* sub) {
    sub->add_option("--algebra", opt.algebra,
                    "catalog name (rn:5, herm:2:complex, spin:4, so3, sl2r, "
                    "un:2, sums with '+') or a JSON file path");
    sub->add_option("--xi", opt.xiSpec, "dual element");
    sub->add_option("--x", opt.xSpec, "element");
    sub->add_option("--tol", opt.tol, "zero threshold override");
    sub->add_option("--seed", opt.seed, "seed for rand inputs and checks");
    sub->add_option("--format", opt.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", opt.out, "output file (written atomically)");
    sub->add_option("--trials", opt.trials, "trial count override");
  };

  CLI::App* axioms = app.add_subcommand("axioms", "axiom report");
  addCommon(axioms);

  CLI::App* spectral =
      app.add_subcommand("spectral", "spectral decomposition");
  spectral->add_option("element", opt.xSpec, "diag:..., vec:..., or rand");
  addCommon(spectral);

  CLI::App* peirce =
      app.add_subcommand("peirce", "joint eigenspace decomposition");
  addCommon(peirce);

  CLI::App* orbit = app.add_subcommand("orbit", "orbit classification");
  orbit->add_option("dual", opt.xiSpec, "diag:..., vec:..., or rand");
  addCommon(orbit);

  CLI::App* metric = app.add_subcommand("metric", "orbit metric report");
  metric->add_option("dual", opt.xiSpec, "diag:..., vec:..., or rand");
  addCommon(metric);

  CLI::App* involutive =
      app.add_subcommand("involutive", "distribution involutivity");
  involutive->add_option("dual", opt.xiSpec, "diag:..., vec:..., or rand");
  addCommon(involutive);

  CLI::App* natgrad =
      app.add_subcommand("natgrad", "natural-gradient direction");
  natgrad->add_option("dual", opt.xiSpec, "diag:..., vec:..., or rand");
  natgrad->add_option("covector", opt.covectorSpec,
                      "diag:..., vec:..., or rand");
  addCommon(natgrad);

  CLI::App* verify = app.add_subcommand("verify", "acceptance suite");
  addCommon(verify);

  CLI::App* sweep = app.add_subcommand("sweep", "pole / signature / curve");
  sweep->add_option("mode", opt.mode, "pole, signature, or curve")
      ->required();
  sweep->add_option("--nplus", opt.nPlus, "positive ray dimension (curve)");
  addCommon(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (CLI::App* sub : {axioms, spectral, peirce, orbit, metric, involutive,
                        natgrad, verify, sweep}) {
    if (!sub->parsed()) continue;
    opt.formatGiven = sub->count("--format") > 0;
    opt.algebraGiven = sub->count("--algebra") > 0;
  }

  try {
    if (opt.formatGiven && opt.format == "csv" && !sweep->parsed())
      throw jorbit::InputError("csv output is only available for sweeps");
    if (axioms->parsed()) return runAxioms(opt);
    if (spectral->parsed()) return runSpectral(opt);
    if (peirce->parsed()) return runPeirce(opt);
    if (orbit->parsed()) return runOrbit(opt);
    if (metric->parsed()) return runMetric(opt);
    if (involutive->parsed()) return runInvolutive(opt);
    if (natgrad->parsed()) return runNatgrad(opt);
    if (verify->parsed()) return runVerify(opt);
    if (sweep->parsed()) return runSweep(opt);
  } catch (const jorbit::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const jorbit::NumericalError& e) {
    std::cerr << "numerical error: " << e.what()
              << " (condition estimate " << e.conditionEstimate << ")\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
