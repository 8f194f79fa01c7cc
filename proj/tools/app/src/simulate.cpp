#include <algorithm>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sparsesel/app/commands.hpp"
#include "sparsesel/bss.hpp"
#include "sparsesel/combinatorics.hpp"
#include "sparsesel/comparators.hpp"
#include "sparsesel/errors.hpp"
#include "sparsesel/iht.hpp"
#include "sparsesel/metrics.hpp"
#include "sparsesel/rng.hpp"
#include "sparsesel/simgen.hpp"

namespace sparsesel::app {

namespace {

constexpr std::uint64_t kCvStream = 0xC5;

PenaltySpec penalty_of(const MethodSpec& m) {
  return m.kind == MethodSpec::Kind::lasso ? PenaltySpec::lasso() : PenaltySpec::scad(m.a);
}

struct ReplicatePath {
  bool ok = false;
  std::string error;
  std::vector<double> parameters;
  std::vector<SelectionMetrics> metrics;
  std::optional<std::pair<double, SelectionMetrics>> cv;
};

ReplicatePath method_path(const MethodSpec& method, const Dataset& data, const SupportSet& truth,
                          const ExperimentConfig& config, std::uint64_t cv_seed) {
  ReplicatePath out;
  if (method.penalized()) {
    const PenaltySpec spec = penalty_of(method);
    const auto grid = default_lambda_grid(data, method.lambda_count, method.lambda_ratio);
    const SelectionPath path = penalized_path(data, spec, grid);
    out.metrics = tpr_fdr_curve(path, truth);
    out.parameters.assign(grid.begin(), grid.end());
    const CvResult cv = cross_validate(data, spec, grid, config.cv_folds, cv_seed);
    out.cv = std::make_pair(cv.lambda_star, out.metrics[static_cast<std::size_t>(cv.lambda_index)]);
  } else {
    const Index cap = method.max_size > 0 ? std::min(method.max_size, data.p()) : data.p();
    const auto supports = supports_by_size(method, data, cap, config.budget);
    for (std::size_t k = 0; k < supports.size(); ++k) {
      out.parameters.push_back(static_cast<double>(k + 1));
      out.metrics.push_back(selection_metrics(supports[k], truth));
    }
  }
  out.ok = true;
  return out;
}

MethodCurve aggregate(const MethodSpec& method, const std::vector<ReplicatePath>& paths) {
  MethodCurve curve;
  curve.method = method;
  std::size_t length = 0;
  for (const auto& p : paths) {
    if (p.ok) length = std::max(length, p.metrics.size());
  }
  for (std::size_t k = 0; k < length; ++k) {
    CurvePoint point;
    for (const auto& p : paths) {
      if (!p.ok || k >= p.metrics.size()) continue;
      point.parameter += p.parameters[k];
      point.fdr += p.metrics[k].fdr;
      point.tpr += p.metrics[k].tpr;
      ++point.replicates_used;
    }
    const auto used = static_cast<double>(point.replicates_used);
    point.parameter /= used;
    point.fdr /= used;
    point.tpr /= used;
    curve.points.push_back(point);
  }
  if (method.penalized()) {
    CurvePoint cv;
    for (const auto& p : paths) {
      if (!p.ok || !p.cv) continue;
      cv.parameter += p.cv->first;
      cv.fdr += p.cv->second.fdr;
      cv.tpr += p.cv->second.tpr;
      ++cv.replicates_used;
    }
    if (cv.replicates_used > 0) {
      const auto used = static_cast<double>(cv.replicates_used);
      cv.parameter /= used;
      cv.fdr /= used;
      cv.tpr /= used;
      curve.cv_point = cv;
    }
  }
  for (std::size_t r = 0; r < paths.size(); ++r) {
    if (paths[r].ok) {
      ++curve.replicates_ok;
    } else {
      curve.failures.push_back("replicate " + std::to_string(r) + ": " + paths[r].error);
    }
  }
  return curve;
}

std::string curve_csv(const std::string& header, const std::string& label, const std::vector<CurvePoint>& points) {
  std::ostringstream out;
  out << header << "method,s_hat_or_lambda,fdr,tpr,replicates_used\n";
  for (const auto& p : points) {
    out << label << ',' << format_number(p.parameter) << ',' << format_number(p.fdr) << ','
        << format_number(p.tpr) << ',' << p.replicates_used << '\n';
  }
  return out.str();
}

Json point_json(const CurvePoint& p) {
  return Json{{"s_hat_or_lambda", json_number(p.parameter)},
              {"fdr", json_number(p.fdr)},
              {"tpr", json_number(p.tpr)},
              {"replicates_used", p.replicates_used}};
}

}  // namespace

Matrix scale_design(const Matrix& x, Scaling scaling) {
  switch (scaling) {
    case Scaling::zscore: return standardize_columns(x, StandardizeMode::zscore);
    case Scaling::unitnorm: return standardize_columns(x, StandardizeMode::unitnorm);
    case Scaling::none: return x;
  }
  return x;
}

std::vector<SupportSet> supports_by_size(const MethodSpec& method, const Dataset& data, Index max_size,
                                         std::uint64_t budget) {
  const Index cap = std::min(max_size, data.p());
  std::vector<SupportSet> out;
  switch (method.kind) {
    case MethodSpec::Kind::iht: {
      const IhtConfig cfg{.pi = method.pi, .l = method.l, .s_hat = 1};
      const IhtResult fit = iht_run(data, cfg);
      return iht_selection_path(fit.beta, fit.gradient, method.pi, cap);
    }
    case MethodSpec::Kind::two_stage: {
      const IhtConfig cfg{.pi = method.pi, .l = method.l, .s_hat = 1};
      const IhtResult fit = iht_run(data, cfg);
      const Index top = std::min({cap, fit.support.size(), data.n()});
      for (Index s = 1; s <= top; ++s) {
        const auto count = binomial(static_cast<std::uint64_t>(fit.support.size()), static_cast<std::uint64_t>(s));
        if (count > budget) break;
        out.push_back(best_subset_on_support(data, s, fit.support, budget).best.support);
      }
      return out;
    }
    case MethodSpec::Kind::bss: {
      const Index top = std::min(cap, data.n());
      for (Index s = 1; s <= top; ++s) {
        const auto count = binomial(static_cast<std::uint64_t>(data.p()), static_cast<std::uint64_t>(s));
        if (count > budget) break;
        out.push_back(best_subset(data, s, budget).best.support);
      }
      return out;
    }
    case MethodSpec::Kind::sis:
      return sis_path(data, cap);
    case MethodSpec::Kind::lasso:
    case MethodSpec::Kind::scad:
      break;
  }
  throw InvalidArgumentError("supports_by_size: " + to_string(method.kind) + " is not size-indexed");
}

SimulateResult run_simulate(const ExperimentConfig& config, RunLog& log) {
  config.validate();
  if (!config.sim) throw InvalidArgumentError("simulate: the config needs a 'sim' section");
  if (config.methods.empty()) throw InvalidArgumentError("simulate: at least one method is required");
  SimConfig sim = *config.sim;
  sim.seed = config.seed;
  const Scaling scaling = config.scaling.value_or(Scaling::zscore);
  const SimulationDesign design(sim);
  const auto replicates = static_cast<std::size_t>(config.replicates);
  const std::size_t methods = config.methods.size();
  log.add("command: simulate");
  log.add("seed: " + std::to_string(config.seed));
  log.add("design: n=" + std::to_string(sim.n()) + " p=" + std::to_string(sim.p) + " s=" +
          std::to_string(sim.s) + " covariance=" + std::string(to_string(sim.cov.kind)) +
          " standardize=" + to_string(scaling));

  // Indexed slots: results do not depend on scheduling order.
  std::vector<std::vector<ReplicatePath>> slots(methods, std::vector<ReplicatePath>(replicates));
  const RngStream cv_root = RngStream(config.seed).split(kCvStream);
#ifdef _OPENMP
  const int threads = config.threads > 0 ? config.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(replicates); ++r) {
    const auto ur = static_cast<std::size_t>(r);
    std::optional<SimulatedReplicate> rep;
    std::string error;
    try {
      rep = design.replicate(ur);
      rep->data = rep->data.with_design(scale_design(rep->data.x(), scaling));
    } catch (const std::exception& e) {
      error = std::string("data generation failed: ") + e.what();
    }
    for (std::size_t m = 0; m < methods; ++m) {
      if (!rep) {
        slots[m][ur].error = error;
        continue;
      }
      try {
        slots[m][ur] = method_path(config.methods[m], rep->data, rep->truth, config, cv_root.split(ur).seed());
      } catch (const std::exception& e) {
        slots[m][ur] = ReplicatePath{};
        slots[m][ur].error = e.what();
      }
    }
  }

  SimulateResult result;
  const Json resolved = to_json(config);
  const std::string header = provenance_header(resolved, config.seed);
  Json report;
  report["command"] = "simulate";
  report["seed"] = config.seed;
  report["config"] = resolved;
  report["methods"] = Json::array();
  for (std::size_t m = 0; m < methods; ++m) {
    MethodCurve curve = aggregate(config.methods[m], slots[m]);
    const std::string& label = curve.method.label;
    const std::string curve_file = "curve_" + label + ".csv";
    write_file(config.out_dir / curve_file, curve_csv(header, label, curve.points));
    Json entry;
    entry["label"] = label;
    entry["method"] = to_string(curve.method.kind);
    entry["curve_file"] = curve_file;
    entry["points"] = curve.points.size();
    entry["replicates_ok"] = curve.replicates_ok;
    entry["replicates_failed"] = curve.failures.size();
    entry["failures"] = curve.failures;
    if (curve.cv_point) {
      const std::string cv_file = "cvpoint_" + label + ".csv";
      write_file(config.out_dir / cv_file, curve_csv(header, label, {*curve.cv_point}));
      entry["cv_point"] = point_json(*curve.cv_point);
      entry["cv_file"] = cv_file;
    }
    log.add("method " + label + ": " + std::to_string(curve.replicates_ok) + "/" + std::to_string(replicates) +
            " replicates, " + std::to_string(curve.points.size()) + " curve points");
    for (const auto& f : curve.failures) log.add("method " + label + ": excluded " + f);
    report["methods"].push_back(std::move(entry));
    result.curves.push_back(std::move(curve));
  }
  write_file(config.out_dir / "simulate.json", report.dump(2) + "\n");
  log.save(config.out_dir / "run.log");
  return result;
}

}  // namespace sparsesel::app
