#include "hcp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "hcp/conformal.hpp"
#include "hcp/datagen.hpp"
#include "hcp/error.hpp"
#include "hcp/regression.hpp"

namespace hcp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::size_t floor_fraction(double f, std::size_t t) {
  const double v = f * static_cast<double>(t);
  const double r = std::round(v);
  return static_cast<std::size_t>(std::abs(v - r) <= 1e-9 * std::max(1.0, v) ? r : std::floor(v));
}

Eigen::MatrixXd rows_of(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& idx) { return m(idx, Eigen::all); }

MethodResult failed(std::string name, bool ellipsoid, const Error& e) {
  MethodResult r;
  r.name = std::move(name);
  r.ellipsoid = ellipsoid;
  r.ok = false;
  r.status = std::string("failed:") + e.kind();
  return r;
}

// Calibration/test residuals shared by every method of a run. For the
// pipeline these are y - mu(x); projecting them by P gives y - P mu(x) because
// y is coherent and P H = H.
struct ScoreSets {
  Eigen::MatrixXd calib_targets, calib_pred;
  Eigen::MatrixXd test_targets, test_pred;
};

Eigen::MatrixXd signed_scores(const Eigen::MatrixXd& targets, const Eigen::MatrixXd& pred, const Eigen::MatrixXd* p) {
  if (p == nullptr) return targets - pred;
  return targets - pred * p->transpose();
}

MethodResult evaluate_rectangles(std::string name, const ScoreSets& s, const ProjectionMatrix& p, double alpha) {
  MethodResult r;
  r.name = std::move(name);
  const Eigen::MatrixXd cal = signed_scores(s.calib_targets, s.calib_pred, &p.p);
  const IntervalOffsets off = calibrate_offsets(cal, alpha);
  const Eigen::MatrixXd test = signed_scores(s.test_targets, s.test_pred, &p.p);
  r.coverage = component_coverage(test, off);
  r.joint_coverage = rectangle_joint_coverage(test, off);
  r.sq_length = (off.hi - off.lo).array().square();
  r.total_sq_length = r.sq_length.sum();
  return r;
}

MethodResult evaluate_ellipsoid(std::string name, const ScoreSets& s, const SymmetricMatrix& a,
                                const Eigen::MatrixXd* p, double alpha) {
  MethodResult r;
  r.name = std::move(name);
  r.ellipsoid = true;
  r.radius = calibrate_radius(a_norm_scores(signed_scores(s.calib_targets, s.calib_pred, p), a), alpha);
  r.joint_coverage = ball_coverage(a_norm_scores(signed_scores(s.test_targets, s.test_pred, p), a), r.radius);
  try {
    r.volume = normalized_volume(a, r.radius);
  } catch (const NotPositiveDefinite&) {
    // ||.||_A is only a seminorm: the region is unbounded.
    r.volume = kInf;
    r.status = "seminorm";
  }
  return r;
}

SymmetricMatrix a_matrix_for(AMatrixChoice choice, const SymmetricMatrix* sigma, Eigen::Index m) {
  switch (choice) {
    case AMatrixChoice::Identity: return SymmetricMatrix::identity(m);
    case AMatrixChoice::Diag:
      if (!sigma) break;
      return pseudo_inverse(SymmetricMatrix::diagonal(sigma->data().diagonal()));
    case AMatrixChoice::Full:
      if (!sigma) break;
      return pseudo_inverse(*sigma);
  }
  throw InsufficientData("A matrix '" + std::string(a_matrix_name(choice)) + "' needs a covariance estimate");
}

void evaluate_all(const ExperimentConfig& config, const ScoreSets& scores, const CovarianceEstimate* cov,
                  RunResult& out) {
  const Hierarchy& h = *config.hierarchy;
  const auto m = static_cast<Eigen::Index>(h.m());
  const SymmetricMatrix* sigma = cov ? &cov->sigma_hat : nullptr;

  for (Method method : config.methods) {
    std::string name(method_name(method));
    try {
      if (!cov && method != Method::Direct && method != Method::OLS)
        throw InsufficientData("estimation split too small to estimate the residual covariance");
      const ProjectionMatrix p = reconciliation_matrix(method, h, cov, config.mint_ridge);
      out.methods.push_back(evaluate_rectangles(name, scores, p, config.alpha));
    } catch (const Error& e) {
      out.methods.push_back(failed(name, false, e));
    }
  }

  for (AMatrixChoice choice : config.a_matrices) {
    const std::string plain = ellipsoid_method_name(false, choice);
    const std::string reconciled = ellipsoid_method_name(true, choice);
    std::optional<SymmetricMatrix> a;
    try {
      a = a_matrix_for(choice, sigma, m);
      out.methods.push_back(evaluate_ellipsoid(plain, scores, *a, nullptr, config.alpha));
    } catch (const Error& e) {
      out.methods.push_back(failed(plain, true, e));
    }
    try {
      if (!a) throw InsufficientData("A matrix unavailable");
      const ProjectionMatrix pa = projection_from_weight(h, *a, std::string(a_matrix_name(choice)));
      out.methods.push_back(evaluate_ellipsoid(reconciled, scores, *a, &pa.p, config.alpha));
    } catch (const Error& e) {
      out.methods.push_back(failed(reconciled, true, e));
    }
  }
}

RunResult run_pipeline(const ExperimentConfig& config, std::uint64_t seed, std::size_t run_id) {
  RunResult out{run_id, seed, {}, {}};
  Rng rng(seed);
  auto start = Clock::now();
  const ExperimentSpec spec = [&] {
    ExperimentSpec s = draw_spec(config.hierarchy, rng);
    s.noise_family = config.noise_family;
    return s;
  }();
  const Dataset data = generate(spec, static_cast<Eigen::Index>(config.t), rng);
  const SplitPlan plan = split(config.t, config.fractions, rng);
  out.timings["generate"] = seconds_since(start);

  start = Clock::now();
  const auto regressor = fit({config.ridge_lambda, spec.masks}, rows_of(data.features, plan.train),
                             rows_of(data.targets, plan.train));
  out.timings["fit"] = seconds_since(start);

  start = Clock::now();
  ScoreSets scores{rows_of(data.targets, plan.calib), regressor->predict_batch(rows_of(data.features, plan.calib)),
                   rows_of(data.targets, plan.test), regressor->predict_batch(rows_of(data.features, plan.test))};

  std::optional<CovarianceEstimate> cov;
  if (plan.est.size() >= 2) {
    const Eigen::MatrixXd est_residuals =
        rows_of(data.targets, plan.est) - regressor->predict_batch(rows_of(data.features, plan.est));
    cov = estimate_covariance(est_residuals);
  }
  evaluate_all(config, scores, cov ? &*cov : nullptr, out);
  out.timings["conformal"] = seconds_since(start);
  return out;
}

RunResult run_direct(const ExperimentConfig& config, std::uint64_t seed, std::size_t run_id) {
  RunResult out{run_id, seed, {}, {}};
  const auto m = static_cast<Eigen::Index>(config.hierarchy->m());
  const EllipticalSpec law = make_direct_score_spec(config.direct, m);
  const SymmetricMatrix oracle(law.scatter());

  Rng rng(seed);
  const auto start = Clock::now();
  const SplitPlan plan = split(config.t, config.fractions, rng);
  const auto t_calib = static_cast<Eigen::Index>(plan.calib.size());
  const auto t_test = static_cast<Eigen::Index>(plan.test.size());
  // Scores play the role of y - mu(x): targets are the scores, predictions zero.
  ScoreSets scores{sample_elliptical(law, t_calib, rng), Eigen::MatrixXd::Zero(t_calib, m),
                   sample_elliptical(law, t_test, rng), Eigen::MatrixXd::Zero(t_test, m)};
  // y - P mu = P (y - mu) holds for coherent y; here we apply P to the scores directly.
  for (Method method : config.methods) {
    std::string name(method_name(method));
    try {
      const ProjectionMatrix p = reconciliation_matrix_oracle(method, *config.hierarchy, oracle);
      MethodResult r;
      r.name = name;
      const Eigen::MatrixXd cal = scores.calib_targets * p.p.transpose();
      const IntervalOffsets off = calibrate_offsets(cal, config.alpha);
      const Eigen::MatrixXd test = scores.test_targets * p.p.transpose();
      r.coverage = component_coverage(test, off);
      r.joint_coverage = rectangle_joint_coverage(test, off);
      r.sq_length = (off.hi - off.lo).array().square();
      r.total_sq_length = r.sq_length.sum();
      out.methods.push_back(std::move(r));
    } catch (const Error& e) {
      out.methods.push_back(failed(name, false, e));
    }
  }
  for (AMatrixChoice choice : config.a_matrices) {
    const SymmetricMatrix a = a_matrix_for(choice, &oracle, m);
    out.methods.push_back(evaluate_ellipsoid(ellipsoid_method_name(false, choice), scores, a, nullptr, config.alpha));
    try {
      const ProjectionMatrix pa = projection_from_weight(*config.hierarchy, a);
      // Scores are residuals here, so the reconciled residual is P_A s.
      ScoreSets projected{scores.calib_targets * pa.p.transpose(), scores.calib_pred,
                          scores.test_targets * pa.p.transpose(), scores.test_pred};
      out.methods.push_back(
          evaluate_ellipsoid(ellipsoid_method_name(true, choice), projected, a, nullptr, config.alpha));
    } catch (const Error& e) {
      out.methods.push_back(failed(ellipsoid_method_name(true, choice), true, e));
    }
  }
  out.timings["conformal"] = seconds_since(start);
  return out;
}

void validate(const ExperimentConfig& config) {
  if (!config.hierarchy) throw ConfigError("experiment: no hierarchy configured");
  if (!(config.alpha > 0 && config.alpha < 1)) throw ConfigError("alpha must lie in (0,1)");
  if (config.methods.empty() && config.a_matrices.empty()) throw ConfigError("no methods requested");
  double total = 0.0;
  for (double f : config.fractions) {
    if (!(f >= 0.0 && f <= 1.0)) throw ConfigError("split fractions must lie in [0,1]");
    total += f;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("split fractions must sum to 1");
  if (config.t == 0) throw ConfigError("t must be positive");
}

}  // namespace

std::string_view a_matrix_name(AMatrixChoice a) noexcept {
  switch (a) {
    case AMatrixChoice::Identity: return "identity";
    case AMatrixChoice::Diag: return "diag";
    case AMatrixChoice::Full: return "full";
  }
  return "unknown";
}

AMatrixChoice parse_a_matrix(std::string_view s) {
  for (AMatrixChoice a : {AMatrixChoice::Identity, AMatrixChoice::Diag, AMatrixChoice::Full})
    if (s == a_matrix_name(a)) return a;
  throw ConfigError("unknown A matrix '" + std::string(s) + "' (expected identity|diag|full)");
}

EllipticalSpec make_direct_score_spec(const DirectScoreSpec& d, Eigen::Index m) {
  Rng rng(d.mixing_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  EllipticalSpec spec;
  spec.family = d.family;
  spec.center = Eigen::VectorXd::Constant(m, d.center);
  spec.mixing.resize(m, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < m; ++i) spec.mixing(i, j) = normal(rng);
  return spec;
}

std::shared_ptr<const Hierarchy> builtin_hierarchy(std::string_view id) {
  static const std::array<std::string_view, 6> names{"a1", "b1", "a2", "b2", "a3", "b3"};
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (id == names[i] || id == std::to_string(i + 1)) {
      const int k = static_cast<int>(i / 2) + 1;
      return std::make_shared<const Hierarchy>(names[i][0] == 'a' ? Hierarchy::type_a(k) : Hierarchy::type_b(k));
    }
  }
  throw ConfigError("unknown hierarchy id '" + std::string(id) + "' (expected a1|a2|a3|b1|b2|b3|1..6|custom:PATH)");
}

SplitPlan split(std::size_t t, const std::array<double, 4>& fractions, Rng& rng) {
  double sum = 0.0;
  for (double f : fractions) {
    if (!(f >= 0.0 && f <= 1.0)) throw ConfigError("split fractions must lie in [0,1]");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("split fractions must sum to 1");
  const std::size_t n_est = floor_fraction(fractions[1], t);
  const std::size_t n_calib = floor_fraction(fractions[2], t);
  const std::size_t n_test = floor_fraction(fractions[3], t);
  // An empty estimation split is allowed: covariance-based methods then fail per run.
  if (n_calib == 0 || n_test == 0 || n_est + n_calib + n_test >= t)
    throw ConfigError("t=" + std::to_string(t) + " is too small for non-empty train, calibration and test splits");

  std::vector<Eigen::Index> perm(t);
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  std::shuffle(perm.begin(), perm.end(), rng);

  SplitPlan plan;
  const std::size_t n_train = t - n_est - n_calib - n_test;
  auto take = [&, pos = std::size_t{0}](std::vector<Eigen::Index>& dst, std::size_t count) mutable {
    dst.assign(perm.begin() + static_cast<std::ptrdiff_t>(pos), perm.begin() + static_cast<std::ptrdiff_t>(pos + count));
    std::sort(dst.begin(), dst.end());
    pos += count;
  };
  take(plan.train, n_train);
  take(plan.est, n_est);
  take(plan.calib, n_calib);
  take(plan.test, n_test);
  return plan;
}

const MethodResult* RunResult::find(std::string_view name) const {
  for (const auto& m : methods)
    if (m.name == name) return &m;
  return nullptr;
}

std::string ellipsoid_method_name(bool reconciled, AMatrixChoice a) {
  return std::string(reconciled ? "ellipsoid_reconciled:" : "ellipsoid_plain:") + std::string(a_matrix_name(a));
}

RunResult run_once(const ExperimentConfig& config, std::uint64_t seed, std::size_t run_id) {
  validate(config);
  return config.mode == ScoreMode::Pipeline ? run_pipeline(config, seed, run_id) : run_direct(config, seed, run_id);
}

const MetricSummary* MethodSummary::find(std::string_view metric) const {
  for (const auto& m : metrics)
    if (m.metric == metric) return &m;
  return nullptr;
}

const MethodSummary* McSummary::find(std::string_view method) const {
  for (const auto& m : methods)
    if (m.method == method) return &m;
  return nullptr;
}

MetricSummary summarize_values(std::string metric, const std::vector<double>& values) {
  MetricSummary s;
  s.metric = std::move(metric);
  double sum = 0.0;
  for (double v : values)
    if (std::isfinite(v)) {
      sum += v;
      ++s.n;
    }
  if (s.n == 0) {
    // Every run reported +inf (e.g. volumes under a singular A): keep it visible.
    const bool all_inf = !values.empty() && std::all_of(values.begin(), values.end(), [](double v) {
      return v == std::numeric_limits<double>::infinity();
    });
    s.mean = all_inf ? std::numeric_limits<double>::infinity() : std::numeric_limits<double>::quiet_NaN();
    s.gamma = all_inf ? 0.0 : std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  const double n = static_cast<double>(s.n);
  s.mean = sum / n;
  double ss = 0.0;
  for (double v : values)
    if (std::isfinite(v)) ss += (v - s.mean) * (v - s.mean);
  s.gamma = 1.96 * std::sqrt(ss / n) / std::sqrt(n);
  return s;
}

McSummary summarize(const std::vector<RunResult>& runs) {
  McSummary out;
  out.n_runs = runs.size();
  if (runs.empty()) return out;

  // Method order follows the first run.
  for (const MethodResult& proto : runs.front().methods) {
    MethodSummary ms;
    ms.method = proto.name;
    ms.runs = runs.size();
    std::vector<const MethodResult*> ok;
    for (const RunResult& r : runs) {
      const MethodResult* mr = r.find(proto.name);
      if (mr && mr->ok)
        ok.push_back(mr);
      else
        ++ms.failures;
    }
    auto collect = [&](auto getter) {
      std::vector<double> v;
      v.reserve(ok.size());
      for (const MethodResult* mr : ok) v.push_back(getter(*mr));
      return v;
    };
    if (ok.empty()) {
      // Metrics are absent; only the failure count is reported.
    } else if (proto.ellipsoid) {
      ms.metrics.push_back(summarize_values("joint_coverage", collect([](const MethodResult& r) { return r.joint_coverage; })));
      ms.metrics.push_back(summarize_values("radius", collect([](const MethodResult& r) { return r.radius; })));
      ms.metrics.push_back(summarize_values("volume", collect([](const MethodResult& r) { return r.volume; })));
    } else {
      const Eigen::Index m = ok.front()->coverage.size();
      for (Eigen::Index i = 0; i < m; ++i)
        ms.metrics.push_back(summarize_values("coverage:" + std::to_string(i + 1),
                                              collect([i](const MethodResult& r) { return r.coverage(i); })));
      for (Eigen::Index i = 0; i < m; ++i)
        ms.metrics.push_back(summarize_values("sq_length:" + std::to_string(i + 1),
                                              collect([i](const MethodResult& r) { return r.sq_length(i); })));
      ms.metrics.push_back(summarize_values("joint_coverage", collect([](const MethodResult& r) { return r.joint_coverage; })));
      MetricSummary total = summarize_values("total_sq_length", collect([](const MethodResult& r) { return r.total_sq_length; }));
      // Reported as sqrt(mean) +- sqrt(gamma): the widened symmetric interval.
      MetricSummary root{"root_total_sq_length", std::sqrt(total.mean), std::sqrt(total.gamma), total.n};
      ms.metrics.push_back(total);
      ms.metrics.push_back(root);
    }
    out.methods.push_back(std::move(ms));
  }
  return out;
}

MonteCarloResult monte_carlo(const ExperimentConfig& config, std::size_t n_runs, unsigned parallelism) {
  validate(config);
  if (n_runs < 2) throw ConfigError("monte_carlo: need at least 2 runs, got " + std::to_string(n_runs));
  MonteCarloResult out;
  out.runs.resize(n_runs);

  const unsigned workers = std::max(1u, std::min<unsigned>(parallelism, static_cast<unsigned>(n_runs)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n_runs; i = next++) {
      try {
        out.runs[i] = run_once(config, config.seed + i, i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n_runs;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  out.summary = summarize(out.runs);
  return out;
}

}  // namespace hcp
