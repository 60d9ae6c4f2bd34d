// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
//
//   acceptance [--jobs N] [--runs N]
//
// --runs lowers the Monte-Carlo run count for quick local checks; the
// registered ctest uses the defaults.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hcp/conformal.hpp"
#include "hcp/experiment.hpp"
#include "hcp/kernels.hpp"
#include "hcp/linalg.hpp"
#include "hcp/projection.hpp"
#include "hcp/regression.hpp"
#include "support.hpp"

namespace {

using namespace hcp;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(const std::string& name, const Verdict& v, double seconds) {
  if (!v.pass) ++failures;
  std::printf("%s  %-34s %s  [%.1fs]\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str(), seconds);
  std::fflush(stdout);
}

void check(const std::string& name, const std::function<Verdict()>& body) {
  const auto start = Clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  report(name, v, std::chrono::duration<double>(Clock::now() - start).count());
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Standard error of the mean (sample standard deviation / sqrt(n)).
double std_error(const std::vector<double>& v) {
  const double mu = mean(v);
  double ss = 0;
  for (double x : v) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
}

const std::vector<Method> kFiveMethods{Method::Direct, Method::OLS, Method::WLS, Method::MinT, Method::Combi};

// ---- full pipeline: coverage, ellipsoid shrink, WLS gain --------------------

Verdict coverage_sandwich(const MonteCarloResult& mc, const ExperimentConfig& config, double seconds) {
  double lo = 1, hi = 0;
  std::string worst;
  for (Method m : kFiveMethods) {
    const MethodSummary* ms = mc.summary.find(method_name(m));
    if (!ms || ms->failures > 0)
      return {false, std::string(method_name(m)) + " failed in " + std::to_string(ms ? ms->failures : config.runs) + " runs"};
    for (std::size_t i = 1; i <= config.hierarchy->m(); ++i) {
      const double c = ms->find("coverage:" + std::to_string(i))->mean;
      if (c < lo || c > hi) worst = std::string(method_name(m)) + " node " + std::to_string(i);
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
  }
  const bool pass = lo >= 0.895 && hi <= 0.906 && seconds < 600.0;
  return {pass, fmt("per-node mean coverage in [%.4f, %.4f], band [0.895, 0.906]; runtime %.0fs < 600s", lo, hi, seconds) +
                    (pass ? "" : "; extreme at " + worst)};
}

Verdict ellipsoid_shrink(const MonteCarloResult& mc, const ExperimentConfig& config) {
  std::ostringstream detail;
  bool pass = true;
  for (AMatrixChoice a : config.a_matrices) {
    std::size_t n = 0, shrink = 0, strict = 0;
    for (const RunResult& r : mc.runs) {
      const MethodResult* plain = r.find(ellipsoid_method_name(false, a));
      const MethodResult* rec = r.find(ellipsoid_method_name(true, a));
      if (!plain || !rec || !plain->ok || !rec->ok) continue;
      ++n;
      // Exact inequality up to the rounding of two order statistics.
      if (rec->radius <= plain->radius * (1 + 1e-12)) ++shrink;
      if (rec->radius < plain->radius * (1 - 1e-9)) ++strict;
    }
    const bool ok = n == mc.runs.size() && shrink == n && static_cast<double>(strict) >= 0.9 * static_cast<double>(n);
    pass = pass && ok;
    detail << a_matrix_name(a) << ": " << shrink << "/" << n << " shrink, " << strict << " strict; ";
  }
  detail << "need all runs, 100% shrink, >=90% strict";
  return {pass, detail.str()};
}

Verdict wls_gain(const MonteCarloResult& mc) {
  const MethodSummary* direct = mc.summary.find("direct");
  const MethodSummary* wls = mc.summary.find("wls");
  if (!direct || !wls || direct->metrics.empty() || wls->metrics.empty()) return {false, "missing summaries"};
  const double d = direct->find("root_total_sq_length")->mean;
  const double w = wls->find("root_total_sq_length")->mean;
  return {w <= 0.85 * d, fmt("sqrt(L) wls %.1f vs direct %.1f, ratio %.3f <= 0.85", w, d, w / d)};
}

// ---- direct-score Monte Carlo: efficiency -----------------------------------

ExperimentConfig direct_config(SphericalFamily family, std::size_t runs) {
  ExperimentConfig c;
  c.hierarchy_id = "a1";
  c.hierarchy = builtin_hierarchy("a1");
  c.t = 20000;
  c.runs = runs;
  c.mode = ScoreMode::DirectScores;
  c.direct.family = family;
  c.methods = {Method::Direct, Method::OLS, Method::MinT};
  c.a_matrices = {};
  return c;
}

Verdict unit_weight_efficiency(const MonteCarloResult& gauss, const MonteCarloResult& student) {
  std::ostringstream detail;
  bool pass = true;
  for (const auto* mc : {&gauss, &student}) {
    std::vector<double> diff;
    for (const RunResult& r : mc->runs) diff.push_back(r.find("direct")->total_sq_length - r.find("ols")->total_sq_length);
    const double d = mean(diff), se = std_error(diff);
    pass = pass && d > 2 * se;
    detail << (mc == &gauss ? "gaussian" : "student_t(4)") << ": Id - P_1 = " << fmt("%.2f", d) << " > 2*SE "
           << fmt("%.2f", 2 * se) << "; ";
  }
  detail << "paired over runs";
  return {pass, detail.str()};
}

Verdict oracle_dominance(const MonteCarloResult& gauss, const MonteCarloResult& student, Eigen::Index m) {
  std::ostringstream detail;
  bool pass = true;
  int violations = 0;
  double worst = -1e300;
  for (const auto* mc : {&gauss, &student}) {
    for (const char* other : {"ols", "direct"}) {
      for (Eigen::Index i = 0; i < m; ++i) {
        std::vector<double> diff;
        for (const RunResult& r : mc->runs) diff.push_back(r.find("mint")->sq_length(i) - r.find(other)->sq_length(i));
        const double d = mean(diff), se = std_error(diff);
        worst = std::max(worst, d / (se > 0 ? se : 1.0));
        if (d > 2 * se) {
          ++violations;
          pass = false;
        }
      }
    }
  }
  detail << "per-component (mint - {ols, direct}) <= 2 SE for all " << m << " nodes, both families; violations "
         << violations << ", max diff/SE " << fmt("%.2f", worst);
  return {pass, detail.str()};
}

// ---- randomized linear-algebra properties -------------------------------------

Verdict minimum_trace(int trials) {
  test::Rng rng(20240101);
  int violations = 0, max_m = 0;
  for (int t = 0; t < trials; ++t) {
    const Hierarchy h = test::random_tree(rng, 12);
    const auto m = static_cast<Eigen::Index>(h.m());
    max_m = std::max(max_m, static_cast<int>(m));
    const Eigen::MatrixXd sigma = test::random_pd(rng, m, 0.05);
    Eigen::VectorXd w = test::random_matrix(rng, m, 1).cwiseAbs();
    for (Eigen::Index i = 0; i < m; ++i)
      if (std::uniform_real_distribution<double>(0, 1)(rng) < 0.2) w(i) = 0.0;
    const SymmetricMatrix wm = SymmetricMatrix::diagonal(w);
    const Eigen::MatrixXd best = reconciliation_matrix_oracle(Method::MinT, h, SymmetricMatrix(sigma)).p;
    const Eigen::MatrixXd p = test::random_projection_onto(rng, h.h(), t % 2 ? 1.0 : 0.1);
    const double lhs = trace_of_product(wm, best * sigma * best.transpose());
    const double rhs = trace_of_product(wm, p * sigma * p.transpose());
    if (!(lhs <= rhs + 1e-8 * std::abs(trace_of_product(wm, sigma)))) ++violations;
  }
  return {violations == 0, std::to_string(trials) + " trials (m <= " + std::to_string(max_m) +
                               "), violations " + std::to_string(violations)};
}

Verdict trace_reduction(int trials) {
  test::Rng rng(20240102);
  int violations = 0;
  for (int t = 0; t < trials; ++t) {
    const Hierarchy h = test::random_tree(rng, 12);
    const auto m = static_cast<Eigen::Index>(h.m());
    // Alternate general PD weights with the positive diagonal ones used for lengths.
    const Eigen::MatrixXd w = t % 2 ? test::random_pd(rng, m, 0.05)
                                    : Eigen::MatrixXd((test::random_matrix(rng, m, 1).cwiseAbs().array() + 0.01)
                                                          .matrix()
                                                          .asDiagonal());
    const SymmetricMatrix wm(w);
    const Eigen::MatrixXd mm = test::random_matrix(rng, m, 1 + t % (2 * m));
    const Eigen::MatrixXd pw = projection_from_weight(h, wm).p;
    const Eigen::MatrixXd g = mm * mm.transpose();
    const double full = trace_of_product(wm, g);
    const double reduced = trace_of_product(wm, pw * g * pw.transpose());
    const double tol = 1e-10 * std::abs(full);
    if (!(reduced >= -tol && reduced <= full + tol)) ++violations;
  }
  return {violations == 0, std::to_string(trials) + " trials, violations " + std::to_string(violations)};
}

// ---- conformal conventions ---------------------------------------------------

Verdict identity_reduction(int inputs) {
  test::Rng rng(20240103);
  int mismatches = 0;
  for (int k = 0; k < inputs; ++k) {
    const Hierarchy h = k % 2 ? Hierarchy::type_a(1) : Hierarchy::type_b(1);
    const auto m = static_cast<Eigen::Index>(h.m());
    const Eigen::MatrixXd x_train = 3.0 * test::random_matrix(rng, 200, 3);
    const auto reg = fit({}, x_train, test::random_matrix(rng, 200, m) * 10.0);
    const Eigen::Index t_calib = 20 + k * 7;
    const Eigen::MatrixXd x = 3.0 * test::random_matrix(rng, t_calib, 3);
    const Eigen::MatrixXd y = 10.0 * test::random_matrix(rng, t_calib, static_cast<Eigen::Index>(h.n())) * h.h().transpose();
    const double alpha = 0.05 + 0.3 * (k % 10) / 10.0;
    const RectangleModel plain = calibrate_plain_rectangles(reg, x, y, alpha);
    const RectangleModel via_p = calibrate_rectangles(reg, reconciliation_matrix(Method::Direct, h), x, y, alpha);
    const auto bytes = static_cast<std::size_t>(m) * sizeof(double);
    if (std::memcmp(plain.lo_offsets.data(), via_p.lo_offsets.data(), bytes) != 0 ||
        std::memcmp(plain.hi_offsets.data(), via_p.hi_offsets.data(), bytes) != 0)
      ++mismatches;
    const Eigen::MatrixXd x_new = 3.0 * test::random_matrix(rng, 5, 3);
    for (Eigen::Index r = 0; r < x_new.rows(); ++r) {
      const Eigen::VectorXd a = plain.center(x_new.row(r).transpose());
      const Eigen::VectorXd b = via_p.center(x_new.row(r).transpose());
      if (std::memcmp(a.data(), b.data(), bytes) != 0) ++mismatches;
    }
  }
  return {mismatches == 0, std::to_string(inputs) + " random inputs, bitwise mismatches " + std::to_string(mismatches)};
}

Verdict whole_line_edge_case() {
  test::Rng rng(20240104);
  const Hierarchy h = Hierarchy::type_a(1);
  const auto reg = fit({}, test::random_matrix(rng, 100, 3), test::random_matrix(rng, 100, 16));
  const Eigen::MatrixXd x = test::random_matrix(rng, 9, 3);
  const Eigen::MatrixXd y = test::random_matrix(rng, 9, 12) * h.h().transpose();
  const RectangleModel model = calibrate_plain_rectangles(reg, x, y, 0.1);
  const bool whole_line = (model.lo_offsets.array() == -INFINITY).all() && (model.hi_offsets.array() == INFINITY).all();
  std::size_t covered = 0, total = 0;
  const Eigen::MatrixXd x_test = test::random_matrix(rng, 1000, 3);
  const Eigen::MatrixXd y_test = 1e8 * test::random_matrix(rng, 1000, 16);
  for (Eigen::Index r = 0; r < x_test.rows(); ++r)
    for (bool in : region_contains(model, x_test.row(r).transpose(), y_test.row(r).transpose())) {
      covered += in;
      ++total;
    }
  const double coverage = static_cast<double>(covered) / static_cast<double>(total);
  return {whole_line && coverage == 1.0,
          std::string(whole_line ? "intervals are (-inf, +inf)" : "intervals are finite") + fmt(", coverage %.6f", coverage)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  unsigned jobs = 1;
  std::size_t runs = 200;
  app.add_option("--jobs", jobs, "worker threads for the Monte-Carlo runs");
  app.add_option("--runs", runs, "Monte-Carlo runs (criteria are pinned at 200)");
  CLI11_PARSE(app, argc, argv);

  std::printf("kernel backend: %s\n", std::string(kernels::backend_name(kernels::active_backend())).c_str());

  check("min-trace projection", [] { return minimum_trace(1000); });
  check("trace reduction", [] { return trace_reduction(1000); });
  check("identity projection reduction", [] { return identity_reduction(50); });
  check("whole-line intervals", [] { return whole_line_edge_case(); });

  ExperimentConfig pipeline;
  pipeline.hierarchy_id = "a1";
  pipeline.hierarchy = builtin_hierarchy("a1");
  pipeline.t = 20000;
  pipeline.runs = runs;
  pipeline.alpha = 0.1;
  pipeline.methods = kFiveMethods;
  pipeline.a_matrices = {AMatrixChoice::Identity, AMatrixChoice::Diag, AMatrixChoice::Full};
  const auto start = Clock::now();
  MonteCarloResult mc;
  bool mc_ok = true;
  try {
    mc = monte_carlo(pipeline, runs, jobs);
  } catch (const std::exception& e) {
    mc_ok = false;
    std::printf("pipeline Monte Carlo failed: %s\n", e.what());
  }
  const double mc_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (mc_ok) {
    check("coverage sandwich", [&] { return coverage_sandwich(mc, pipeline, mc_seconds); });
    check("ellipsoid shrink", [&] { return ellipsoid_shrink(mc, pipeline); });
    check("wls practical gain", [&] { return wls_gain(mc); });
  } else {
    for (const char* name : {"coverage sandwich", "ellipsoid shrink", "wls practical gain"})
      report(name, {false, "Monte Carlo did not complete"}, mc_seconds);
  }

  MonteCarloResult gauss, student;
  check("unit-weight efficiency", [&] {
    gauss = monte_carlo(direct_config({SphericalKind::Gaussian}, runs), runs, jobs);
    student = monte_carlo(direct_config({SphericalKind::StudentT, 4.0}, runs), runs, jobs);
    return unit_weight_efficiency(gauss, student);
  });
  check("oracle min-trace dominance", [&] {
    if (gauss.runs.empty() || student.runs.empty()) return Verdict{false, "direct-score runs missing"};
    return oracle_dominance(gauss, student, static_cast<Eigen::Index>(pipeline.hierarchy->m()));
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
