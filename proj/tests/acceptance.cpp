// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "riesz/cli.hpp"
#include "riesz/convergence.hpp"
#include "riesz/scenario_io.hpp"
#include "riesz/scenarios.hpp"
#include "support.hpp"

using namespace riesz;
namespace rt = riesz::testing;

namespace {

const std::filesystem::path kSource = RIESZ_SOURCE_DIR;

// Tolerances are fixed here and nowhere else.
constexpr double kTransformTol = 1e-12;
constexpr double kCounterexampleSeconds = 1.0;
constexpr double kMarkovSlack = 1e-12;
constexpr double kLawSlack = 1e-12;
constexpr double kRoundtripTol = 1e-9;
constexpr double kRowSumTol = 1e-12;
constexpr double kTauberianExpected = 0.102;
constexpr double kTauberianBand = 0.01;
constexpr double kBlockTailTol = 1e-2;
constexpr double kDeltaTol = 0.05;
constexpr double kFitResidual = 1e-6;
constexpr double kQuadratureTol = 1e-4;

struct Outcome {
  bool passed = true;
  std::string detail;
};

Outcome fail(const std::string& detail) { return {false, detail}; }

std::string fmt(const char* format, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, format, a, b);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome counterexample() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = oscillating_counterexample();
  const auto nu = riesz_transform(s.sequence(), s.weights);
  double worst = 0.0;
  for (std::size_t n = 1; n <= s.horizon; ++n) {
    const double expected = n % 2 == 1 ? 0.5 + 0.5 / static_cast<double>(n) : 0.5;
    worst = std::max(worst, std::abs(nu.value(n, 0) - expected));
  }
  const auto report = classify(s);
  const double elapsed = seconds_since(t0);
  if (!(worst <= kTransformTol)) return fail(fmt("max |nu_n - expected| = %.3e", worst));
  if (report.verdict("f") != Verdict::fail) return fail("f verdict is not fail");
  if (report.verdict("f_R") != Verdict::pass) return fail("f_R verdict is not pass");
  if (!(elapsed < kCounterexampleSeconds)) return fail(fmt("took %.3f s", elapsed));
  return {true, fmt("max |nu_n - expected| = %.1e, %.3f s", worst, elapsed)};
}

Outcome markov() {
  auto rng = rt::make_rng(1002);
  const std::vector<OrliczSpec> phis{OrliczSpec::identity(), OrliczSpec::power(2.0), OrliczSpec::expm1()};
  std::size_t checks = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto space = rt::random_space(rng, rt::uniform_index(rng, 1, 8));
    const UncertainVariable var(rt::random_values(rng, space.size(), -3.0, 3.0));
    double top = 0.0;
    for (double v : var) top = std::max(top, std::abs(v));
    if (top == 0.0) continue;
    const double t = top * (1.0 - rt::uniform(rng, 0.0, 1.0));
    if (t <= 0.0) continue;
    for (const auto& phi : phis) {
      const auto c = markov_check(space, var, phi, t);
      ++checks;
      if (!c.holds(kMarkovSlack)) {
        return fail("trial " + std::to_string(trial) + " " + phi.name() + fmt(": %.17g > %.17g", c.lhs, c.rhs));
      }
    }
  }
  return {true, std::to_string(checks) + " checks"};
}

// M{|nu_n - xi| >= eps} <= E|nu_n - xi| / eps at every index.
Outcome mean_to_measure_law() {
  const auto corpus = load_corpus(kSource / "scenarios");
  std::size_t checks = 0;
  for (const auto& s : corpus) {
    const auto nu = riesz_transform(s.sequence(), s.weights);
    for (std::size_t n = 1; n <= nu.horizon(); ++n) {
      const double mean = mean_gap(nu, n);
      for (double eps : s.config.epsilon_grid) {
        ++checks;
        if (!(measure_gap(nu, n, eps) <= mean / eps + kLawSlack)) {
          return fail(s.name + " n=" + std::to_string(n) + fmt(" eps=%g", eps));
        }
      }
    }
  }
  return {true, std::to_string(checks) + " checks over " + std::to_string(corpus.size()) + " scenarios"};
}

Outcome roundtrip() {
  auto rng = rt::make_rng(1004);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = rt::uniform_index(rng, 1, 4);
    auto space = std::make_shared<const UncertaintySpace>(rt::random_space(rng, m));
    std::vector<UncertainVariable> terms;
    for (int n = 0; n < 1000; ++n) terms.emplace_back(rt::random_values(rng, m, -1.0, 1.0));
    const auto seq = UncertainSequence::from_terms(space, terms, UncertainVariable::constant(m, 0.0));
    const auto w = WeightSequence::explicit_values(rt::random_values(rng, 1000, 0.01, 10.0));
    const auto back = inverse_riesz_transform(riesz_transform(seq, w), w);
    for (std::size_t n = 1; n <= 1000; ++n) {
      for (std::size_t a = 0; a < m; ++a) worst = std::max(worst, std::abs(back.value(n, a) - seq.value(n, a)));
    }
  }
  if (!(worst <= kRoundtripTol)) return fail(fmt("max residual %.3e", worst));
  return {true, fmt("max residual %.3e", worst)};
}

Outcome row_sums() {
  auto rng = rt::make_rng(1005);
  std::vector<WeightSequence> families{WeightSequence::constant(1.0), WeightSequence::harmonic(),
                                       WeightSequence::power(0.5), WeightSequence::power(2.0),
                                       WeightSequence::geometric(0.99)};
  while (families.size() < 100) families.push_back(WeightSequence::explicit_values(rt::random_values(rng, 1000, 1e-3, 1e3)));
  double worst = 0.0;
  for (const auto& w : families) {
    for (std::size_t n = 1; n <= 1000; ++n) {
      long double sum = 0.0L;
      for (double r : riesz_row(w, n)) sum += r;
      worst = std::max(worst, static_cast<double>(std::abs(sum - 1.0L)));
    }
  }
  if (!(worst <= kRowSumTol)) return fail(fmt("max |row sum - 1| = %.3e", worst));
  return {true, fmt("max |row sum - 1| = %.3e", worst)};
}

Outcome block_oscillating() {
  const auto s = load_scenario(kSource / "scenarios" / "04_block_oscillating.json");
  const auto seq = s.sequence();
  const auto harmonic = tauberian_condition_profile(s.weights, seq.horizon(), s.config.tauberian);
  const auto flat = tauberian_condition_profile(WeightSequence::constant(1.0), seq.horizon(), s.config.tauberian);
  const auto regularity = check_regularity(s.weights, seq.horizon(), s.config.tolerance);
  double tail = 0.0;
  const std::size_t start = seq.horizon() - tail_length(seq.horizon(), s.config.tail_fraction) + 1;
  for (std::size_t n = start; n <= seq.horizon(); ++n) tail = std::max(tail, as_gap(seq, n));
  if (s.weights.name() != WeightSequence::harmonic().name()) return fail("scenario weights are not harmonic");
  if (!harmonic.holds) return fail(fmt("harmonic profile tail max %.4f does not hold", harmonic.tail_max));
  if (!(std::abs(harmonic.tail_max - kTauberianExpected) <= kTauberianBand)) {
    return fail(fmt("harmonic tail max %.4f far from %.3f", harmonic.tail_max, kTauberianExpected));
  }
  if (!(regularity.max_row_sum_error <= kRowSumTol)) return fail("Riesz rows do not sum to one");
  if (!(tail < kBlockTailTol)) return fail(fmt("raw tail gap %.3e", tail));
  if (flat.holds) return fail("p = 1 profile unexpectedly holds");
  const auto report = classify(s);
  if (report.verdict("so") != Verdict::pass) return fail("slow-oscillation gaps do not pass");
  return {true, fmt("harmonic tail max %.4f, raw tail gap %.3e", harmonic.tail_max, tail)};
}

Outcome table_over_corpus() {
  std::ostringstream out, err;
  const int code = run_cli({"riesz-uncertain", "table", (kSource / "scenarios").string()}, out, err);
  if (code != kExitOk) return fail("table exit code " + std::to_string(code) + ": " + err.str());
  const auto table = inclusion_table(load_corpus(kSource / "scenarios"));
  if (!table.violations().empty()) return fail("violation " + table.violations().front());
  const std::vector<std::vector<std::string>> layout{
      {"f", "", "e", "=>", "m", "=>", "d"},
      {"v", "", "v", "", "v", "", "v"},
      {"f_R", "", "e_R", "=>", "m_R", "=>", "d_R"},
  };
  if (table.grid != layout) return fail("diagram layout differs");
  if (table.intersection_witnesses.empty()) return fail("m_R and f_R share no witness");
  return {true, std::to_string(table.rows.size()) + " scenarios, 0 violations"};
}

Outcome moment_fit() {
  const double xi = 0.3;
  auto space = std::make_shared<const UncertaintySpace>(UncertaintySpace::additive({"g1"}, std::vector<double>{1.0}));
  const std::size_t horizon = 8192;
  std::vector<UncertainVariable> nu_terms;
  for (std::size_t n = 1; n <= horizon; ++n) nu_terms.push_back(UncertainVariable::constant(1, xi + 1.0 / static_cast<double>(n)));
  const auto w = WeightSequence::constant(1.0);
  const auto nu = UncertainSequence::from_terms(space, nu_terms, UncertainVariable::constant(1, xi));
  const auto seq = inverse_riesz_transform(nu, w);
  std::vector<std::size_t> samples;
  for (std::size_t n = 8; n <= horizon; n *= 2) samples.push_back(n);
  const auto fit = moment_decay_fit(seq, w, 2.0, samples);
  if (!(std::abs(fit.delta_hat - 1.0) <= kDeltaTol)) return fail(fmt("delta_hat %.6f", fit.delta_hat));
  if (!(fit.max_residual < kFitResidual)) return fail(fmt("residual %.3e", fit.max_residual));
  return {true, fmt("delta_hat %.9f, residual %.2e", fit.delta_hat, fit.max_residual)};
}

Outcome expectation_quadrature() {
  auto rng = rt::make_rng(1009);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto space = rt::random_space(rng, rt::uniform_index(rng, 1, 6));
    const auto values = rt::random_values(rng, space.size(), -2.0, 2.0);
    worst = std::max(worst, std::abs(expected_value(space, values) - rt::quadrature_expected_value(space, values)));
  }
  if (!(worst <= kQuadratureTol)) return fail(fmt("max |E - quadrature| = %.3e", worst));
  return {true, fmt("max |E - quadrature| = %.3e", worst)};
}

}  // namespace

int main(int argc, char** argv) {
  const auto rest = rt::consume_seed_flag(argc, argv);
  if (rest.size() > 1) {
    std::cerr << "usage: acceptance [--seed N]\n";
    return 2;
  }
  std::cout << "seed " << rt::base_seed() << '\n';

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"counterexample transform, f fails, f_R passes", counterexample},
      {"Markov inequality on random instances", markov},
      {"mean gap bounds measure gap on the corpus", mean_to_measure_law},
      {"transform roundtrip", roundtrip},
      {"Riesz rows sum to one", row_sums},
      {"block-oscillating Tauberian profile", block_oscillating},
      {"inclusion table over the corpus", table_over_corpus},
      {"moment decay fit", moment_fit},
      {"expected value against quadrature", expectation_quadrature},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = fail(std::string("threw: ") + e.what());
    }
    failures += o.passed ? 0 : 1;
    std::cout << (o.passed ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << " (" << o.detail
              << ")\n";
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
  return failures == 0 ? 0 : 1;
}
