#pragma once

// Finite-horizon gap profiles and EMPIRICAL membership verdicts for the
// convergence classes f, m, e, d, so, u and their Riesz-domain variants, plus
// the instance inequalities (Markov/Orlicz, sub-additive uniqueness bound),
// the Borel-Cantelli budget, subsequence extraction and the moment-decay fit.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "riesz/orlicz.hpp"
#include "riesz/summability.hpp"
#include "riesz/uncertainty.hpp"

namespace riesz {

enum class Verdict { pass, fail, inconclusive };

std::string_view to_string(Verdict v);
/// Throws InputError for anything other than pass/fail/inconclusive.
Verdict verdict_from_string(std::string_view s);

struct DiagnosticConfig {
  std::vector<double> epsilon_grid{1e-1, 1e-2, 1e-3};
  std::vector<double> lambda_grid{0.5, 1.0};
  double tail_fraction = 0.1;
  double tolerance = 1e-6;
  std::size_t horizon = 0;           // 0 means the sequence horizon
  std::size_t dist_grid_points = 65;
  // A deviation counts as decaying when the max over the second half of the
  // tail window drops below (1 - stall_ratio) times the max over the first half.
  double stall_ratio = 1e-3;
  TauberianConfig tauberian{};

  /// Throws InputError: grids must be nonempty and positive, horizon 0 or >= 10,
  /// tail_fraction in (0,1], tolerance > 0.
  void validate() const;
};

struct GapProfile {
  std::string class_label;
  std::string parameter;        // "-" when the class has no parameter
  std::size_t first_index = 1;  // index of values[0]
  std::vector<double> values;
};

// ---- single-index gaps --------------------------------------------------

/// sup over Lambda of |xi_n - xi|.
double as_gap(const UncertainSequence& seq, std::size_t n);
/// M{|xi_n - xi| >= eps}.
double measure_gap(const UncertainSequence& seq, std::size_t n, double eps);
/// E[|xi_n - xi|].
double mean_gap(const UncertainSequence& seq, std::size_t n);

/// Grid points farther than `exclusion_radius` from every value of the limit
/// (exact collisions are always dropped). These are continuity points of Phi.
std::vector<double> continuity_grid(const UncertainVariable& limit, std::span<const double> candidates,
                                    double exclusion_radius = 0.0);

/// max over the continuity grid of |Phi_n(x) - Phi(x)|. Throws InputError
/// when no grid point survives the exclusion.
double dist_gap(const UncertainSequence& seq, std::size_t n, std::span<const double> x_grid,
                double exclusion_radius = 0.0);

enum class GapKind { almost_sure, measure, mean, distribution };

struct RieszGapParams {
  double epsilon = 0.1;
  std::vector<double> x_grid{};
  double exclusion_radius = 0.0;
  OrliczSpec orlicz = OrliczSpec::identity();
};

/// The gap of `kind` evaluated on nu_n instead of xi_n, with phi applied to
/// |nu_n - xi| for the almost-sure, measure and mean kinds.
double riesz_gap(GapKind kind, const UncertainSequence& seq, const WeightSequence& weights, std::size_t n,
                 const RieszGapParams& params = {});

/// M{max_{n <= k <= floor((1+lambda)n)} |xi_k - xi_n| >= eps}; nullopt when the
/// window runs past the horizon.
std::optional<double> slow_osc_gap(const UncertainSequence& seq, std::size_t n, double lambda, double eps);

/// Right end floor((1+lambda) n) of the slow-oscillation window.
std::size_t oscillation_window_end(std::size_t n, double lambda);

// ---- instance inequalities ----------------------------------------------

struct MarkovCheck {
  double lhs = 0.0;  // M{|var| >= t}
  double rhs = 0.0;  // E[phi(|var|)] / phi(t)
  bool holds(double slack = 1e-12) const { return lhs <= rhs + slack; }
};

/// Throws InputError unless t > 0 and phi(t) > 0.
MarkovCheck markov_check(const UncertaintySpace& space, const UncertainVariable& var, const OrliczSpec& spec,
                         double t);

struct UniquenessBound {
  double lhs = 0.0;  // M{|xi - eta| >= eps}
  double rhs = 0.0;  // M{|nu_n - xi| >= eps/2} + M{|nu_n - eta| >= eps/2}
  bool holds(double slack = 1e-12) const { return lhs <= rhs + slack; }
};

UniquenessBound uniqueness_bound(const UncertainSequence& seq, const WeightSequence& weights, std::size_t n,
                                 const UncertainVariable& xi, const UncertainVariable& eta, double eps);

struct BorelCantelliBudget {
  std::vector<double> partial_sums;
  double tail_increment = 0.0;  // growth of the partial sums over the tail window
  double block_ratio = 0.0;     // last dyadic block increment over the previous one
  bool summable_trend = false;
};

/// Running sums of M(E_n). SUMMABLE-TREND when the sums moved by at most
/// `tolerance` over the tail window, or the dyadic block increments shrink
/// (ratio below kDivergentBlockRatio). Throws InputError for entries outside [0,1].
BorelCantelliBudget borel_cantelli_budget(std::span<const double> event_measures, double tolerance = 1e-6,
                                          double tail_fraction = 0.1);

// ---- union tails, subsequences, moment decay ----------------------------

/// M(union_{n=m}^{N} {|nu_n - xi| >= eps}).
double uniform_tail_gap(const UncertainSequence& seq, const WeightSequence& weights, std::size_t m, double eps);
/// Same union on the raw terms (identity-matrix path).
double uniform_tail_gap_raw(const UncertainSequence& seq, std::size_t m, double eps);

struct ExtractionConfig {
  std::size_t max_terms = 0;  // 0 means no cap below the horizon
};

struct Extraction {
  std::vector<std::size_t> indices;  // n'_1 < n'_2 < ...
  bool exhausted = false;            // the horizon ran out before max_terms was reached
};

/// Greedy smallest n'_k > n'_{k-1} with M{|nu_n - xi| >= 1/k} <= 2^-k.
Extraction extract_uas_subsequence(const UncertainSequence& seq, const WeightSequence& weights,
                                   const ExtractionConfig& config = {});

struct MomentDecayFit {
  double delta_hat = 0.0;  // -slope - 1; +infinity when every moment is zero
  double c_hat = 0.0;      // exp(intercept)
  double max_residual = 0.0;
  std::size_t points_used = 0;
  bool exact_convergence = false;
  bool decay_evident = false;  // delta_hat > 0, EMPIRICAL
};

/// Least-squares fit of log E[|S_n - xi|^p] against log n over the sample
/// indices with nonzero moments. Needs p > 1 and at least 8 increasing indices.
MomentDecayFit moment_decay_fit(const UncertainSequence& seq, const WeightSequence& weights, double p,
                                std::span<const std::size_t> sample_indices);

// ---- classification -----------------------------------------------------

struct ClassRow {
  std::string class_label;
  std::string param;  // "-", "eps=..", "lambda=..;eps=.."
  double tail_max_gap = 0.0;
  Verdict verdict = Verdict::inconclusive;
  double sort_key_1 = 0.0;
  double sort_key_2 = 0.0;
};

struct ClassReport {
  std::string scenario;
  std::vector<ClassRow> rows;                // class-name then ascending parameter
  std::map<std::string, Verdict> verdicts;   // aggregate per convergence class
  std::vector<GapProfile> profiles;
  RegularityVerdict regularity;
  TauberianProfile tauberian;
  DiagnosticConfig config;
  std::size_t horizon = 0;

  /// Throws InputError for an unknown class label.
  Verdict verdict(const std::string& class_label) const;
};

/// Labels of every convergence class the classifier reports.
const std::vector<std::string>& class_labels();

ClassReport classify(const UncertainSequence& seq, const WeightSequence& weights, const OrliczSpec& orlicz,
                     const DiagnosticConfig& config);

struct InclusionArrow {
  std::string from;
  std::string to;
  bool needs_regular_weights;  // the Riesz-domain (vertical) arrows
};

/// f=>f_R, e=>e_R, m=>m_R, d=>d_R, e=>m, m=>d, e_R=>m_R, m_R=>d_R.
const std::vector<InclusionArrow>& inclusion_arrows();

/// The inclusion diagram derived from inclusion_arrows(): raw classes on the
/// top row, Riesz classes on the bottom row, "=>" and "v" for arrows and ""
/// for cells without an arrow.
std::vector<std::vector<std::string>> inclusion_grid();

/// Arrows with a pass on the left and a fail on the right. Vertical arrows are
/// skipped when the weights are not regular.
std::vector<std::string> arrow_violations(const ClassReport& report);

/// Fixed 12-decimal formatting used in every report.
std::string format_fixed(double value);

std::string to_csv(const ClassReport& report);
std::string to_markdown(const ClassReport& report);

}  // namespace riesz
