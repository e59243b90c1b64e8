#pragma once

// Weight sequences, the Riesz matrix r_nk = p_k / P_n, general lower-triangular
// transforms of uncertain sequences, the two-band inverse, and the
// finite-horizon regularity and Tauberian weight diagnostics.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "riesz/uncertainty.hpp"

namespace riesz {

/// Strictly positive weights p_1, p_2, ... with compensated partial sums P_n.
/// Weights and partial sums are cached on first use; copies share the cache
/// and concurrent readers are safe.
class WeightSequence {
 public:
  using Rule = std::function<double(std::size_t k)>;

  /// `length` bounds explicit (finite) weight lists; rules are otherwise unbounded.
  WeightSequence(std::string name, Rule rule, std::optional<std::size_t> length = std::nullopt);

  static WeightSequence constant(double c = 1.0);
  static WeightSequence harmonic();                  // p_k = 1/k
  static WeightSequence geometric(double ratio);     // p_k = ratio^k
  static WeightSequence power(double exponent);      // p_k = k^exponent
  static WeightSequence explicit_values(std::vector<double> values);

  const std::string& name() const { return name_; }
  std::optional<std::size_t> length() const { return length_; }

  /// p_k for k >= 1. Throws InputError when k is out of range or p_k is not a
  /// finite positive number.
  double weight(std::size_t k) const;
  /// P_n with P_0 = 0.
  double partial_sum(std::size_t n) const;

  std::vector<double> weights(std::size_t n) const;        // p_1..p_n
  std::vector<double> partial_sums(std::size_t n) const;   // P_0..P_n

 private:
  struct Cache;
  void ensure(std::size_t n) const;

  std::string name_;
  Rule rule_;
  std::optional<std::size_t> length_;
  std::shared_ptr<Cache> cache_;
};

/// Lower-triangular infinite matrix; entry(n, k) is 0 whenever k > n.
class TriangularMatrix {
 public:
  using Rule = std::function<double(std::size_t n, std::size_t k)>;

  explicit TriangularMatrix(Rule rule) : rule_(std::move(rule)) {}

  static TriangularMatrix identity();
  static TriangularMatrix riesz(const WeightSequence& weights);

  double entry(std::size_t n, std::size_t k) const { return k > n || k == 0 ? 0.0 : rule_(n, k); }

 private:
  Rule rule_;
};

/// (p_1/P_n, ..., p_n/P_n).
std::vector<double> riesz_row(const WeightSequence& weights, std::size_t n);

/// nu_n = sum_{i<=n} (p_i/P_n) xi_i, pointwise.
UncertainVariable transform_at(const UncertainSequence& seq, const WeightSequence& weights, std::size_t n);

/// All of nu_1..nu_N in one pass; the result keeps the limit candidate of `seq`.
UncertainSequence riesz_transform(const UncertainSequence& seq, const WeightSequence& weights);

/// (A xi)_n = sum_k a_nk xi_k, pointwise.
UncertainVariable general_transform_at(const UncertainSequence& seq, const TriangularMatrix& a,
                                       std::size_t n);

/// xi_n = (P_n nu_n - P_{n-1} nu_{n-1}) / p_n with P_0 = 0.
UncertainVariable inverse_transform_at(const UncertainSequence& transformed, const WeightSequence& weights,
                                       std::size_t n);

/// All of xi_1..xi_N recovered from nu_1..nu_N.
UncertainSequence inverse_riesz_transform(const UncertainSequence& transformed, const WeightSequence& weights);

/// Silverman-Toeplitz evidence for the Riesz matrix at a finite horizon.
/// Rows sum to one and have bounded absolute sums automatically; the column
/// condition p_k/P_n -> 0 reduces to P_n -> infinity, judged from p_1/P_N and
/// from the growth of P_n over the last two dyadic blocks. EMPIRICAL.
struct RegularityVerdict {
  std::size_t horizon = 0;
  double max_row_sum_error = 0.0;   // max_n |sum_k r_nk - 1|
  double max_abs_row_sum = 0.0;
  double column_ratio = 0.0;        // p_1 / P_N
  double partial_sum = 0.0;         // P_N
  double block_growth_ratio = 0.0;  // (P_N - P_{N/2}) / (P_{N/2} - P_{N/4})
  bool column_condition = false;    // column_ratio < tolerance
  bool divergence_trend = false;    // block_growth_ratio >= kDivergentBlockRatio
  bool regular = false;
};

inline constexpr double kDivergentBlockRatio = 0.9;

RegularityVerdict check_regularity(const WeightSequence& weights, std::size_t horizon, double tolerance);

struct TauberianConfig {
  double threshold = 0.25;
  double tail_fraction = 0.1;
};

/// n p_n / P_n for n = 1..N with an EMPIRICAL verdict: HOLDS when the tail
/// window stays below the threshold and does not trend upward.
struct TauberianProfile {
  std::vector<double> values;  // values[n-1] = n p_n / P_n
  double tail_max = 0.0;
  bool tail_nonincreasing = false;
  bool holds = false;
};

TauberianProfile tauberian_condition_profile(const WeightSequence& weights, std::size_t horizon,
                                             const TauberianConfig& config = {});

/// Number of indices in the trailing window of a profile of `count` values.
std::size_t tail_length(std::size_t count, double tail_fraction);

}  // namespace riesz
