#pragma once

// Finite uncertainty spaces (Gamma, power set, M) with an extensional,
// possibly non-additive measure, and the exact expected-value and
// distribution operators on them.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "riesz/validation.hpp"

namespace riesz {

/// Subset of atoms encoded as a bitmask; bit i is atom i.
using Event = std::uint32_t;

/// Hard ceiling imposed by the bitmask table. The CLI applies a lower,
/// configurable cap (RIESZ_UNCERTAIN_MAX_ATOMS, default 16).
inline constexpr std::size_t kMaxAtoms = 20;
inline constexpr std::size_t kDefaultMaxAtoms = 16;

class UncertaintySpace {
 public:
  /// Probability measure from nonnegative weights (normalized by their sum).
  static UncertaintySpace additive(std::vector<std::string> atoms, std::span<const double> weights);

  /// Dual-completed possibility measure: M(E) is the largest weight in E when
  /// that is below 1/2, 1 - (largest weight outside E) when that is below 1/2,
  /// and 1/2 otherwise. Self-dual by construction; it is a valid uncertain
  /// measure whenever some weight reaches 1/2.
  static UncertaintySpace possibility(std::vector<std::string> atoms, std::span<const double> weights);

  /// Raw max-possibility M(E) = max weight on E. Not self-dual in general.
  static UncertaintySpace max_possibility(std::vector<std::string> atoms,
                                          std::span<const double> weights);

  /// Explicit table indexed by Event bitmask, size 2^m.
  static UncertaintySpace from_table(std::vector<std::string> atoms, std::vector<double> table);

  /// Copy with a different almost-sure set Lambda.
  UncertaintySpace with_almost_sure(Event lambda) const;

  std::size_t size() const { return atoms_.size(); }
  const std::vector<std::string>& atoms() const { return atoms_; }
  Event full() const { return full_; }
  Event almost_sure() const { return almost_sure_; }
  std::span<const double> table() const { return table_; }

  /// Direct table lookup; throws InputError for bits outside the ground set.
  double measure(Event e) const;

  /// Event from atom names; throws InputError for unknown names.
  Event event_of(std::span<const std::string> names) const;

  std::size_t index_of(const std::string& name) const;

 private:
  UncertaintySpace(std::vector<std::string> atoms, std::vector<double> table);

  std::vector<std::string> atoms_;
  std::vector<double> table_;
  Event full_ = 0;
  Event almost_sure_ = 0;
};

/// Real-valued function on the atoms of one space.
class UncertainVariable {
 public:
  UncertainVariable() = default;
  explicit UncertainVariable(std::vector<double> values) : values_(std::move(values)) {}

  static UncertainVariable constant(std::size_t atoms, double c) {
    return UncertainVariable(std::vector<double>(atoms, c));
  }

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::span<const double> values() const { return values_; }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  /// Pointwise map.
  UncertainVariable map(const std::function<double(double)>& f) const;

  friend bool operator==(const UncertainVariable&, const UncertainVariable&) = default;

 private:
  std::vector<double> values_;
};

/// Pointwise |a - b|.
UncertainVariable abs_difference(const UncertainVariable& a, const UncertainVariable& b);

/// Terms xi_1..xi_N on a shared space, materialized row-major, plus the limit
/// candidate xi against which every gap is measured.
class UncertainSequence {
 public:
  using Rule = std::function<UncertainVariable(std::size_t n)>;

  UncertainSequence(std::shared_ptr<const UncertaintySpace> space, const Rule& term,
                    UncertainVariable limit, std::size_t horizon);

  static UncertainSequence from_terms(std::shared_ptr<const UncertaintySpace> space,
                                      const std::vector<UncertainVariable>& terms,
                                      UncertainVariable limit);

  const UncertaintySpace& space() const { return *space_; }
  const std::shared_ptr<const UncertaintySpace>& space_ptr() const { return space_; }
  std::size_t horizon() const { return horizon_; }
  std::size_t atoms() const { return space_->size(); }
  const UncertainVariable& limit() const { return limit_; }

  /// 1-based; throws InputError when n is 0 or past the horizon.
  UncertainVariable term(std::size_t n) const;
  std::span<const double> row(std::size_t n) const;
  double value(std::size_t n, std::size_t atom) const { return data_[(n - 1) * atoms() + atom]; }

  UncertainSequence with_limit(UncertainVariable limit) const;
  /// First `horizon` terms.
  UncertainSequence truncated(std::size_t horizon) const;

 private:
  UncertainSequence() = default;
  void check_index(std::size_t n) const;

  std::shared_ptr<const UncertaintySpace> space_;
  std::vector<double> data_;
  UncertainVariable limit_;
  std::size_t horizon_ = 0;
};

/// Checks normality, range, monotonicity, duality, sub-additivity and M(Lambda)=1.
/// Each check names the first violating subset (pair) when it fails.
ValidationReport validate_space(const UncertaintySpace& space, double slack = 1e-12);

double measure(const UncertaintySpace& space, Event event);

/// {gamma : pred(value(gamma))} as an event.
Event event_where(std::span<const double> values, const std::function<bool(double)>& pred);

/// Expected value, integrated exactly over the level-set breakpoints.
double expected_value(const UncertaintySpace& space, std::span<const double> values);
double expected_value(const UncertaintySpace& space, const UncertainVariable& var);

/// Phi(x) = M{xi <= x}.
double distribution_at(const UncertaintySpace& space, const UncertainVariable& var, double x);

}  // namespace riesz
