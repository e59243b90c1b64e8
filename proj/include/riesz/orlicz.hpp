#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "riesz/summability.hpp"
#include "riesz/uncertainty.hpp"
#include "riesz/validation.hpp"

namespace riesz {

/// An Orlicz function phi together with the exponent p of the Orlicz-p distance.
class OrliczSpec {
 public:
  enum class Kind { identity, power, expm1, table };

  static OrliczSpec identity(double p = 1.0);
  /// phi(x) = x^exponent. Exponents below 1 construct fine and fail validation.
  static OrliczSpec power(double exponent, double p = 1.0);
  static OrliczSpec expm1(double p = 1.0);
  /// Piecewise-linear phi through (xs[i], ys[i]), extended past the last
  /// breakpoint with the last slope. Validated on construction over
  /// [0, xs.back()]; throws InputError when it is not an Orlicz function.
  static OrliczSpec table(std::vector<double> xs, std::vector<double> ys, double p = 1.0);

  double operator()(double x) const;
  /// Smallest x >= 0 with phi(x) >= y (bisection for the non-closed-form kinds).
  double inverse(double y) const;

  Kind kind() const { return kind_; }
  double p() const { return p_; }
  double exponent() const { return exponent_; }
  const std::string& name() const { return name_; }
  bool is_identity() const { return kind_ == Kind::identity; }

 private:
  OrliczSpec(Kind kind, std::string name, double p) : kind_(kind), name_(std::move(name)), p_(p) {}

  Kind kind_;
  std::string name_;
  double p_ = 1.0;
  double exponent_ = 1.0;
  std::vector<double> xs_, ys_;
};

/// Grid surrogate for "continuous, convex, strictly increasing, phi(0)=0,
/// unbounded": zero at the origin, strict increase, midpoint convexity over
/// every grid pair, growth between grid_max/2 and grid_max.
/// Throws InputError when phi is non-finite on the grid.
ValidationReport validate_orlicz(const OrliczSpec& spec, double grid_max = 100.0, std::size_t grid_points = 256);

/// E[phi(|var|)].
double orlicz_moment(const UncertaintySpace& space, const UncertainVariable& var, const OrliczSpec& spec);

/// (E[phi(|nu_n - xi|^p)])^(1/p), nu_n the Riesz transform at n.
double orlicz_p_gap(const UncertainSequence& seq, const WeightSequence& weights, const OrliczSpec& spec,
                    std::size_t n);

/// Same quantity for an already-transformed term.
double orlicz_p_distance(const UncertaintySpace& space, std::span<const double> values,
                         const UncertainVariable& limit, const OrliczSpec& spec);

}  // namespace riesz
