#include "riesz/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "riesz/errors.hpp"

namespace riesz {

namespace {

void check_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InputError("Orlicz distance exponent p must be >= 1");
}

}  // namespace

OrliczSpec OrliczSpec::identity(double p) {
  check_p(p);
  return OrliczSpec(Kind::identity, "identity", p);
}

OrliczSpec OrliczSpec::power(double exponent, double p) {
  check_p(p);
  if (!(exponent > 0.0) || !std::isfinite(exponent)) throw InputError("power exponent must be positive");
  std::ostringstream name;
  name << "power(" << exponent << ")";
  OrliczSpec s(Kind::power, name.str(), p);
  s.exponent_ = exponent;
  return s;
}

OrliczSpec OrliczSpec::expm1(double p) {
  check_p(p);
  return OrliczSpec(Kind::expm1, "expm1", p);
}

OrliczSpec OrliczSpec::table(std::vector<double> xs, std::vector<double> ys, double p) {
  check_p(p);
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw InputError("Orlicz table needs at least two matching breakpoints");
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) throw InputError("Orlicz table has non-finite entries");
    if (i > 0 && !(xs[i] > xs[i - 1])) throw InputError("Orlicz table abscissae must increase");
  }
  if (xs.front() != 0.0) throw InputError("Orlicz table must start at x = 0");
  OrliczSpec s(Kind::table, "table", p);
  s.xs_ = std::move(xs);
  s.ys_ = std::move(ys);
  const auto report = validate_orlicz(s, s.xs_.back(), 256);
  if (!report.ok()) {
    for (const auto& c : report.checks) {
      if (!c.passed) throw InputError("tabulated phi is not an Orlicz function: " + c.name + ": " + c.detail);
    }
  }
  return s;
}

double OrliczSpec::operator()(double x) const {
  switch (kind_) {
    case Kind::identity:
      return x;
    case Kind::power:
      return std::pow(x, exponent_);
    case Kind::expm1:
      return std::expm1(x);
    case Kind::table: {
      if (x >= xs_.back()) {
        const std::size_t n = xs_.size();
        const double slope = (ys_[n - 1] - ys_[n - 2]) / (xs_[n - 1] - xs_[n - 2]);
        return ys_.back() + slope * (x - xs_.back());
      }
      const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      const std::size_t hi = static_cast<std::size_t>(it - xs_.begin());
      const std::size_t lo = hi == 0 ? 0 : hi - 1;
      if (hi == 0) return ys_.front();
      const double t = (x - xs_[lo]) / (xs_[hi] - xs_[lo]);
      return ys_[lo] + t * (ys_[hi] - ys_[lo]);
    }
  }
  return x;
}

double OrliczSpec::inverse(double y) const {
  if (y <= 0.0) return 0.0;
  switch (kind_) {
    case Kind::identity:
      return y;
    case Kind::power:
      return std::pow(y, 1.0 / exponent_);
    case Kind::expm1:
      return std::log1p(y);
    case Kind::table:
      break;
  }
  double lo = 0.0;
  double hi = 1.0;
  while ((*this)(hi) < y) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    ((*this)(mid) >= y ? hi : lo) = mid;
  }
  return hi;
}

ValidationReport validate_orlicz(const OrliczSpec& spec, double grid_max, std::size_t grid_points) {
  if (grid_points < 16) throw InputError("Orlicz validation needs at least 16 grid points");
  if (!(grid_max > 0.0)) throw InputError("Orlicz validation grid must have positive extent");

  std::vector<double> x(grid_points), y(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i) {
    x[i] = grid_max * static_cast<double>(i) / static_cast<double>(grid_points - 1);
    y[i] = spec(x[i]);
    if (!std::isfinite(y[i])) {
      std::ostringstream os;
      os << "phi(" << x[i] << ") is not finite";
      throw InputError(os.str());
    }
  }

  ValidationReport report;
  {
    CheckResult c{"zero_at_origin", spec(0.0) == 0.0, ""};
    if (!c.passed) {
      std::ostringstream os;
      os << "phi(0) = " << spec(0.0);
      c.detail = os.str();
    }
    report.checks.push_back(c);
  }
  {
    CheckResult c{"strictly_increasing", true, ""};
    for (std::size_t i = 0; i + 1 < grid_points; ++i) {
      if (!(y[i + 1] > y[i])) {
        c.passed = false;
        std::ostringstream os;
        os << "phi(" << x[i + 1] << ") = " << y[i + 1] << " <= phi(" << x[i] << ") = " << y[i];
        c.detail = os.str();
        break;
      }
    }
    report.checks.push_back(c);
  }
  {
    CheckResult c{"midpoint_convex", true, ""};
    for (std::size_t i = 0; i < grid_points && c.passed; ++i) {
      for (std::size_t j = i + 1; j < grid_points; ++j) {
        const double mid = 0.5 * (x[i] + x[j]);
        const double lhs = spec(mid);
        const double rhs = 0.5 * (y[i] + y[j]);
        if (lhs > rhs + 1e-12) {
          c.passed = false;
          std::ostringstream os;
          os.precision(17);
          os << "phi((" << x[i] << " + " << x[j] << ")/2) = " << lhs << " > " << rhs;
          c.detail = os.str();
          break;
        }
      }
    }
    report.checks.push_back(c);
  }
  {
    const double top = spec(grid_max);
    const double half = spec(grid_max / 2.0);
    CheckResult c{"unbounded_trend", top > half, ""};
    if (!c.passed) {
      std::ostringstream os;
      os << "phi(" << grid_max << ") = " << top << " <= phi(" << grid_max / 2.0 << ") = " << half;
      c.detail = os.str();
    }
    report.checks.push_back(c);
  }
  return report;
}

double orlicz_moment(const UncertaintySpace& space, const UncertainVariable& var, const OrliczSpec& spec) {
  return expected_value(space, var.map([&spec](double v) { return spec(std::abs(v)); }));
}

double orlicz_p_distance(const UncertaintySpace& space, std::span<const double> values,
                         const UncertainVariable& limit, const OrliczSpec& spec) {
  if (values.size() != limit.size()) throw InputError("variable does not match the limit candidate");
  std::vector<double> inner(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    inner[i] = spec(std::pow(std::abs(values[i] - limit[i]), spec.p()));
  }
  const double moment = expected_value(space, inner);
  return std::pow(std::max(moment, 0.0), 1.0 / spec.p());
}

double orlicz_p_gap(const UncertainSequence& seq, const WeightSequence& weights, const OrliczSpec& spec,
                    std::size_t n) {
  const auto nu = transform_at(seq, weights, n);
  return orlicz_p_distance(seq.space(), nu.values(), seq.limit(), spec);
}

}  // namespace riesz
