#include "riesz/uncertainty.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "riesz/compensated_sum.hpp"
#include "riesz/errors.hpp"

namespace riesz {

namespace {

void check_atoms(const std::vector<std::string>& atoms) {
  if (atoms.empty()) throw InputError("uncertainty space needs at least one atom");
  if (atoms.size() > kMaxAtoms) {
    throw InputError("uncertainty space has " + std::to_string(atoms.size()) +
                     " atoms; the limit is " + std::to_string(kMaxAtoms));
  }
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      if (atoms[i] == atoms[j]) throw InputError("duplicate atom name '" + atoms[i] + "'");
    }
  }
}

void check_weights(const std::vector<std::string>& atoms, std::span<const double> weights) {
  if (weights.size() != atoms.size()) {
    throw InputError("expected " + std::to_string(atoms.size()) + " weights, got " +
                     std::to_string(weights.size()));
  }
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw InputError("weights must be finite and nonnegative");
  }
}

double max_weight_on(Event e, std::span<const double> weights) {
  double best = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (e & (Event{1} << i)) best = std::max(best, weights[i]);
  }
  return best;
}

std::string describe(Event e, const std::vector<std::string>& atoms) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (e & (Event{1} << i)) {
      if (!first) out += ",";
      out += atoms[i];
      first = false;
    }
  }
  return out + "}";
}

}  // namespace

UncertaintySpace::UncertaintySpace(std::vector<std::string> atoms, std::vector<double> table)
    : atoms_(std::move(atoms)), table_(std::move(table)) {
  full_ = static_cast<Event>((std::uint64_t{1} << atoms_.size()) - 1);
  almost_sure_ = full_;
}

UncertaintySpace UncertaintySpace::additive(std::vector<std::string> atoms,
                                            std::span<const double> weights) {
  check_atoms(atoms);
  check_weights(atoms, weights);
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw InputError("additive weights must have a positive sum");

  const std::size_t m = atoms.size();
  const Event full = static_cast<Event>((std::uint64_t{1} << m) - 1);
  const Event top = Event{1} << (m - 1);
  std::vector<double> table(std::size_t{1} << m, 0.0);
  // Events without the top atom are summed directly; their complements are
  // set to 1 - M(E) so that duality holds bit-exactly.
  for (Event e = 0; e <= full; ++e) {
    if (e & top) continue;
    CompensatedSum s;
    for (std::size_t i = 0; i < m; ++i) {
      if (e & (Event{1} << i)) s.add(weights[i] / total);
    }
    table[e] = std::clamp(s.value(), 0.0, 1.0);
    table[full & ~e] = 1.0 - table[e];
  }
  table[0] = 0.0;
  table[full] = 1.0;
  return UncertaintySpace(std::move(atoms), std::move(table));
}

UncertaintySpace UncertaintySpace::possibility(std::vector<std::string> atoms,
                                               std::span<const double> weights) {
  check_atoms(atoms);
  check_weights(atoms, weights);
  const std::size_t m = atoms.size();
  const Event full = static_cast<Event>((std::uint64_t{1} << m) - 1);
  std::vector<double> table(std::size_t{1} << m, 0.0);
  for (Event e = 0; e <= full; ++e) {
    const double inside = max_weight_on(e, weights);
    const double outside = max_weight_on(full & ~e, weights);
    if (inside < 0.5) {
      table[e] = inside;
    } else if (outside < 0.5) {
      table[e] = 1.0 - outside;
    } else {
      table[e] = 0.5;
    }
  }
  return UncertaintySpace(std::move(atoms), std::move(table));
}

UncertaintySpace UncertaintySpace::max_possibility(std::vector<std::string> atoms,
                                                   std::span<const double> weights) {
  check_atoms(atoms);
  check_weights(atoms, weights);
  const std::size_t m = atoms.size();
  const Event full = static_cast<Event>((std::uint64_t{1} << m) - 1);
  std::vector<double> table(std::size_t{1} << m, 0.0);
  for (Event e = 0; e <= full; ++e) table[e] = max_weight_on(e, weights);
  return UncertaintySpace(std::move(atoms), std::move(table));
}

UncertaintySpace UncertaintySpace::from_table(std::vector<std::string> atoms,
                                              std::vector<double> table) {
  check_atoms(atoms);
  if (table.size() != (std::size_t{1} << atoms.size())) {
    throw InputError("measure table must list all " + std::to_string(std::size_t{1} << atoms.size()) +
                     " subsets");
  }
  for (double v : table) {
    if (!std::isfinite(v)) throw InputError("measure table contains a non-finite value");
  }
  return UncertaintySpace(std::move(atoms), std::move(table));
}

UncertaintySpace UncertaintySpace::with_almost_sure(Event lambda) const {
  if (lambda & ~full_) throw InputError("almost-sure set references unknown atoms");
  UncertaintySpace copy = *this;
  copy.almost_sure_ = lambda;
  return copy;
}

double UncertaintySpace::measure(Event e) const {
  if (e & ~full_) throw InputError("event references atoms outside the ground set");
  return table_[e];
}

std::size_t UncertaintySpace::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i] == name) return i;
  }
  throw InputError("unknown atom '" + name + "'");
}

Event UncertaintySpace::event_of(std::span<const std::string> names) const {
  Event e = 0;
  for (const auto& n : names) e |= Event{1} << index_of(n);
  return e;
}

UncertainVariable UncertainVariable::map(const std::function<double(double)>& f) const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), f);
  return UncertainVariable(std::move(out));
}

UncertainVariable abs_difference(const UncertainVariable& a, const UncertainVariable& b) {
  if (a.size() != b.size()) throw InputError("uncertain variables live on different spaces");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::abs(a[i] - b[i]);
  return UncertainVariable(std::move(out));
}

UncertainSequence::UncertainSequence(std::shared_ptr<const UncertaintySpace> space, const Rule& term,
                                     UncertainVariable limit, std::size_t horizon)
    : space_(std::move(space)), limit_(std::move(limit)), horizon_(horizon) {
  if (!space_) throw InputError("sequence needs a space");
  if (horizon_ == 0) throw InputError("sequence horizon must be at least 1");
  const std::size_t m = space_->size();
  if (limit_.size() != m) throw InputError("limit candidate does not match the space");
  data_.reserve(horizon_ * m);
  for (std::size_t n = 1; n <= horizon_; ++n) {
    UncertainVariable v = term(n);
    if (v.size() != m) throw InputError("term " + std::to_string(n) + " does not match the space");
    data_.insert(data_.end(), v.begin(), v.end());
  }
}

UncertainSequence UncertainSequence::from_terms(std::shared_ptr<const UncertaintySpace> space,
                                                const std::vector<UncertainVariable>& terms,
                                                UncertainVariable limit) {
  return UncertainSequence(
      std::move(space), [&terms](std::size_t n) { return terms[n - 1]; }, std::move(limit),
      terms.size());
}

void UncertainSequence::check_index(std::size_t n) const {
  if (n == 0 || n > horizon_) {
    throw InputError("index " + std::to_string(n) + " outside 1.." + std::to_string(horizon_));
  }
}

UncertainVariable UncertainSequence::term(std::size_t n) const {
  const auto r = row(n);
  return UncertainVariable(std::vector<double>(r.begin(), r.end()));
}

std::span<const double> UncertainSequence::row(std::size_t n) const {
  check_index(n);
  return std::span<const double>(data_).subspan((n - 1) * atoms(), atoms());
}

UncertainSequence UncertainSequence::with_limit(UncertainVariable limit) const {
  if (limit.size() != atoms()) throw InputError("limit candidate does not match the space");
  UncertainSequence copy = *this;
  copy.limit_ = std::move(limit);
  return copy;
}

UncertainSequence UncertainSequence::truncated(std::size_t horizon) const {
  check_index(horizon);
  UncertainSequence copy;
  copy.space_ = space_;
  copy.limit_ = limit_;
  copy.horizon_ = horizon;
  copy.data_.assign(data_.begin(), data_.begin() + static_cast<std::ptrdiff_t>(horizon * atoms()));
  return copy;
}

ValidationReport validate_space(const UncertaintySpace& space, double slack) {
  ValidationReport report;
  const auto& atoms = space.atoms();
  const Event full = space.full();
  const auto table = space.table();

  {
    CheckResult c{"range", true, ""};
    for (Event e = 0; e <= full; ++e) {
      if (!(table[e] >= 0.0 && table[e] <= 1.0)) {
        c.passed = false;
        std::ostringstream os;
        os << "M(" << describe(e, atoms) << ") = " << table[e] << " outside [0,1]";
        c.detail = os.str();
        break;
      }
    }
    report.checks.push_back(c);
  }
  {
    CheckResult c{"normality", true, ""};
    std::ostringstream os;
    if (std::abs(table[0]) > slack) {
      c.passed = false;
      os << "M({}) = " << table[0];
    } else if (std::abs(table[full] - 1.0) > slack) {
      c.passed = false;
      os << "M(Gamma) = " << table[full];
    }
    c.detail = os.str();
    report.checks.push_back(c);
  }
  {
    CheckResult c{"monotonicity", true, ""};
    // Covering pairs E < E + {a} suffice by transitivity.
    for (Event e = 0; e <= full && c.passed; ++e) {
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        const Event bit = Event{1} << i;
        if (e & bit) continue;
        if (table[e] > table[e | bit] + slack) {
          c.passed = false;
          std::ostringstream os;
          os << "M(" << describe(e, atoms) << ") = " << table[e] << " > M(" << describe(e | bit, atoms)
             << ") = " << table[e | bit];
          c.detail = os.str();
          break;
        }
      }
    }
    report.checks.push_back(c);
  }
  {
    CheckResult c{"duality", true, ""};
    for (Event e = 0; e <= full; ++e) {
      const Event comp = full & ~e;
      if (std::abs(table[e] + table[comp] - 1.0) > slack) {
        c.passed = false;
        std::ostringstream os;
        os << "M(" << describe(e, atoms) << ") + M(" << describe(comp, atoms)
           << ") = " << table[e] + table[comp] << " != 1";
        c.detail = os.str();
        break;
      }
    }
    report.checks.push_back(c);
  }
  {
    CheckResult c{"subadditivity", true, ""};
    // Disjoint pairs suffice once monotonicity holds; this walks all 3^m of them.
    for (Event a = 1; a <= full && c.passed; ++a) {
      const Event rest = full & ~a;
      for (Event b = rest; b != 0; b = (b - 1) & rest) {
        if (b < a) continue;  // each unordered pair once
        if (table[a | b] > table[a] + table[b] + slack) {
          c.passed = false;
          std::ostringstream os;
          os << "M(" << describe(a | b, atoms) << ") = " << table[a | b] << " > M(" << describe(a, atoms)
             << ") + M(" << describe(b, atoms) << ") = " << table[a] + table[b];
          c.detail = os.str();
          break;
        }
      }
    }
    report.checks.push_back(c);
  }
  {
    CheckResult c{"almost_sure", true, ""};
    const Event lambda = space.almost_sure();
    if (std::abs(table[lambda] - 1.0) > slack) {
      c.passed = false;
      std::ostringstream os;
      os << "M(Lambda=" << describe(lambda, atoms) << ") = " << table[lambda] << " != 1";
      c.detail = os.str();
    }
    report.checks.push_back(c);
  }
  return report;
}

double measure(const UncertaintySpace& space, Event event) { return space.measure(event); }

Event event_where(std::span<const double> values, const std::function<bool(double)>& pred) {
  Event e = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (pred(values[i])) e |= Event{1} << i;
  }
  return e;
}

double expected_value(const UncertaintySpace& space, std::span<const double> values) {
  const std::size_t m = space.size();
  if (values.size() != m) throw InputError("variable does not match the space");

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  // Positive part: sum over breakpoints 0 = b0 < b1 < ... of (b_i - b_{i-1}) M{xi >= b_i}.
  // Walking downward, {xi >= b} grows one value-class at a time.
  CompensatedSum positive;
  {
    Event upper = 0;
    std::size_t i = m;
    while (i > 0 && values[order[i - 1]] > 0.0) {
      const double level = values[order[i - 1]];
      while (i > 0 && values[order[i - 1]] == level) {
        upper |= Event{1} << order[i - 1];
        --i;
      }
      const double below = (i > 0 && values[order[i - 1]] > 0.0) ? values[order[i - 1]] : 0.0;
      positive.add((level - below) * space.measure(upper));
    }
  }
  // Negative part: sum over c_1 < ... < c_l < 0 of (c_{i+1} - c_i) M{xi <= c_i}.
  CompensatedSum negative;
  {
    Event lower = 0;
    std::size_t i = 0;
    while (i < m && values[order[i]] < 0.0) {
      const double level = values[order[i]];
      while (i < m && values[order[i]] == level) {
        lower |= Event{1} << order[i];
        ++i;
      }
      const double above = (i < m && values[order[i]] < 0.0) ? values[order[i]] : 0.0;
      negative.add((above - level) * space.measure(lower));
    }
  }
  return positive.value() - negative.value();
}

double expected_value(const UncertaintySpace& space, const UncertainVariable& var) {
  return expected_value(space, var.values());
}

double distribution_at(const UncertaintySpace& space, const UncertainVariable& var, double x) {
  if (var.size() != space.size()) throw InputError("variable does not match the space");
  return space.measure(event_where(var.values(), [x](double v) { return v <= x; }));
}

}  // namespace riesz
