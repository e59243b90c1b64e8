#pragma once

// Built-in sequence families, the one-atom oscillating counterexample and the
// inclusion table over a scenario corpus.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "riesz/convergence.hpp"
#include "riesz/orlicz.hpp"
#include "riesz/summability.hpp"
#include "riesz/uncertainty.hpp"

namespace riesz {

/// Family parameters by name. Scalars are one-element lists; per-atom lists
/// have one entry per atom (a single entry is broadcast).
using FamilyParams = std::map<std::string, std::vector<double>>;

/// Known kinds: constant, decay, oscillating, block_oscillating,
/// atomwise_mixed, explicit.
const std::vector<std::string>& family_kinds();

/// constant          c                         xi_n = c, limit c
/// decay             base, c, alpha            xi_n = base + c / n^alpha
/// oscillating       high (1), low (0)         high on odd n, low on even n, limit (high + low) / 2
/// block_oscillating base, amp (1)             base + amp (-1)^n 2^-j for n in (2^(j-1), 2^j]
/// atomwise_mixed    base, c, alpha per atom   like decay with a separate rate per atom
/// explicit          terms (row-major), limit  horizon = terms / atoms
/// Throws InputError for an unknown kind or malformed parameters.
UncertainSequence builtin_family(const std::string& kind, const FamilyParams& params,
                                 std::shared_ptr<const UncertaintySpace> space, std::size_t horizon);

struct GoldenTransform {
  std::size_t n = 0;
  std::vector<double> values;  // nu_n per atom
};

struct Golden {
  std::map<std::string, Verdict> verdicts;
  std::vector<GoldenTransform> transform;
};

struct Scenario {
  std::string name;
  std::shared_ptr<const UncertaintySpace> space;
  std::string family;
  FamilyParams params;
  std::size_t horizon = 0;
  WeightSequence weights = WeightSequence::constant(1.0);
  OrliczSpec orlicz = OrliczSpec::identity();
  DiagnosticConfig config;
  std::optional<Golden> golden;

  /// The sequence up to `horizon_override` (the scenario horizon when 0).
  UncertainSequence sequence(std::size_t horizon_override = 0) const;
};

/// One atom with M({g1}) = 1, xi_n = 1, 0, 1, 0, ..., limit 1/2, p_k = 1,
/// horizon 10^4 and tolerance 10^-4.
Scenario oscillating_counterexample();

ClassReport classify(const Scenario& scenario);

struct InclusionRow {
  std::string scenario;
  std::map<std::string, Verdict> verdicts;
  bool regular = false;
  bool tauberian = false;
  std::vector<std::string> violations;        // "a=>b"
  std::vector<std::string> golden_mismatches;
};

struct InclusionTable {
  std::vector<InclusionRow> rows;
  std::vector<std::vector<std::string>> grid;  // inclusion_grid()
  // Per diagram class: number of scenarios with a pass / a fail verdict.
  std::map<std::string, std::pair<std::size_t, std::size_t>> witnesses;
  // Scenarios passing both m_R and f_R (the bottom row of the diagram).
  std::vector<std::string> intersection_witnesses;

  /// "scenario: a=>b" for every arrow violation in the corpus.
  std::vector<std::string> violations() const;
  std::vector<std::string> golden_mismatches() const;
  bool ok() const { return violations().empty() && golden_mismatches().empty(); }
};

/// Throws InputError for an empty corpus.
InclusionTable inclusion_table(const std::vector<Scenario>& corpus);

/// Golden transform values compare within this absolute tolerance.
inline constexpr double kGoldenTransformTolerance = 1e-12;

std::string to_csv(const InclusionTable& table);
std::string to_markdown(const InclusionTable& table);

}  // namespace riesz
