#pragma once

// JSON scenario files.
//
//   {
//     "name": "decay",
//     "space":    {"atoms": ["a", "b"], "kind": "additive" | "possibility" | "explicit",
//                  "weights": [..], "table": [{"event": ["a"], "measure": 0.4}, ..] | [2^m numbers],
//                  "almost_sure": ["a", "b"]},
//     "sequence": {"family": "decay", "params": {"alpha": 1, "base": [0, 1]}, "horizon": 20000},
//     "weights":  {"kind": "constant" | "harmonic" | "geometric" | "power" | "explicit",
//                  "params": {"c": 1} | {"ratio": 0.5} | {"exponent": 0.5} | {"values": [..]}},
//     "orlicz":   {"phi": "identity" | "power" | "expm1" | "table", "exponent": 2, "p": 1,
//                  "xs": [..], "ys": [..]},
//     "config":   {"horizon": 0, "tolerance": 1e-6, "epsilon": [..], "lambda": [..], "tail_fraction": 0.1},
//     "golden":   {"verdicts": {"f": "fail"}, "transform": [{"n": 5, "values": [0.6]}]}
//   }
//
// Only "space" and "sequence" are required.

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "riesz/scenarios.hpp"
#include "riesz/validation.hpp"

namespace riesz {

/// RIESZ_UNCERTAIN_MAX_ATOMS, default 16, clamped to kMaxAtoms. Throws
/// InputError when the variable is set to something that is not a positive integer.
std::size_t max_atoms_from_env();

/// Throws InputError for malformed JSON, unknown keys or values, or a space
/// larger than `max_atoms`. Measure axioms are not checked here.
Scenario parse_scenario(std::string_view json_text, std::size_t max_atoms = max_atoms_from_env());
Scenario load_scenario(const std::filesystem::path& path, std::size_t max_atoms = max_atoms_from_env());

/// Every *.json file in `dir`, ordered by file name. Throws InputError when
/// the directory is missing or holds no scenario.
std::vector<Scenario> load_corpus(const std::filesystem::path& dir, std::size_t max_atoms = max_atoms_from_env());

/// Measure axioms, Orlicz checks, weight positivity up to the horizon and the
/// limit candidate arity.
ValidationReport validate_scenario(const Scenario& scenario);

}  // namespace riesz
