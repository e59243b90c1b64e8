#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <memory>
#include <vector>

#include "riesz/errors.hpp"
#include "riesz/scenario_io.hpp"
#include "riesz/scenarios.hpp"
#include "support.hpp"

using namespace riesz;

namespace {

const std::filesystem::path kSource = RIESZ_SOURCE_DIR;

std::shared_ptr<const UncertaintySpace> two_atom() {
  return std::make_shared<const UncertaintySpace>(
      UncertaintySpace::additive({"a", "b"}, std::vector<double>{0.5, 0.5}));
}

Scenario decay_scenario(std::size_t horizon) {
  Scenario s;
  s.name = "decay";
  s.space = two_atom();
  s.family = "decay";
  s.params = {{"base", {0.0, 1.0}}, {"alpha", {1.0}}};
  s.horizon = horizon;
  s.config.tolerance = 1e-3;
  return s;
}

}  // namespace

TEST_SUITE("scenarios") {
  TEST_CASE("family terms") {
    const auto space = two_atom();
    const auto c = builtin_family("constant", {{"c", {0.5, -1.0}}}, space, 10);
    CHECK(c.value(7, 1) == -1.0);
    CHECK(c.limit()[0] == 0.5);

    const auto d = builtin_family("decay", {{"base", {0.0, 1.0}}, {"c", {2.0}}, {"alpha", {2.0}}}, space, 10);
    CHECK(d.value(4, 0) == doctest::Approx(2.0 / 16.0));
    CHECK(d.value(4, 1) == doctest::Approx(1.0 + 2.0 / 16.0));

    const auto mixed = builtin_family("atomwise_mixed", {{"alpha", {0.5, 2.0}}}, space, 10);
    CHECK(mixed.value(9, 0) == doctest::Approx(1.0 / 3.0));
    CHECK(mixed.value(9, 1) == doctest::Approx(1.0 / 81.0));

    const auto osc = builtin_family("oscillating", {{"high", {1.0, 2.0}}}, space, 10);
    CHECK(osc.value(3, 1) == 2.0);
    CHECK(osc.value(4, 1) == 0.0);
    CHECK(osc.limit()[1] == 1.0);

    const auto block = builtin_family("block_oscillating", {{"base", {0.0, 1.0}}, {"amp", {0.5}}}, space, 20);
    CHECK(block.value(1, 0) == -0.5);   // j = 0
    CHECK(block.value(2, 0) == 0.25);   // j = 1
    CHECK(block.value(3, 0) == -0.125); // j = 2
    CHECK(block.value(4, 0) == 0.125);
    CHECK(block.value(5, 1) == 1.0 - 0.0625);
    CHECK(block.value(16, 1) == 1.0 + 0.03125);
    CHECK(block.value(17, 1) == 1.0 - 0.015625);

    const auto ex = builtin_family("explicit", {{"terms", {1, 2, 3, 4, 5, 6}}, {"limit", {0.0, 0.0}}}, space, 0);
    CHECK(ex.horizon() == 3);
    CHECK(ex.value(2, 1) == 4.0);
  }

  TEST_CASE("family errors") {
    const auto space = two_atom();
    CHECK_THROWS_AS(builtin_family("zigzag", {}, space, 10), InputError);
    CHECK_THROWS_AS(builtin_family("constant", {}, space, 10), InputError);
    CHECK_THROWS_AS(builtin_family("constant", {{"c", {1.0, 2.0, 3.0}}}, space, 10), InputError);
    CHECK_THROWS_AS(builtin_family("constant", {{"c", {1.0}}}, space, 0), InputError);
    CHECK_THROWS_AS(builtin_family("decay", {{"alpha", {1.0, 2.0}}}, space, 10), InputError);
    CHECK_THROWS_AS(builtin_family("decay", {{"alpha", {0.0}}}, space, 10), InputError);
    CHECK_THROWS_AS(builtin_family("explicit", {{"terms", {1, 2, 3}}, {"limit", {0.0}}}, space, 0), InputError);
    CHECK_THROWS_AS(builtin_family("explicit", {{"terms", {1, 2}}, {"limit", {0.0}}}, space, 2), InputError);
    CHECK_THROWS_AS(builtin_family("constant", {{"c", {NAN}}}, space, 10), InputError);
  }

  TEST_CASE("explicit family outlives its parameter map") {
    auto space = two_atom();
    UncertainSequence seq = [&] {
      FamilyParams params{{"terms", {1, 2, 3, 4}}, {"limit", {0.0}}};
      return builtin_family("explicit", params, space, 0);
    }();
    CHECK(seq.value(2, 0) == 3.0);
  }

  TEST_CASE("counterexample transform values") {
    const auto s = oscillating_counterexample();
    const auto seq = s.sequence();
    const auto nu = riesz_transform(seq, s.weights);
    for (std::size_t n = 1; n <= s.horizon; ++n) {
      const double expected = n % 2 == 1 ? 0.5 + 0.5 / static_cast<double>(n) : 0.5;
      CHECK(std::abs(nu.value(n, 0) - expected) <= 1e-12);
    }
    REQUIRE(s.golden.has_value());
    for (const auto& g : s.golden->transform) CHECK(std::abs(nu.value(g.n, 0) - g.values[0]) <= 1e-12);
  }

  TEST_CASE("inclusion table on the counterexample") {
    const auto table = inclusion_table({oscillating_counterexample()});
    REQUIRE(table.rows.size() == 1);
    const auto& row = table.rows.front();
    CHECK(row.verdicts.at("f") == Verdict::fail);
    CHECK(row.verdicts.at("f_R") == Verdict::pass);
    CHECK(row.regular);
    CHECK_FALSE(row.tauberian);  // p_k = 1 does not meet the Tauberian profile
    CHECK(table.ok());
    CHECK(table.witnesses.at("f") == std::pair<std::size_t, std::size_t>{0, 1});
    CHECK(table.witnesses.at("f_R") == std::pair<std::size_t, std::size_t>{1, 0});
    CHECK(table.intersection_witnesses == std::vector<std::string>{"counterexample"});
    CHECK(table.grid == inclusion_grid());
  }

  TEST_CASE("inclusion table on a constant and a decaying sequence") {
    Scenario c;
    c.name = "constant";
    c.space = two_atom();
    c.family = "constant";
    c.params = {{"c", {0.5, -1.0}}};
    c.horizon = 200;
    c.weights = WeightSequence::harmonic();
    const auto table = inclusion_table({c, decay_scenario(20000)});
    REQUIRE(table.rows.size() == 2);
    for (const auto& label : class_labels()) CHECK(table.rows[0].verdicts.at(label) == Verdict::pass);
    CHECK(table.rows[1].verdicts.at("f") == Verdict::pass);
    CHECK(table.rows[1].verdicts.at("f_R") == Verdict::pass);
    CHECK(table.violations().empty());
    const auto csv = to_csv(table);
    CHECK(csv.rfind("scenario,", 0) == 0);
    CHECK(csv.find("\nconstant,pass,") != std::string::npos);
    CHECK(to_markdown(table).find("witnessed by constant, decay") != std::string::npos);
  }

  TEST_CASE("golden mismatches are reported") {
    auto s = oscillating_counterexample();
    s.golden->verdicts["f"] = Verdict::pass;
    s.golden->transform.push_back({5, {0.61}});
    s.golden->transform.push_back({20000, {0.5}});
    const auto table = inclusion_table({s});
    CHECK_FALSE(table.ok());
    CHECK(table.golden_mismatches().size() == 3);
    CHECK(table.violations().empty());
    CHECK_THROWS_AS(inclusion_table({}), InputError);
  }

  TEST_CASE("convergent families have a small tail gap") {
    const auto seq = decay_scenario(20000).sequence();
    double tail = 0.0;
    for (std::size_t n = 18001; n <= seq.horizon(); ++n) tail = std::max(tail, as_gap(seq, n));
    CHECK(tail < 1e-3);

    const auto block = builtin_family("block_oscillating", {{"amp", {0.01}}}, two_atom(), 10000);
    tail = 0.0;
    for (std::size_t n = 9001; n <= block.horizon(); ++n) tail = std::max(tail, as_gap(block, n));
    CHECK(tail < 1e-2);
  }

  TEST_CASE("shipped corpus") {
    const auto corpus = load_corpus(kSource / "scenarios");
    CHECK(corpus.size() >= 7);
    for (const auto& s : corpus) CHECK_MESSAGE(validate_scenario(s).ok(), s.name);
    const auto table = inclusion_table(corpus);
    CHECK(table.violations().empty());
    CHECK(table.golden_mismatches().empty());
    CHECK(table.witnesses.at("f").first > 0);
    CHECK(table.witnesses.at("f").second > 0);
    CHECK(table.witnesses.at("f_R").first > 0);
    CHECK_FALSE(table.intersection_witnesses.empty());
  }

  TEST_CASE("scenario files round through the parser") {
    const auto s = load_scenario(kSource / "scenarios" / "02_counterexample.json");
    CHECK(s.name == "counterexample");
    CHECK(s.horizon == 10000);
    CHECK(s.config.tolerance == 1e-4);
    REQUIRE(s.golden.has_value());
    CHECK(s.golden->verdicts.at("f") == Verdict::fail);

    CHECK_THROWS_AS(parse_scenario("{\"space\": {}"), InputError);
    CHECK_THROWS_AS(parse_scenario(R"({"space": {"atoms": ["a"], "kind": "additive", "weights": [1]},
                                       "sequence": {"family": "constant", "params": {"c": 1}, "horizon": 5},
                                       "colour": 1})"),
                    InputError);
    CHECK_THROWS_AS(load_scenario(kSource / "tests" / "fixtures" / "malformed.json"), InputError);
    CHECK_THROWS_AS(load_corpus(kSource / "tests" / "fixtures" / "empty_corpus"), InputError);
    CHECK_THROWS_AS(load_corpus(kSource / "no_such_dir"), InputError);

    const auto bad = load_scenario(kSource / "tests" / "fixtures" / "duality_violation.json");
    const auto report = validate_scenario(bad);
    CHECK_FALSE(report.ok());
    CHECK_FALSE(report.find("duality")->passed);
  }

  TEST_CASE("atom cap") {
    const std::string three = R"({"space": {"atoms": ["a", "b", "c"], "kind": "additive", "weights": [0.2, 0.3, 0.5]},
                                  "sequence": {"family": "constant", "params": {"c": 1}, "horizon": 5}})";
    CHECK_NOTHROW(parse_scenario(three, 3));
    CHECK_THROWS_AS(parse_scenario(three, 2), InputError);
  }
}
