#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qrf/errors.hpp"
#include "qrf/verify.hpp"

using namespace qrf;

namespace {

ExperimentSpec z2_pair_spec(int trials = 5) {
    ExperimentSpec spec;
    spec.group = {GroupKind::Cyclic, 2};
    spec.frames = {FrameConfig{}, FrameConfig{}};
    spec.trials = trials;
    spec.checks = applicable_checks(spec);
    return spec;
}

template <typename F>
std::string config_error_message(F&& f) {
    try {
        f();
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

const CheckResult& result_of(const InvariantReport& report, const std::string& name) {
    for (const auto& r : report.checks)
        if (r.name == name) return r;
    REQUIRE(false);
    return report.checks.front();
}

} // namespace

TEST_CASE("check names round-trip through the lookup") {
    for (Check c : all_checks()) {
        const auto back = check_from_name(check_name(c));
        REQUIRE(back.has_value());
        CHECK(*back == c);
    }
    CHECK_FALSE(check_from_name("not-a-check").has_value());
}

TEST_CASE("applicability follows the frame layout") {
    ExperimentSpec one_ideal;
    one_ideal.group = {GroupKind::Cyclic, 2};
    one_ideal.frames = {FrameConfig{}};
    const auto single = applicable_checks(one_ideal);
    CHECK(single == std::vector<Check>{Check::Povm, Check::Trivialization});

    CHECK(applicable_checks(z2_pair_spec()).size() == all_checks().size());

    ExperimentSpec three = z2_pair_spec();
    three.frames.push_back(FrameConfig{});
    const auto no_pairwise_bound = applicable_checks(three);
    CHECK(no_pairwise_bound.size() == all_checks().size() - 1);
    CHECK(std::find(no_pairwise_bound.begin(), no_pairwise_bound.end(),
                    Check::Theorem3) == no_pairwise_bound.end());

    ExperimentSpec mixed = z2_pair_spec();
    mixed.frames[0].ideal = false;
    mixed.frames[0].mults = {1, 0};
    CHECK(applicable_checks(mixed) ==
          std::vector<Check>{Check::Theorem3, Check::Povm, Check::Trivialization});

    mixed.frames[1].ideal = false;
    mixed.frames[1].mults = {1, 0};
    CHECK(applicable_checks(mixed) ==
          std::vector<Check>{Check::Theorem3, Check::Povm});
}

TEST_CASE("spec validation names the offending field") {
    ExperimentSpec spec = z2_pair_spec();

    spec.frames[0].mults = {1, 1};
    CHECK(contains(config_error_message([&] { validate_spec(spec); }),
                   "no multiplicities"));
    spec.frames[0].mults.clear();

    spec.frames[1].ideal = false;
    spec.frames[1].mults = {2, 0};
    const std::string overfull = config_error_message([&] { validate_spec(spec); });
    CHECK(contains(overfull, "the multiplicities must satisfy"));
    CHECK(contains(overfull, "qrf_wellformed"));
    spec.frames[1].qrf_wellformed = false;
    spec.checks = applicable_checks(spec);
    CHECK_NOTHROW(validate_spec(spec));
}

TEST_CASE("inapplicable and duplicated checks are rejected up front") {
    ExperimentSpec spec;
    spec.group = {GroupKind::Cyclic, 2};
    spec.frames = {FrameConfig{}};
    spec.checks = {Check::Lemma1};
    CHECK(contains(config_error_message([&] { validate_spec(spec); }), "lemma1"));

    ExperimentSpec dup = z2_pair_spec();
    dup.checks = {Check::Povm, Check::Povm};
    CHECK(contains(config_error_message([&] { validate_spec(dup); }), "listed twice"));

    ExperimentSpec tradeoff = z2_pair_spec();
    tradeoff.frames.push_back(FrameConfig{});
    tradeoff.checks = applicable_checks(tradeoff);
    tradeoff.tradeoff_search = TradeoffSearchConfig{10, false};
    CHECK(contains(config_error_message([&] { validate_spec(tradeoff); }),
                   "exactly two frames"));
}

TEST_CASE("a space with no invariant states exhausts the sampler") {
    ExperimentSpec spec;
    spec.group = {GroupKind::Cyclic, 2};
    FrameConfig trivial_frame;
    trivial_frame.ideal = false;
    trivial_frame.mults = {1, 0};
    spec.frames = {trivial_frame};
    spec.system.regular = false;
    spec.system.mults = {0, 1};
    spec.checks = {Check::Povm};
    spec.trials = 1;
    const SpacePtr space = build_space(spec);
    CHECK(space->physical_dimension() == 0);
    Rng rng = Rng::stream(1, 0);
    CHECK_THROWS_AS(sample_physical(space, rng), NumericError);
}

TEST_CASE("every check passes on an ideal pair and the report is fully populated") {
    const ExperimentSpec spec = z2_pair_spec(5);
    const InvariantReport report = run_checks(spec);
    CHECK(report.all_pass);
    CHECK(report.checks.size() == all_checks().size());
    for (const auto& r : report.checks) {
        CHECK(r.pass);
        CHECK(r.max_residual <= r.tolerance);
        CHECK_FALSE(r.csv_columns.empty());
        CHECK(r.trials_excluded == 0);
        if (r.name == "povm") {
            CHECK(r.trials_run == 0);
            CHECK(r.rows.size() == spec.frames.size());
        } else {
            CHECK(r.trials_run == spec.trials);
            CHECK_FALSE(r.rows.empty());
            for (const auto& row : r.rows)
                CHECK(row.size() == r.csv_columns.size());
        }
    }
    CHECK_FALSE(report.tradeoff.has_value());

    // Bitwise determinism of the numeric payload.
    const InvariantReport again = run_checks(spec);
    for (std::size_t c = 0; c < report.checks.size(); ++c) {
        CHECK(report.checks[c].max_residual == again.checks[c].max_residual);
        CHECK(report.checks[c].rows == again.checks[c].rows);
    }
}

TEST_CASE("trials whose conditioning outcome never occurs are excluded, not hidden") {
    // The non-ideal frame's probe sits in the sign sector while every
    // physical state is pinned to the trivial sector, so each trial's
    // conditioning has exactly zero weight.
    ExperimentSpec spec;
    spec.group = {GroupKind::Cyclic, 2};
    FrameConfig probe_misaligned;
    probe_misaligned.ideal = false;
    probe_misaligned.mults = {1, 1};
    probe_misaligned.seed = {{0.0, 0.0}, {1.0, 0.0}};
    FrameConfig trivial_frame;
    trivial_frame.ideal = false;
    trivial_frame.mults = {1, 0};
    spec.frames = {probe_misaligned, trivial_frame};
    spec.system.regular = false;
    spec.system.mults = {1, 0};
    spec.trials = 5;
    spec.checks = {Check::Theorem3};
    CHECK(build_space(spec)->physical_dimension() == 1);

    const InvariantReport report = run_checks(spec);
    const CheckResult& r = result_of(report, "theorem3");
    CHECK(r.trials_excluded == 5);
    CHECK(r.trials_run == 0);
    // A check that never ran must not claim success.
    CHECK_FALSE(r.pass);
    CHECK_FALSE(report.all_pass);
}

TEST_CASE("ideal frame pairs never produce a tradeoff witness") {
    ExperimentSpec spec = z2_pair_spec();
    const SpacePtr space = build_space(spec);
    int excluded = 0;
    const auto witness =
        find_tradeoff_violation(space, 1, 50, 1e-8, LogBase::natural, &excluded);
    CHECK_FALSE(witness.has_value());
    CHECK(excluded == 0);
}

TEST_CASE("a truncated frame against an ideal one yields a reproducible witness") {
    ExperimentSpec spec;
    spec.group = {GroupKind::Cyclic, 3};
    FrameConfig truncated;
    truncated.ideal = false;
    truncated.mults = {1, 1, 0};
    spec.frames = {truncated, FrameConfig{}};
    spec.checks = {Check::Povm};
    const SpacePtr space = build_space(spec);

    const auto witness =
        find_tradeoff_violation(space, 1, 200, 1e-8, LogBase::natural);
    REQUIRE(witness.has_value());
    CHECK(witness->gap > 1e-6);
    CHECK(witness->attempt >= 0);

    // Re-evaluating the stored state gives back the same gap.
    EntropyParams params;
    CHECK(tradeoff_gap(witness->phys, params) ==
          doctest::Approx(witness->gap).epsilon(1e-12));

    // And re-running the search lands on the same attempt.
    const auto again =
        find_tradeoff_violation(space, 1, 200, 1e-8, LogBase::natural);
    REQUIRE(again.has_value());
    CHECK(again->attempt == witness->attempt);
    CHECK(again->gap == witness->gap);

    EntropyParams alpha2;
    alpha2.alpha = 2.0;
    CHECK_THROWS_AS(tradeoff_gap(witness->phys, alpha2), ConfigError);
}

TEST_CASE("the tradeoff outcome lands in the report when configured") {
    ExperimentSpec spec;
    spec.group = {GroupKind::Cyclic, 3};
    FrameConfig truncated;
    truncated.ideal = false;
    truncated.mults = {1, 1, 0};
    spec.frames = {truncated, FrameConfig{}};
    spec.trials = 3;
    spec.checks = {Check::Povm};
    spec.tradeoff_search = TradeoffSearchConfig{200, true};

    const InvariantReport report = run_checks(spec);
    REQUIRE(report.tradeoff.has_value());
    CHECK(report.tradeoff->expected);
    CHECK(report.tradeoff->found);
    CHECK(report.tradeoff->pass);
    CHECK(report.tradeoff->gap > report.tradeoff->threshold);
    CHECK(report.tradeoff->threshold ==
          doctest::Approx(10.0 * spec.tolerance).epsilon(1e-15));
    CHECK_FALSE(report.tradeoff->witness_amplitudes.empty());
    CHECK(report.all_pass);
}
