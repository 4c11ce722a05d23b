#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qrf/config.hpp"
#include "qrf/errors.hpp"

using namespace qrf;

namespace {

const char* kMinimalConfig = R"({
    "group": {"kind": "cyclic", "n": 2},
    "frames": [{}, {}]
})";

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

} // namespace

TEST_CASE("a minimal config fills in every default") {
    const ExperimentSpec spec = parse_config(kMinimalConfig);
    CHECK(spec.group.kind == GroupKind::Cyclic);
    CHECK(spec.group.n == 2);
    CHECK(spec.frames.size() == 2u);
    CHECK(spec.frames[0].ideal);
    CHECK(spec.system.regular);
    CHECK(spec.trials == 50);
    CHECK(spec.rng_seed == 1u);
    CHECK(spec.alphas == std::vector<double>{0.3, 0.5, 1.0, 2.0, 3.0});
    CHECK(spec.tolerance == 1e-9);
    CHECK(spec.log_base == LogBase::natural);
    CHECK(spec.subset_cap == 64);
    CHECK_FALSE(spec.tradeoff_search.has_value());
    // Absent "checks" resolves to everything applicable here: all of them.
    CHECK(spec.checks == all_checks());
}

TEST_CASE("an explicit empty check list runs nothing") {
    const ExperimentSpec spec = parse_config(R"({
        "group": {"kind": "cyclic", "n": 2},
        "frames": [{}, {}],
        "checks": []
    })");
    CHECK(spec.checks.empty());
}

TEST_CASE("unknown keys are rejected with their path") {
    CHECK(contains(config_error_message([] {
              parse_config(R"({"group": {"kind": "cyclic", "n": 2},
                               "frames": [{}, {}], "trails": 3})");
          }),
          "trails"));
    CHECK(contains(config_error_message([] {
              parse_config(R"({"group": {"kind": "cyclic", "n": 2, "order": 2},
                               "frames": [{}, {}]})");
          }),
          "group"));
    const std::string frame_err = config_error_message([] {
        parse_config(R"({"group": {"kind": "cyclic", "n": 2},
                         "frames": [{}, {"mult": [1, 0]}]})");
    });
    CHECK(contains(frame_err, "frames[1]"));
    CHECK(contains(frame_err, "mult"));
}

TEST_CASE("malformed JSON and wrong types are configuration errors") {
    CHECK_THROWS_AS(parse_config("{"), ConfigError);
    CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
    CHECK(contains(config_error_message([] {
              parse_config(R"({"group": {"kind": "cyclic", "n": "two"},
                               "frames": [{}, {}]})");
          }),
          "group.n"));
    CHECK(contains(config_error_message([] {
              parse_config(R"({"group": {"kind": "klein", "n": 4},
                               "frames": [{}, {}]})");
          }),
          "klein"));
    CHECK(contains(config_error_message([] {
              parse_config(R"({"group": {"kind": "cyclic", "n": 2},
                               "frames": [{}, {}], "checks": ["theorem9"]})");
          }),
          "theorem9"));
}

TEST_CASE("overfull multiplicities are refused unless explicitly forced") {
    const std::string msg = config_error_message([] {
        parse_config(R"({"group": {"kind": "cyclic", "n": 2},
                         "frames": [{"mults": [2, 0]}, {}]})");
    });
    CHECK(contains(msg, "the multiplicities must satisfy"));

    const ExperimentSpec forced = parse_config(R"({
        "group": {"kind": "cyclic", "n": 2},
        "frames": [{"mults": [2, 0], "qrf_wellformed": false}, {}],
        "checks": ["povm"]
    })");
    CHECK_FALSE(forced.frames[0].ideal);
    CHECK_FALSE(forced.frames[0].qrf_wellformed);
    CHECK(forced.frames[0].mults == std::vector<int>{2, 0});
}

TEST_CASE("a frame with multiplicities is implicitly non-ideal") {
    const ExperimentSpec spec = parse_config(R"({
        "group": {"kind": "cyclic", "n": 3},
        "frames": [{"mults": [1, 1, 0]}, {"ideal": true}],
        "checks": ["theorem3", "povm"]
    })");
    CHECK_FALSE(spec.frames[0].ideal);
    CHECK(spec.frames[1].ideal);
}

TEST_CASE("serialization round-trips every preset") {
    for (const std::string& name : preset_names()) {
        const ExperimentSpec spec = preset_spec(name);
        const ExperimentSpec back = parse_config(serialize_spec(spec));
        CHECK(back == spec);
        CHECK(spec_hash(back) == spec_hash(spec));
        CHECK(serialize_spec(back) == serialize_spec(spec));
    }
}

TEST_CASE("explicit seeds survive the round trip") {
    const char* text = R"({
        "group": {"kind": "cyclic", "n": 2},
        "frames": [{"mults": [1, 1], "seed": [[0.6, 0.0], [0.0, -0.8]]}, {}],
        "checks": ["theorem3", "povm"],
        "seed": 99,
        "log_base": "two",
        "tradeoff_search": {"attempts": 17, "expect_witness": true}
    })";
    const ExperimentSpec spec = parse_config(text);
    CHECK(spec.frames[0].seed ==
          std::vector<std::complex<double>>{{0.6, 0.0}, {0.0, -0.8}});
    CHECK(spec.rng_seed == 99u);
    CHECK(spec.log_base == LogBase::two);
    REQUIRE(spec.tradeoff_search.has_value());
    CHECK(spec.tradeoff_search->attempts == 17);
    CHECK(spec.tradeoff_search->expect_witness);
    CHECK(parse_config(serialize_spec(spec)) == spec);
}

TEST_CASE("spec hashes separate the presets") {
    const auto names = preset_names();
    for (std::size_t a = 0; a < names.size(); ++a)
        for (std::size_t b = a + 1; b < names.size(); ++b)
            CHECK(spec_hash(preset_spec(names[a])) != spec_hash(preset_spec(names[b])));
}

TEST_CASE("exactly the six documented presets exist, in order") {
    CHECK(preset_names() ==
          std::vector<std::string>{"z2-ideal-pair", "z3-three-frames",
                                   "s3-two-frames", "z2-nonideal-deff1",
                                   "z3-tradeoff-violation", "zn-clock-cutoff"});
    CHECK_THROWS_AS(preset_spec("z4-ideal-pair"), ConfigError);
    for (const std::string& name : preset_names())
        CHECK_FALSE(preset_description(name).empty());
}

TEST_CASE("the clock preset truncates charges beyond the cutoff") {
    const ExperimentSpec spec = preset_spec("zn-clock-cutoff");
    CHECK(spec.group.kind == GroupKind::Cyclic);
    CHECK(spec.group.n == 8);
    for (const auto& fc : spec.frames) {
        REQUIRE(fc.mults.size() == 8u);
        for (int q = 0; q < 8; ++q) {
            const int charge = std::min(q, 8 - q); // distance from 0 mod 8
            CHECK(fc.mults[static_cast<std::size_t>(q)] == (charge <= 2 ? 1 : 0));
        }
    }
}

TEST_CASE("reports serialize deterministically") {
    ExperimentSpec spec = preset_spec("z2-ideal-pair");
    spec.trials = 3;
    const std::string first = report_to_json(run_checks(spec));
    const std::string second = report_to_json(run_checks(spec));
    CHECK(first == second);
    CHECK(contains(first, "\"schema_version\""));
    CHECK(contains(first, "\"spec_hash\""));
    CHECK(contains(first, "\"all_pass\": true"));
}

TEST_CASE("run_experiment writes the requested files and reports failure codes") {
    namespace fs = std::filesystem;
    const fs::path dir =
        fs::temp_directory_path() / "qrf-config-test" / "run-files";
    fs::remove_all(dir.parent_path());

    ExperimentSpec spec = preset_spec("z2-ideal-pair");
    RunOptions opts;
    opts.trials = 3;
    opts.out_dir = dir.string();
    opts.write_csv = true;
    std::ostringstream log;
    CHECK(run_experiment(spec, opts, log) == 0);
    CHECK(fs::exists(dir / "report.json"));
    CHECK(fs::exists(dir / "lemma1.csv"));
    CHECK(fs::exists(dir / "trivialization.csv"));
    CHECK(contains(log.str(), "all checks passed"));

    // The same CSV starts with its header row.
    std::ifstream csv(dir / "lemma1.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "trial,pair_subsets,max_residual");

    // An unreachable tolerance must flip the exit code to 2.
    RunOptions strict = opts;
    strict.tolerance = 1e-30;
    std::ostringstream log2;
    CHECK(run_experiment(spec, strict, log2) == 2);
    CHECK(contains(log2.str(), "FAIL"));

    fs::remove_all(dir.parent_path());
}

TEST_CASE("loading a missing config file is a configuration error") {
    CHECK_THROWS_AS(load_config("/no/such/qrf-config.json"), ConfigError);
}
