#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qrf/verify.hpp"

namespace qrf {

/// Parses a JSON experiment config into a validated spec. Unknown keys are
/// rejected by name, defaults are materialized, and an absent "checks" key
/// resolves to every check applicable to the configuration (an explicit
/// empty list runs none). Throws ConfigError with the offending key path.
ExperimentSpec parse_config(const std::string& json_text);

/// parse_config on a file's contents. Missing/unreadable file is a
/// ConfigError.
ExperimentSpec load_config(const std::string& path);

/// Canonical JSON for a spec: fixed key order, defaults written out.
/// parse_config(serialize_spec(s)) == s.
std::string serialize_spec(const ExperimentSpec& spec);

/// FNV-1a 64 over the compact canonical serialization; reports carry it so
/// two reports can be traced to the same configuration.
std::uint64_t spec_hash(const ExperimentSpec& spec);
std::string spec_hash_hex(const ExperimentSpec& spec);

std::vector<std::string> preset_names();
ExperimentSpec preset_spec(const std::string& name);
std::string preset_description(const std::string& name);

struct RunOptions {
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    std::optional<double> tolerance;
    std::string out_dir = ".";
    bool write_json = true;
    bool write_csv = false;
};

/// Full report as deterministic JSON: fixed key order, floats at 17
/// significant digits, no timestamps. Identical (spec, seed) pairs produce
/// byte-identical text.
std::string report_to_json(const InvariantReport& report);

/// Writes report.json and, when enabled, one <check>.csv per check into
/// opts.out_dir (created if missing).
void write_report_files(const InvariantReport& report, const RunOptions& opts);

/// Applies overrides, runs the checks, writes outputs, and prints one
/// summary line per check. Returns 0 when everything passed, 2 on check
/// failure. Configuration problems throw ConfigError (CLI exit 1).
int run_experiment(ExperimentSpec spec, const RunOptions& opts, std::ostream& out);

} // namespace qrf
