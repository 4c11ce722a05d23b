#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qrf/entropy.hpp"
#include "qrf/group.hpp"
#include "qrf/relational.hpp"
#include "qrf/representations.hpp"
#include "qrf/rng.hpp"

namespace qrf {

/// The invariant checks the engine knows how to run. Config files and
/// reports refer to them by the names in check_name().
enum class Check {
    Lemma1,        ///< dephased reductions match across frames up to relabeling
    Theorem1,      ///< diagonal Renyi entropies agree across matched subsystems
    Corollary1,    ///< entanglement + coherence sum constant over frames in Omega
    Moments,       ///< diagonal-observable moments agree across frames
    Theorem2,      ///< entropy difference equals both coherence expressions
    DSMax,         ///< entropy spread equals coherence spread
    Theorem3,      ///< entropy difference bounded by the effective dimension
    Povm,          ///< coherent orbits resolve the identity
    FrameChange,   ///< frame-change unitary consistent with direct reduction
    Trivialization ///< physical-space route reproduces perspective quantities
};

const std::vector<Check>& all_checks();
const std::string& check_name(Check c);
std::optional<Check> check_from_name(const std::string& name);

struct FrameConfig {
    bool ideal = true;
    std::vector<int> mults;                  ///< by irrep index; non-ideal only
    std::vector<std::complex<double>> seed;  ///< optional explicit seed
    /// When true (default), multiplicities above the irrep dimension are
    /// rejected: such a frame cannot resolve the identity. Set false only to
    /// construct deliberate failure demonstrations.
    bool qrf_wellformed = true;

    bool operator==(const FrameConfig&) const = default;
};

struct SystemConfig {
    bool regular = true;     ///< group-label basis; participates in kept sets
    std::vector<int> mults;  ///< used when regular is false

    bool operator==(const SystemConfig&) const = default;
};

struct TradeoffSearchConfig {
    int attempts = 200;
    /// When true, failing to find a witness fails the run.
    bool expect_witness = false;

    bool operator==(const TradeoffSearchConfig&) const = default;
};

/// Complete description of one experiment: the space, the sampling budget,
/// and which checks to run. parse_config() fills defaults; an empty check
/// list runs nothing (vacuous pass).
struct ExperimentSpec {
    GroupSpec group;
    std::vector<FrameConfig> frames;
    SystemConfig system;
    int trials = 50;
    std::uint64_t rng_seed = 1;
    std::vector<double> alphas = {0.3, 0.5, 1.0, 2.0, 3.0};
    double tolerance = 1e-9;
    LogBase log_base = LogBase::natural;
    std::vector<Check> checks;
    /// Kept-set enumeration switches to this many random subsets per trial
    /// once exhaustive enumeration would exceed it.
    int subset_cap = 64;
    std::optional<TradeoffSearchConfig> tradeoff_search;

    bool operator==(const ExperimentSpec&) const = default;
};

/// Checks that can run on this spec's shape, in enum order. Equality checks
/// between frames need two ideal frames; the entropy-spread identities need
/// every frame ideal; the effective-dimension bound needs exactly two
/// frames; the resolution check always applies.
std::vector<Check> applicable_checks(const ExperimentSpec& spec);

/// Structural validation: counts, positivity, multiplicity bounds for
/// well-formed frames, and applicability of every listed check. Throws
/// ConfigError with a specific message.
void validate_spec(const ExperimentSpec& spec);

/// Constructs the composite space the spec describes. Calls validate_spec.
SpacePtr build_space(const ExperimentSpec& spec);

/// Haar-random kinematical state pushed through the invariant projection.
/// Retries on annihilation up to 100 times, then throws NumericError: the
/// spec admits (numerically) no invariant states.
PhysicalState sample_physical(const SpacePtr& space, Rng& rng);

struct CheckResult {
    std::string name;
    bool pass = true;
    double max_residual = 0.0;
    double tolerance = 0.0; ///< threshold max_residual is held against
    int trials_run = 0;
    int trials_excluded = 0; ///< zero-overlap conditioning, counted not hidden
    /// Named scalar extras (sub-residuals, dimensions, counters).
    std::map<std::string, double> details;
    std::vector<std::string> csv_columns;
    std::vector<std::vector<double>> rows;
};

struct TradeoffOutcome {
    bool expected = false;
    bool found = false;
    int attempts_made = 0;
    int attempts_excluded = 0;
    int found_at = -1;
    double gap = 0.0;
    double threshold = 0.0;
    /// Normalized physical amplitudes of the witness, for re-verification.
    std::vector<std::complex<double>> witness_amplitudes;
    bool pass = true; ///< false only when expected and absent
};

struct InvariantReport {
    ExperimentSpec spec;
    std::vector<CheckResult> checks;
    std::optional<TradeoffOutcome> tradeoff;
    bool all_pass = true;
};

/// Runs every check in spec.checks over spec.trials sampled states, plus the
/// witness search when configured. Deterministic function of (spec, seed):
/// per-trial and per-check RNG streams are derived, never shared.
InvariantReport run_checks(const ExperimentSpec& spec);

/// |S_1(dephased other-frame reduction from R1) - S_1(same from R2)|: the
/// two-frame tradeoff quantity that ideal frames pin to zero. Dephasing acts
/// in each factor's own labeled basis. params.alpha must be 1.
double tradeoff_gap(const PhysicalState& phys, const EntropyParams& params);

struct TradeoffWitness {
    PhysicalState phys;
    double gap = 0.0;
    int attempt = -1;
};

/// Samples states until the tradeoff gap exceeds the threshold. Requires a
/// two-frame space. Absence of a witness is a valid outcome (nullopt).
/// Attempts that hit zero-overlap conditioning are counted into *excluded.
std::optional<TradeoffWitness> find_tradeoff_violation(const SpacePtr& space,
                                                       std::uint64_t master_seed,
                                                       int attempts,
                                                       double threshold,
                                                       LogBase base,
                                                       int* excluded = nullptr);

} // namespace qrf
