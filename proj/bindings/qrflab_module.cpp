// Python surface for the library: config-driven runs plus the numeric
// primitives that are useful interactively (entropies, coherence, effective
// dimensions). Everything heavier goes through JSON configs so the Python
// and CLI entry points share one code path.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qrf/config.hpp"
#include "qrf/entropy.hpp"
#include "qrf/errors.hpp"
#include "qrf/group.hpp"
#include "qrf/version.hpp"

namespace py = pybind11;

namespace {

qrf::EntropyParams params_of(double alpha, bool base_two) {
    qrf::EntropyParams p;
    p.alpha = alpha;
    p.base = base_two ? qrf::LogBase::two : qrf::LogBase::natural;
    return p;
}

qrf::GroupSpec group_spec_of(const std::string& kind, int n) {
    if (kind == "cyclic") return {qrf::GroupKind::Cyclic, n};
    if (kind == "dihedral") return {qrf::GroupKind::Dihedral, n};
    if (kind == "symmetric") return {qrf::GroupKind::Symmetric, n};
    throw qrf::ConfigError("unknown group kind \"" + kind +
                           "\" (known: cyclic, dihedral, symmetric)");
}

std::string run_spec(qrf::ExperimentSpec spec, std::optional<int> trials,
                     std::optional<std::uint64_t> seed,
                     std::optional<double> tolerance) {
    if (trials) spec.trials = *trials;
    if (seed) spec.rng_seed = *seed;
    if (tolerance) spec.tolerance = *tolerance;
    qrf::validate_spec(spec);
    return qrf::report_to_json(qrf::run_checks(spec));
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "relational quantum reference frames over finite groups";

    py::register_exception<qrf::ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("version", [] { return std::string(qrf::kVersion); },
          "Library version string.");

    m.def("list_presets", &qrf::preset_names,
          "Names of the built-in experiment presets.");

    m.def("preset_description", &qrf::preset_description, py::arg("name"));

    m.def(
        "preset_config",
        [](const std::string& name) {
            return qrf::serialize_spec(qrf::preset_spec(name));
        },
        py::arg("name"), "Canonical JSON config of a preset.");

    m.def(
        "canonical_config",
        [](const std::string& text) {
            return qrf::serialize_spec(qrf::parse_config(text));
        },
        py::arg("text"),
        "Parses, validates, and re-serializes a JSON config with every "
        "default written out.");

    m.def(
        "config_hash",
        [](const std::string& text) {
            return qrf::spec_hash_hex(qrf::parse_config(text));
        },
        py::arg("text"), "Stable hash of a config, as carried in reports.");

    m.def(
        "run_config",
        [](const std::string& text, std::optional<int> trials,
           std::optional<std::uint64_t> seed, std::optional<double> tolerance) {
            return run_spec(qrf::parse_config(text), trials, seed, tolerance);
        },
        py::arg("text"), py::arg("trials") = std::nullopt,
        py::arg("seed") = std::nullopt, py::arg("tolerance") = std::nullopt,
        "Runs the checks of a JSON config and returns the report as JSON "
        "text (deterministic for a fixed config and seed).");

    m.def(
        "run_preset",
        [](const std::string& name, std::optional<int> trials,
           std::optional<std::uint64_t> seed, std::optional<double> tolerance) {
            return run_spec(qrf::preset_spec(name), trials, seed, tolerance);
        },
        py::arg("name"), py::arg("trials") = std::nullopt,
        py::arg("seed") = std::nullopt, py::arg("tolerance") = std::nullopt,
        "Runs a named preset and returns the report as JSON text.");

    m.def(
        "renyi_entropy",
        [](const Eigen::VectorXd& eigenvalues, double alpha, bool base_two) {
            std::vector<double> eigs(eigenvalues.data(),
                                     eigenvalues.data() + eigenvalues.size());
            return qrf::renyi_from_spectrum(eigs, params_of(alpha, base_two));
        },
        py::arg("eigenvalues"), py::arg("alpha") = 1.0,
        py::arg("base_two") = false,
        "Order-alpha entropy of a probability spectrum.");

    m.def(
        "density_entropy",
        [](const Eigen::MatrixXcd& rho, double alpha, bool base_two) {
            const int d = static_cast<int>(rho.rows());
            std::vector<std::string> names;
            for (int i = 0; i < d; ++i) names.push_back(std::to_string(i));
            const qrf::LabeledDensity density({{"A", d, names}}, rho);
            return qrf::renyi(density, params_of(alpha, base_two));
        },
        py::arg("rho"), py::arg("alpha") = 1.0, py::arg("base_two") = false,
        "Order-alpha entropy of a density matrix.");

    m.def(
        "coherence",
        [](const Eigen::MatrixXcd& rho, double alpha, bool base_two) {
            const int d = static_cast<int>(rho.rows());
            std::vector<std::string> names;
            for (int i = 0; i < d; ++i) names.push_back(std::to_string(i));
            const qrf::LabeledDensity density({{"A", d, names}}, rho);
            return qrf::coherence(density, params_of(alpha, base_two));
        },
        py::arg("rho"), py::arg("alpha") = 1.0, py::arg("base_two") = false,
        "Relative entropy of coherence of a density matrix in the "
        "computational basis.");

    m.def(
        "effective_dimension",
        [](const std::string& kind, int n, const std::vector<int>& target,
           const std::vector<int>& cond, const std::vector<int>& system) {
            const auto ctx = qrf::GroupContext::make(group_spec_of(kind, n));
            return qrf::effective_dimension(ctx->irreps, target, cond, system);
        },
        py::arg("kind"), py::arg("n"), py::arg("target"), py::arg("cond"),
        py::arg("system"),
        "Effective relational dimension of a target frame given the "
        "conditioning frame and system multiplicities (per-irrep vectors).");

    m.def(
        "irrep_dimensions",
        [](const std::string& kind, int n) {
            const auto ctx = qrf::GroupContext::make(group_spec_of(kind, n));
            std::vector<std::pair<std::string, int>> out;
            for (const auto& irr : ctx->irreps.irreps)
                out.emplace_back(irr.label, irr.dim);
            return out;
        },
        py::arg("kind"), py::arg("n"),
        "Irrep labels and dimensions in multiplicity-vector order.");
}
