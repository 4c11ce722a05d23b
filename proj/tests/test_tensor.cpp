#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qrf/errors.hpp"
#include "qrf/tensor.hpp"

using namespace qrf;
using cd = std::complex<double>;

namespace {

FactorLabel qubit(const std::string& id) { return {id, 2, {"0", "1"}}; }
FactorLabel qutrit(const std::string& id) { return {id, 3, {"0", "1", "2"}}; }

LabeledState basis_state(const std::vector<FactorLabel>& factors,
                         const std::vector<int>& indices) {
    Eigen::Index dim = 1, flat = 0;
    for (std::size_t f = 0; f < factors.size(); ++f) {
        dim *= factors[f].dim;
        flat = flat * factors[f].dim + indices[f];
    }
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(dim);
    amps(flat) = 1.0;
    return LabeledState(factors, amps);
}

LabeledState bell_pair(const std::string& a, const std::string& b) {
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(4);
    amps(0) = amps(3) = 1.0 / std::sqrt(2.0);
    return LabeledState({qubit(a), qubit(b)}, amps);
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("factor 0 is the slowest index in the flattening") {
    // |1>_A (x) |2>_B over dims 2 x 3 must sit at flat index 1*3 + 2.
    const LabeledState psi = basis_state({qubit("A"), qutrit("B")}, {1, 2});
    CHECK(psi.dim() == 6);
    CHECK(std::abs(psi.amplitudes()(5) - 1.0) < 1e-15);
    const auto strides = detail::strides(psi.factors());
    CHECK(strides == std::vector<Eigen::Index>{3, 1});
}

TEST_CASE("tensor concatenates factor lists in argument order") {
    const LabeledState a = basis_state({qubit("A")}, {1});
    const LabeledState b = basis_state({qutrit("B")}, {2});
    const LabeledState ab = tensor({a, b});
    CHECK(ab.factor_ids() == std::vector<std::string>{"A", "B"});
    CHECK(std::abs(ab.amplitudes()(5) - 1.0) < 1e-15);

    CHECK_THROWS_AS(tensor({a, a}), ConfigError);
}

TEST_CASE("norm is checked on construction when required") {
    Eigen::VectorXcd amps(2);
    amps << 0.5, 0.5;
    CHECK_THROWS_AS(LabeledState({qubit("A")}, amps), NumericError);
    const LabeledState unnorm({qubit("A")}, amps, false);
    CHECK_FALSE(unnorm.is_normalized());
}

TEST_CASE("partial trace of a Bell pair is maximally mixed on each side") {
    const LabeledDensity rho = density_of(bell_pair("A", "B"));
    for (const std::string id : {"A", "B"}) {
        const LabeledDensity r = partial_trace(rho, {id});
        CHECK(r.dim() == 2);
        CHECK(max_abs(r.matrix() - 0.5 * Eigen::MatrixXcd::Identity(2, 2)) < 1e-14);
    }
    CHECK(partial_trace(rho, {"A", "B"}).matrix().isApprox(rho.matrix()));
    const LabeledDensity all_traced = partial_trace(rho, {});
    CHECK(all_traced.dim() == 1);
    CHECK(std::abs(all_traced.matrix()(0, 0) - 1.0) < 1e-14);
}

TEST_CASE("partial trace matches an explicit index contraction") {
    // Random 3-factor pure state; trace out the middle factor and compare
    // against the contraction written out with loops.
    const std::vector<FactorLabel> factors = {qubit("A"), qutrit("B"), qubit("C")};
    Eigen::VectorXcd amps(12);
    for (Eigen::Index i = 0; i < 12; ++i)
        amps(i) = cd(std::cos(1.3 * static_cast<double>(i) + 0.7),
                     std::sin(2.1 * static_cast<double>(i)));
    amps.normalize();
    const LabeledState psi(factors, amps);
    const LabeledDensity rho = density_of(psi);
    const LabeledDensity reduced = partial_trace(rho, {"A", "C"});

    Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(4, 4);
    for (int a = 0; a < 2; ++a)
        for (int c = 0; c < 2; ++c)
            for (int a2 = 0; a2 < 2; ++a2)
                for (int c2 = 0; c2 < 2; ++c2)
                    for (int b = 0; b < 3; ++b)
                        expect(a * 2 + c, a2 * 2 + c2) +=
                            amps(a * 6 + b * 2 + c) *
                            std::conj(amps(a2 * 6 + b * 2 + c2));
    CHECK(max_abs(reduced.matrix() - expect) < 1e-14);
    CHECK(reduced.factors()[0].id == "A");
    CHECK(reduced.factors()[1].id == "C");

    // Kept ids may come in any order; the output keeps input factor order.
    const LabeledDensity same = partial_trace(rho, {"C", "A"});
    CHECK(max_abs(same.matrix() - expect) < 1e-14);
}

TEST_CASE("dephasing keeps the diagonal and kills the rest") {
    const LabeledDensity rho = density_of(bell_pair("A", "B"));
    const LabeledDensity d = dephase(rho);
    CHECK(std::abs(d.matrix()(0, 0) - 0.5) < 1e-15);
    CHECK(std::abs(d.matrix()(3, 3) - 0.5) < 1e-15);
    CHECK(std::abs(d.matrix()(0, 3)) == 0.0);
}

TEST_CASE("conditioning a Bell pair collapses the partner and reports the weight") {
    const LabeledState bell = bell_pair("A", "B");
    Eigen::VectorXcd probe(2);
    probe << 1.0, 0.0;
    const auto [rest, weight] = condition(bell, "A", probe);
    CHECK(weight == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rest.factor_ids() == std::vector<std::string>{"B"});
    CHECK(std::abs(rest.amplitudes()(0) - 1.0) < 1e-12);

    // A probe orthogonal to the state's support has zero outcome weight.
    const LabeledState zero = basis_state({qubit("A"), qubit("B")}, {0, 0});
    Eigen::VectorXcd one(2);
    one << 0.0, 1.0;
    CHECK_THROWS_AS(condition(zero, "A", one), ZeroOverlapError);
}

TEST_CASE("embed is the inverse of conditioning on a product state") {
    const LabeledState rest = basis_state({qutrit("B")}, {2});
    const LabeledState whole = embed(rest, qubit("A"), 0, 1);
    CHECK(whole.factor_ids() == std::vector<std::string>{"A", "B"});
    Eigen::VectorXcd probe(2);
    probe << 0.0, 1.0;
    const auto [back, weight] = condition(whole, "A", probe);
    CHECK(weight == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(max_abs(back.amplitudes() - rest.amplitudes()) < 1e-14);
}

TEST_CASE("spectrum sorts descending and rejects non-Hermitian input") {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 0) = 0.25;
    m(1, 1) = 0.75;
    const LabeledDensity rho({qubit("A")}, m);
    const auto eigs = spectrum(rho);
    CHECK(eigs.size() == 2u);
    CHECK(eigs[0] == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(eigs[1] == doctest::Approx(0.25).epsilon(1e-14));

    Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(2, 2);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(LabeledDensity({qubit("A")}, bad), NumericError);
}

TEST_CASE("numeric rank counts eigenvalues above the cutoff") {
    const LabeledDensity bell = density_of(bell_pair("A", "B"));
    CHECK(numeric_rank(bell) == 1);
    CHECK(numeric_rank(partial_trace(bell, {"A"})) == 2);
}

TEST_CASE("schmidt rank distinguishes product from entangled states") {
    const LabeledState product = basis_state({qubit("A"), qubit("B")}, {1, 0});
    CHECK(schmidt_rank(product, "A") == 1);
    CHECK(schmidt_rank(bell_pair("A", "B"), "A") == 2);
    CHECK(schmidt_rank(bell_pair("A", "B"), "B") == 2);
}

TEST_CASE("fidelity is the squared overlap") {
    const LabeledState a = basis_state({qubit("A"), qubit("B")}, {0, 0});
    const LabeledState bell = bell_pair("A", "B");
    CHECK(fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fidelity(a, bell) == doctest::Approx(0.5).epsilon(1e-14));
}
