#include "qrf/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qrf/errors.hpp"

namespace qrf {

namespace detail {

Eigen::VectorXcd kron(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    Eigen::VectorXcd out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r)
        for (Eigen::Index c = 0; c < a.cols(); ++c)
            out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    return out;
}

std::vector<Eigen::Index> strides(const std::vector<FactorLabel>& factors) {
    std::vector<Eigen::Index> s(factors.size(), 1);
    for (int f = static_cast<int>(factors.size()) - 2; f >= 0; --f)
        s[static_cast<std::size_t>(f)] =
            s[static_cast<std::size_t>(f) + 1] * factors[static_cast<std::size_t>(f) + 1].dim;
    return s;
}

} // namespace detail

namespace {

Eigen::Index total_dim(const std::vector<FactorLabel>& factors) {
    Eigen::Index d = 1;
    for (const auto& f : factors) d *= f.dim;
    return d;
}

void validate_factor_list(const std::vector<FactorLabel>& factors) {
    std::set<std::string> ids;
    for (const auto& f : factors) {
        validate_factor(f);
        if (!ids.insert(f.id).second)
            throw ConfigError("duplicate factor id \"" + f.id + "\"");
    }
}

/// Offsets of every flat sub-index combination of `positions` within the full
/// index space, so a partial trace is two table lookups per entry.
std::vector<Eigen::Index> offset_table(const std::vector<FactorLabel>& factors,
                                       const std::vector<int>& positions) {
    auto full_strides = detail::strides(factors);
    Eigen::Index count = 1;
    for (int p : positions) count *= factors[static_cast<std::size_t>(p)].dim;
    std::vector<Eigen::Index> offsets(static_cast<std::size_t>(count), 0);
    Eigen::Index repeat = 1;
    for (int p : positions) {
        const Eigen::Index dim = factors[static_cast<std::size_t>(p)].dim;
        const Eigen::Index stride = full_strides[static_cast<std::size_t>(p)];
        // positions are processed slow-to-fast; `repeat` is the block length
        // already filled for earlier positions.
        const Eigen::Index block = count / (repeat * dim);
        for (Eigen::Index i = 0; i < count; ++i) {
            Eigen::Index digit = (i / block) % dim;
            offsets[static_cast<std::size_t>(i)] += digit * stride;
        }
        repeat *= dim;
    }
    return offsets;
}

} // namespace

void validate_factor(const FactorLabel& f) {
    if (f.dim <= 0)
        throw ConfigError("factor \"" + f.id + "\" has non-positive dimension");
    if (!f.basis_names.empty()) {
        if (static_cast<int>(f.basis_names.size()) != f.dim)
            throw ConfigError("factor \"" + f.id + "\" basis names do not match its dimension");
        std::set<std::string> names(f.basis_names.begin(), f.basis_names.end());
        if (static_cast<int>(names.size()) != f.dim)
            throw ConfigError("factor \"" + f.id + "\" has duplicate basis names");
    }
}

LabeledState::LabeledState(std::vector<FactorLabel> factors, Eigen::VectorXcd amplitudes,
                           bool require_normalized)
    : factors_(std::move(factors)), amps_(std::move(amplitudes)) {
    validate_factor_list(factors_);
    if (amps_.size() != total_dim(factors_))
        throw ConfigError("amplitude vector length does not match factor dimensions");
    double n = amps_.norm();
    normalized_ = std::abs(n - 1.0) <= 1e-9;
    if (require_normalized && !normalized_)
        throw NumericError("state is not normalized (norm = " + std::to_string(n) + ")");
}

int LabeledState::factor_position(const std::string& id) const {
    for (std::size_t i = 0; i < factors_.size(); ++i)
        if (factors_[i].id == id) return static_cast<int>(i);
    throw ConfigError("no factor with id \"" + id + "\"");
}

std::vector<std::string> LabeledState::factor_ids() const {
    std::vector<std::string> ids;
    ids.reserve(factors_.size());
    for (const auto& f : factors_) ids.push_back(f.id);
    return ids;
}

LabeledDensity::LabeledDensity(std::vector<FactorLabel> factors, Eigen::MatrixXcd matrix)
    : factors_(std::move(factors)), mat_(std::move(matrix)) {
    validate_factor_list(factors_);
    if (mat_.rows() != mat_.cols() || mat_.rows() != total_dim(factors_))
        throw ConfigError("density matrix shape does not match factor dimensions");
    double herm = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-10)
        throw NumericError("density matrix is not Hermitian (deviation " +
                           std::to_string(herm) + ")");
}

int LabeledDensity::factor_position(const std::string& id) const {
    for (std::size_t i = 0; i < factors_.size(); ++i)
        if (factors_[i].id == id) return static_cast<int>(i);
    throw ConfigError("no factor with id \"" + id + "\"");
}

LabeledState tensor(const std::vector<LabeledState>& parts) {
    if (parts.empty()) throw ConfigError("tensor of zero states");
    std::vector<FactorLabel> factors;
    Eigen::VectorXcd amps = Eigen::VectorXcd::Constant(1, 1.0);
    bool normalized = true;
    for (const auto& p : parts) {
        factors.insert(factors.end(), p.factors().begin(), p.factors().end());
        amps = detail::kron(amps, p.amplitudes());
        normalized = normalized && p.is_normalized();
    }
    return LabeledState(std::move(factors), std::move(amps), normalized);
}

LabeledDensity density_of(const LabeledState& psi) {
    return LabeledDensity(psi.factors(),
                          psi.amplitudes() * psi.amplitudes().adjoint());
}

LabeledDensity partial_trace(const LabeledDensity& rho,
                             const std::vector<std::string>& kept_ids) {
    const auto& factors = rho.factors();
    std::set<std::string> kept_set(kept_ids.begin(), kept_ids.end());
    if (kept_set.size() != kept_ids.size())
        throw ConfigError("partial_trace: repeated id in kept set");
    for (const auto& id : kept_ids) (void)rho.factor_position(id);

    std::vector<int> kept_pos, traced_pos;
    std::vector<FactorLabel> kept_factors;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (kept_set.count(factors[i].id)) {
            kept_pos.push_back(static_cast<int>(i));
            kept_factors.push_back(factors[i]);
        } else {
            traced_pos.push_back(static_cast<int>(i));
        }
    }

    auto kept_off = offset_table(factors, kept_pos);
    auto traced_off = offset_table(factors, traced_pos);
    const Eigen::Index kd = static_cast<Eigen::Index>(kept_off.size());

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(kd, kd);
    const auto& m = rho.matrix();
    for (Eigen::Index r = 0; r < kd; ++r)
        for (Eigen::Index c = 0; c < kd; ++c) {
            std::complex<double> acc = 0.0;
            for (Eigen::Index t : traced_off)
                acc += m(kept_off[static_cast<std::size_t>(r)] + t,
                         kept_off[static_cast<std::size_t>(c)] + t);
            out(r, c) = acc;
        }
    if (kept_factors.empty())
        kept_factors.push_back({"(unit)", 1, {"0"}});
    return LabeledDensity(std::move(kept_factors), std::move(out));
}

LabeledDensity dephase(const LabeledDensity& rho) {
    Eigen::MatrixXcd d = rho.matrix().diagonal().real().cast<std::complex<double>>().asDiagonal();
    return LabeledDensity(rho.factors(), std::move(d));
}

std::pair<LabeledState, double> condition(const LabeledState& psi,
                                          const std::string& factor_id,
                                          const Eigen::VectorXcd& probe) {
    const int pos = psi.factor_position(factor_id);
    const auto& factors = psi.factors();
    const Eigen::Index d = factors[static_cast<std::size_t>(pos)].dim;
    if (probe.size() != d)
        throw ConfigError("probe dimension does not match factor \"" + factor_id + "\"");

    Eigen::Index post = 1;
    for (std::size_t f = static_cast<std::size_t>(pos) + 1; f < factors.size(); ++f)
        post *= factors[f].dim;
    Eigen::Index pre = psi.dim() / (d * post);

    std::vector<FactorLabel> rest;
    for (std::size_t f = 0; f < factors.size(); ++f)
        if (static_cast<int>(f) != pos) rest.push_back(factors[f]);

    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(pre * post);
    const auto& amps = psi.amplitudes();
    for (Eigen::Index a = 0; a < pre; ++a)
        for (Eigen::Index b = 0; b < post; ++b) {
            std::complex<double> acc = 0.0;
            for (Eigen::Index i = 0; i < d; ++i)
                acc += std::conj(probe(i)) * amps((a * d + i) * post + b);
            out(a * post + b) = acc;
        }

    double weight = out.squaredNorm();
    if (weight < 1e-12)
        throw ZeroOverlapError("conditioning on factor \"" + factor_id +
                               "\" has zero overlap (weight " + std::to_string(weight) + ")");
    out /= std::sqrt(weight);
    if (rest.empty()) rest.push_back({"(unit)", 1, {"0"}});
    return {LabeledState(std::move(rest), std::move(out)), weight};
}

LabeledState embed(const LabeledState& rest, const FactorLabel& factor,
                   int position, int basis_index) {
    validate_factor(factor);
    if (position < 0 || position > static_cast<int>(rest.factors().size()))
        throw ConfigError("embed position out of range");
    if (basis_index < 0 || basis_index >= factor.dim)
        throw ConfigError("embed basis index out of range");

    std::vector<FactorLabel> factors = rest.factors();
    factors.insert(factors.begin() + position, factor);

    Eigen::Index post = 1;
    for (std::size_t f = static_cast<std::size_t>(position) + 1; f < factors.size(); ++f)
        post *= factors[f].dim;
    Eigen::Index pre = rest.dim() / post;

    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(rest.dim() * factor.dim);
    const auto& amps = rest.amplitudes();
    for (Eigen::Index a = 0; a < pre; ++a)
        for (Eigen::Index b = 0; b < post; ++b)
            out((a * factor.dim + basis_index) * post + b) = amps(a * post + b);
    return LabeledState(std::move(factors), std::move(out), rest.is_normalized());
}

std::vector<double> spectrum(const LabeledDensity& rho) {
    const auto& m = rho.matrix();
    double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-8)
        throw NumericError("spectrum: matrix is not Hermitian");

    std::vector<double> eigs;
    double offdiag = 0.0;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            if (r != c) offdiag = std::max(offdiag, std::abs(m(r, c)));
    if (offdiag == 0.0) {
        // Exactly diagonal (e.g. fresh from dephase): the diagonal is the
        // spectrum, no solver noise.
        eigs.resize(static_cast<std::size_t>(m.rows()));
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            eigs[static_cast<std::size_t>(r)] = m(r, r).real();
    } else {
        Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
        if (solver.info() != Eigen::Success)
            throw NumericError("eigenvalue decomposition failed");
        eigs.assign(solver.eigenvalues().data(),
                    solver.eigenvalues().data() + solver.eigenvalues().size());
    }

    for (double& e : eigs) {
        if (e < -1e-9)
            throw NumericError("density matrix has negative eigenvalue " + std::to_string(e));
        e = std::clamp(e, 0.0, 1.0);
    }
    std::sort(eigs.begin(), eigs.end(), std::greater<double>());
    return eigs;
}

int numeric_rank(const LabeledDensity& rho, double tol) {
    auto eigs = spectrum(rho);
    int rank = 0;
    for (double e : eigs)
        if (e > tol) ++rank;
    return rank;
}

int schmidt_rank(const LabeledState& psi, const std::string& factor_id, double tol) {
    const int pos = psi.factor_position(factor_id);
    const auto& factors = psi.factors();
    const Eigen::Index d = factors[static_cast<std::size_t>(pos)].dim;

    Eigen::Index post = 1;
    for (std::size_t f = static_cast<std::size_t>(pos) + 1; f < factors.size(); ++f)
        post *= factors[f].dim;
    Eigen::Index pre = psi.dim() / (d * post);

    Eigen::MatrixXcd m(d, pre * post);
    const auto& amps = psi.amplitudes();
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index a = 0; a < pre; ++a)
            for (Eigen::Index b = 0; b < post; ++b)
                m(i, a * post + b) = amps((a * d + i) * post + b);

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    int rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > tol) ++rank;
    return rank;
}

double fidelity(const LabeledState& a, const LabeledState& b) {
    if (a.dim() != b.dim())
        throw ConfigError("fidelity: dimension mismatch");
    std::complex<double> ov = a.amplitudes().adjoint() * b.amplitudes();
    return std::norm(ov);
}

} // namespace qrf
