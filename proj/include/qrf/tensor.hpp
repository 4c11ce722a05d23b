#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qrf {

/// One tensor factor: an id unique within a composite space, a dimension,
/// and human-readable basis vector names.
struct FactorLabel {
    std::string id;
    int dim = 0;
    std::vector<std::string> basis_names;
};

/// Throws ConfigError if the label is internally inconsistent (dimension
/// mismatch, duplicate basis names, non-positive dimension).
void validate_factor(const FactorLabel& f);

/// Pure state over an ordered list of labeled factors. Factor 0 is the
/// slowest index: flat = sum_f idx_f * prod_{f' > f} dim_{f'}.
class LabeledState {
public:
    LabeledState() = default;
    /// Throws NumericError when require_normalized and the norm is off by
    /// more than 1e-9; otherwise records the normalization flag.
    LabeledState(std::vector<FactorLabel> factors, Eigen::VectorXcd amplitudes,
                 bool require_normalized = true);

    const std::vector<FactorLabel>& factors() const { return factors_; }
    const Eigen::VectorXcd& amplitudes() const { return amps_; }
    Eigen::Index dim() const { return amps_.size(); }
    bool is_normalized() const { return normalized_; }

    /// Position of a factor id; throws ConfigError if absent.
    int factor_position(const std::string& id) const;
    std::vector<std::string> factor_ids() const;

private:
    std::vector<FactorLabel> factors_;
    Eigen::VectorXcd amps_;
    bool normalized_ = false;
};

/// Density operator over labeled factors, same index convention as
/// LabeledState. Hermiticity is checked on construction (1e-10); positivity
/// is deferred to spectrum().
class LabeledDensity {
public:
    LabeledDensity() = default;
    LabeledDensity(std::vector<FactorLabel> factors, Eigen::MatrixXcd matrix);

    const std::vector<FactorLabel>& factors() const { return factors_; }
    const Eigen::MatrixXcd& matrix() const { return mat_; }
    Eigen::Index dim() const { return mat_.rows(); }
    int factor_position(const std::string& id) const;

private:
    std::vector<FactorLabel> factors_;
    Eigen::MatrixXcd mat_;
};

/// Kronecker product of states; factor lists concatenate. Throws
/// ConfigError on duplicate factor ids.
LabeledState tensor(const std::vector<LabeledState>& parts);

LabeledDensity density_of(const LabeledState& psi);

/// Partial trace keeping the given factor ids (any order; output factors
/// keep their relative order from the input). Passing every id returns the
/// input; passing none yields the 1x1 total trace.
LabeledDensity partial_trace(const LabeledDensity& rho,
                             const std::vector<std::string>& kept_ids);

/// Removes all off-diagonal entries in the labeled product basis.
LabeledDensity dephase(const LabeledDensity& rho);

/// Contracts <probe| with one factor. Returns the normalized remainder and
/// the pre-normalization squared norm (the outcome probability). Throws
/// ZeroOverlapError when that weight is below 1e-12.
std::pair<LabeledState, double> condition(const LabeledState& psi,
                                          const std::string& factor_id,
                                          const Eigen::VectorXcd& probe);

/// Tensor a basis vector of `factor` into `rest` at the given factor
/// position. Inverse of condition() for product states.
LabeledState embed(const LabeledState& rest, const FactorLabel& factor,
                   int position, int basis_index);

/// Eigenvalues sorted descending, clamped to [0, 1]. Throws NumericError if
/// the matrix is not Hermitian (1e-8) or an eigenvalue is below -1e-9.
std::vector<double> spectrum(const LabeledDensity& rho);

/// Number of eigenvalues above tol.
int numeric_rank(const LabeledDensity& rho, double tol = 1e-9);

/// Schmidt rank of psi across (factor | rest): singular values above tol.
int schmidt_rank(const LabeledState& psi, const std::string& factor_id,
                 double tol = 1e-9);

/// |<a|b>|^2 for states over identical factor lists.
double fidelity(const LabeledState& a, const LabeledState& b);

namespace detail {
Eigen::VectorXcd kron(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);
Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);
/// stride[f] = product of dims of factors after f.
std::vector<Eigen::Index> strides(const std::vector<FactorLabel>& factors);
} // namespace detail

} // namespace qrf
