#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qrf/group.hpp"
#include "qrf/tensor.hpp"

namespace qrf {

/// Group table plus its irreps, shared by every object built over the group.
struct GroupContext {
    GroupTable table;
    IrrepTable irreps;

    static std::shared_ptr<const GroupContext> make(const GroupSpec& spec);
};

using GroupContextPtr = std::shared_ptr<const GroupContext>;

/// A finite-dimensional unitary representation with explicit matrices.
///
/// Two basis conventions occur:
///  - group-label basis (regular representation): basis vectors carry group
///    element labels and every U(g) is a permutation matrix;
///  - sector basis (rep_from_mults): basis vectors are (irrep, copy, row)
///    triples and U(g) is block diagonal, one D_q(g) block per copy.
struct RepSpec {
    GroupContextPtr ctx;
    std::vector<int> mults; ///< per irrep index
    int dim = 0;
    bool group_label_basis = false;
    std::vector<Eigen::MatrixXcd> matrices; ///< one unitary per group element
    std::vector<std::string> basis_names;
    /// For the regular representation only: the unitary change of basis with
    /// W^dag U(g) W block diagonal in (irrep, copy, row) order. Columns are
    /// the matrix-coefficient vectors sqrt(d_q/|G|) conj(D_q(h)_{i c}).
    Eigen::MatrixXcd sector_isomorphism;

    Eigen::MatrixXcd character() const; ///< 1 x |G| row of traces
};

/// Left regular representation in the group-label basis.
RepSpec regular_rep(const GroupContextPtr& ctx);

/// Block-diagonal representation with the given multiplicity per irrep.
/// Throws ConfigError when every multiplicity is zero or counts are negative.
RepSpec rep_from_mults(const GroupContextPtr& ctx, const std::vector<int>& mults);

/// Reference frame: a representation plus a seed vector whose group orbit is
/// the frame's coherent family. Ideal frames are regular representations
/// seeded at the identity label.
struct FrameSpec {
    std::string id;
    RepSpec rep;
    bool ideal = true;
    Eigen::VectorXcd seed;
};

FrameSpec make_ideal_frame(const GroupContextPtr& ctx, std::string id = {});

/// Non-ideal frame from multiplicities. The default seed is the equal-weight
/// superposition over one vector per irrep sector with m_q > 0 (row 0 of
/// copy 0 in each). An explicit seed is normalized. Multiplicities above the
/// irrep dimension are representable here (needed to demonstrate failure
/// cases); the config layer enforces m_q <= d_q for well-formed frames.
FrameSpec make_nonideal_frame(const GroupContextPtr& ctx, std::vector<int> mults,
                              std::optional<Eigen::VectorXcd> seed = std::nullopt,
                              std::string id = {});

Eigen::VectorXcd default_seed(const RepSpec& rep);

/// U(g) |seed>.
Eigen::VectorXcd coherent_orbit(const FrameSpec& frame, int g);

struct PovmCheckResult {
    bool is_resolution = false;
    double residual = 0.0; ///< max-abs deviation of A from the identity
    bool mults_within_irrep_dims = true;
};

/// Builds A = (dim/|G|) sum_g |phi(g)><phi(g)| from the frame's seed orbit
/// and reports how far it is from the identity. is_resolution requires
/// residual < 1e-9. With any m_q > d_q no seed can succeed.
PovmCheckResult check_povm_resolution(const FrameSpec& frame);

/// Kinematical arena: N frames and a system, all carrying the same group,
/// with the diagonal action U(g) = U_R1(g) x ... x U_RN(g) x U_S(g).
/// Frames are the factors "R1".."RN" in order, the system is "S".
/// Immutable after construction; per-element kinematical action matrices are
/// cached eagerly.
class CompositeSpace {
public:
    CompositeSpace(GroupContextPtr ctx, std::vector<FrameSpec> frames, RepSpec system);

    static std::shared_ptr<const CompositeSpace> make(GroupContextPtr ctx,
                                                      std::vector<FrameSpec> frames,
                                                      RepSpec system);

    const GroupContextPtr& ctx() const { return ctx_; }
    int num_frames() const { return static_cast<int>(frames_.size()); }
    const FrameSpec& frame(int i) const { return frames_[static_cast<std::size_t>(i)]; }
    const std::vector<FrameSpec>& frames() const { return frames_; }
    const RepSpec& system() const { return system_; }

    const std::vector<FactorLabel>& kin_factors() const { return kin_factors_; }
    Eigen::Index kin_dim() const { return kin_dim_; }
    std::vector<std::string> factor_ids() const;

    /// Cached diagonal action of element g on the full kinematical space.
    const Eigen::MatrixXcd& action(int g) const { return actions_[static_cast<std::size_t>(g)]; }

    const RepSpec& rep_of(const std::string& factor_id) const;
    /// True when the factor's U(g) permutes its labeled basis (regular rep).
    bool group_labeled(const std::string& factor_id) const;
    /// Index into frames() for "Rk" ids; throws for "S" or unknown ids.
    int frame_index(const std::string& factor_id) const;

    /// Dimension of the invariant subspace, from the character average
    /// (1/|G|) sum_g prod_f tr U_f(g).
    int physical_dimension() const { return physical_dim_; }

private:
    GroupContextPtr ctx_;
    std::vector<FrameSpec> frames_;
    RepSpec system_;
    std::vector<FactorLabel> kin_factors_;
    Eigen::Index kin_dim_ = 0;
    std::vector<Eigen::MatrixXcd> actions_;
    int physical_dim_ = 0;
};

using SpacePtr = std::shared_ptr<const CompositeSpace>;

} // namespace qrf
