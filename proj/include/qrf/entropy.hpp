#pragma once

#include <string>
#include <vector>

#include "qrf/group.hpp"
#include "qrf/relational.hpp"
#include "qrf/tensor.hpp"

namespace qrf {

enum class LogBase { natural, two };

/// Knobs shared by every entropy functional. The eigenvalue floor drops
/// noise-level spectrum entries before they enter logs or alpha-powers;
/// without it the alpha < 1 entropies of rank-deficient states blow up on
/// 1e-16 eigenvalue dust.
struct EntropyParams {
    double alpha = 1.0; ///< 1.0 selects the von Neumann limit
    LogBase base = LogBase::natural;
    double eig_floor = 1e-12;
};

/// S_alpha from an eigenvalue list (descending or not). Entries below
/// eig_floor are dropped. Throws ConfigError for alpha <= 0.
double renyi_from_spectrum(const std::vector<double>& eigs,
                           const EntropyParams& params);

/// S_alpha(rho) = log(Tr rho^alpha) / (1 - alpha); the alpha = 1 case is
/// -Tr rho log rho with 0 log 0 = 0.
double renyi(const LabeledDensity& rho, const EntropyParams& params);

/// Relative entropy of coherence in the labeled product basis:
/// C_alpha = S_alpha(dephase(rho)) - S_alpha(rho). Non-negative at
/// alpha = 1; sign unconstrained otherwise and reported as-is.
double coherence(const LabeledDensity& rho, const EntropyParams& params);

/// Multipartite total correlation I = sum_f S(rho_f) - S(rho) over the
/// density's factors. Defined at alpha = 1 only (ConfigError otherwise).
double total_correlation(const LabeledDensity& rho, const EntropyParams& params);

/// Correlation between the non-perspective frames that dephasing destroys:
/// Gamma = I(rho) - I(dephase(rho)) on the frames-only reduction of the
/// perspective state. frames_only must name exactly the frames other than
/// persp.frame_id (ConfigError otherwise); alpha must be 1.
double gamma_correlation(const Perspective& persp,
                         const std::vector<std::string>& frames_only,
                         const EntropyParams& params);

/// |S_alpha(rho_S seen from frame_i) - S_alpha(rho_S seen from frame_j)|,
/// each side from its own independent reduction. Equal frames give 0.
double entropy_difference(const PhysicalState& phys, const std::string& frame_i,
                          const std::string& frame_j, const EntropyParams& params);

struct MaxEntropyDiff {
    double value = 0.0; ///< max_i S(rho_S^(i)) - min_j S(rho_S^(j))
    std::string argmax_frame;
    std::string argmin_frame;
    /// Spread of the frames-only coherences, which equals value; the
    /// computation asserts agreement to 1e-9.
    double coherence_spread = 0.0;
};

/// Largest disagreement between ideal frames about the system's entropy.
/// Requires >= 2 frames, all ideal. Ties resolve to the lowest frame index.
MaxEntropyDiff max_entropy_difference(const PhysicalState& phys,
                                      const EntropyParams& params);

/// Effective relational dimension of the target frame seen from the
/// conditioning frame:
///   d_eff = sum_a d_a * min(m_a^target, n_abar),
///   n_q = sum_{b,c} m_b^cond * m_c^S * N_{bc}^q,
/// with abar the conjugate irrep of a. Multiplicity vectors are indexed by
/// irrep position and must match the table's size.
int effective_dimension(const IrrepTable& irreps, const std::vector<int>& mults_target,
                        const std::vector<int>& mults_cond_frame,
                        const std::vector<int>& mults_system);

/// State-independent part of the two-frame entropy-difference bound.
struct EffectiveBound {
    int d_eff_1_given_2 = 0; ///< d_eff(R1|R2)
    int d_eff_2_given_1 = 0; ///< d_eff(R2|R1)
    double bound = 0.0;      ///< log max of the two effective dimensions
    double dim_bound = 0.0;  ///< log max(dim R1, dim R2): the cruder cap
};

/// Requires exactly two frames. Pure representation arithmetic; no state.
EffectiveBound effective_bound(const CompositeSpace& space, LogBase base);

struct BoundObservation {
    EffectiveBound bound;
    double observed = 0.0; ///< Delta S_alpha between the two perspectives
    bool holds = false;    ///< observed <= bound + 1e-9
};

/// Evaluates the entropy-difference bound on one physical state of a
/// two-frame space. Non-ideal frames are reduced by identity-coherent
/// conditioning.
BoundObservation entropy_difference_bound(const PhysicalState& phys,
                                          const EntropyParams& params);

} // namespace qrf
