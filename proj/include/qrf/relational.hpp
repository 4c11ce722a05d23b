#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qrf/representations.hpp"
#include "qrf/tensor.hpp"

namespace qrf {

/// A state in the invariant (physical) subspace of a composite space.
/// Construct through project_physical so invariance is guaranteed.
struct PhysicalState {
    SpacePtr space;
    LabeledState psi; ///< over the kinematical factors R1..RN, S
};

/// The state of "everything else" as described relative to one frame:
/// factors are the kinematical ones minus the perspective frame, in
/// canonical order.
struct Perspective {
    SpacePtr space;
    std::string frame_id;
    LabeledState state;
};

/// Group-averages a kinematical state onto the invariant subspace. Returns
/// the normalized projection and its pre-normalization squared norm. Throws
/// AnnihilationError when that weight is below 1e-12.
std::pair<PhysicalState, double> project_physical(const LabeledState& kin,
                                                  const SpacePtr& space);

/// max_g || U(g) psi - psi ||_inf; small (< 1e-10) for genuine physical states.
double invariance_residual(const PhysicalState& phys);

/// Conditions an ideal frame on its identity label and renormalizes: the
/// relational state of the remaining factors as seen from that frame.
/// Throws ConfigError for non-ideal frames.
Perspective reduce(const PhysicalState& phys, const std::string& frame_id);

/// Conditions any frame on the coherent orbit vector U(g)|seed> and returns
/// the relational state plus the conditioning weight. For an ideal frame at
/// g = e this coincides with reduce(). Throws ZeroOverlapError when the
/// physical state has no support on the probe.
std::pair<Perspective, double> reduce_coherent(const PhysicalState& phys,
                                               const std::string& frame_id, int g);

/// reduce() for ideal frames, identity-element coherent conditioning for
/// non-ideal ones: the canonical "as seen from this frame" state.
Perspective perspective_of(const PhysicalState& phys, const std::string& frame_id);

/// The unitary that re-expresses a perspective relative to another ideal
/// frame: |g>_{Rj} |k>_rest -> |g^-1>_{Ri} U_rest(g^-1)|k>_rest, mapping the
/// perspective-of-Ri factor layout to the perspective-of-Rj layout (both
/// canonical). Requires both frames ideal.
Eigen::MatrixXcd frame_change_unitary(const CompositeSpace& space,
                                      const std::string& from_frame,
                                      const std::string& to_frame);

/// Applies frame_change_unitary to a perspective state. Equals
/// reduce(phys, to_frame) up to a global phase.
Perspective frame_change(const Perspective& persp, const std::string& to_frame);

/// Maps a physical state to |e>_{Ri} (x) (relational state), arranged over
/// the full kinematical factor list. Tracing out Ri recovers the perspective
/// density exactly.
LabeledState trivialize(const PhysicalState& phys, const std::string& frame_id);

/// Basis relabeling that carries diagonal data of a kept subsystem X (seen
/// from frame Ri) to the matching subsystem Y (seen from frame Rj):
/// |g>_{Rj} |k> -> |g^-1>_{Ri} |g^-1 k>, all labels group elements.
struct BasisPermutation {
    std::vector<FactorLabel> domain; ///< X factors, canonical order
    std::vector<FactorLabel> image;  ///< Y factors, canonical order
    std::vector<int> target_of;      ///< image index per domain index

    /// The permutation as a 0/1 matrix P with P[target_of[x], x] = 1.
    Eigen::MatrixXcd matrix() const;
    /// P rho P^dag computed by index relabeling (exact).
    LabeledDensity conjugate(const LabeledDensity& rho_x) const;
    /// Pushes a diagonal observable along the permutation.
    Eigen::VectorXd push_diagonal(const Eigen::VectorXd& diag_x) const;
};

/// Builds the permutation for kept set X (must contain to_frame, must not
/// contain from_frame, and every member must carry a group-label basis).
/// The image set Y replaces to_frame by from_frame.
BasisPermutation build_permutation(const CompositeSpace& space,
                                   const std::string& from_frame,
                                   const std::string& to_frame,
                                   const std::vector<std::string>& kept_ids);

} // namespace qrf
