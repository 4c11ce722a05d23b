#include "qrf/relational.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qrf/errors.hpp"

namespace qrf {

namespace {

std::vector<FactorLabel> perspective_factors(const CompositeSpace& space,
                                             const std::string& frame_id) {
    std::vector<FactorLabel> out;
    for (const auto& f : space.kin_factors())
        if (f.id != frame_id) out.push_back(f);
    return out;
}

std::vector<Eigen::Index> decompose(Eigen::Index flat,
                                    const std::vector<FactorLabel>& factors,
                                    const std::vector<Eigen::Index>& strides) {
    std::vector<Eigen::Index> idx(factors.size());
    for (std::size_t f = 0; f < factors.size(); ++f) {
        idx[f] = flat / strides[f];
        flat %= strides[f];
    }
    return idx;
}

const FrameSpec& frame_checked(const CompositeSpace& space, const std::string& id) {
    return space.frame(space.frame_index(id));
}

} // namespace

std::pair<PhysicalState, double> project_physical(const LabeledState& kin,
                                                  const SpacePtr& space) {
    if (kin.dim() != space->kin_dim())
        throw ConfigError("kinematical state dimension does not match the space");
    if (!kin.is_normalized())
        throw NumericError("project_physical expects a normalized input state");

    const int n = space->ctx()->table.order;
    Eigen::VectorXcd avg = Eigen::VectorXcd::Zero(kin.dim());
    for (int g = 0; g < n; ++g) avg += space->action(g) * kin.amplitudes();
    avg /= static_cast<double>(n);

    double weight = avg.squaredNorm();
    if (weight < 1e-12)
        throw AnnihilationError("state has no component in the invariant subspace");
    avg /= std::sqrt(weight);
    return {PhysicalState{space, LabeledState(space->kin_factors(), std::move(avg))},
            weight};
}

double invariance_residual(const PhysicalState& phys) {
    const int n = phys.space->ctx()->table.order;
    double res = 0.0;
    for (int g = 0; g < n; ++g)
        res = std::max(res, (phys.space->action(g) * phys.psi.amplitudes() -
                             phys.psi.amplitudes())
                                .cwiseAbs()
                                .maxCoeff());
    return res;
}

Perspective reduce(const PhysicalState& phys, const std::string& frame_id) {
    const auto& frame = frame_checked(*phys.space, frame_id);
    if (!frame.ideal)
        throw ConfigError("reduce applies to ideal frames; use reduce_coherent for \"" +
                          frame_id + "\"");
    Eigen::VectorXcd probe = Eigen::VectorXcd::Zero(frame.rep.dim);
    probe(phys.space->ctx()->table.identity) = 1.0;
    auto [state, weight] = condition(phys.psi, frame_id, probe);
    (void)weight; // equals 1/|G| for ideal frames
    return Perspective{phys.space, frame_id, std::move(state)};
}

std::pair<Perspective, double> reduce_coherent(const PhysicalState& phys,
                                               const std::string& frame_id, int g) {
    const auto& frame = frame_checked(*phys.space, frame_id);
    Eigen::VectorXcd probe = coherent_orbit(frame, g);
    auto [state, weight] = condition(phys.psi, frame_id, probe);
    return {Perspective{phys.space, frame_id, std::move(state)}, weight};
}

Perspective perspective_of(const PhysicalState& phys, const std::string& frame_id) {
    const auto& frame = frame_checked(*phys.space, frame_id);
    if (frame.ideal) return reduce(phys, frame_id);
    return reduce_coherent(phys, frame_id, phys.space->ctx()->table.identity).first;
}

Eigen::MatrixXcd frame_change_unitary(const CompositeSpace& space,
                                      const std::string& from_frame,
                                      const std::string& to_frame) {
    if (from_frame == to_frame)
        throw ConfigError("frame change needs two distinct frames");
    const auto& fi = frame_checked(space, from_frame);
    const auto& fj = frame_checked(space, to_frame);
    if (!fi.ideal || !fj.ideal)
        throw ConfigError("frame change is defined between ideal frames");

    const auto in_factors = perspective_factors(space, from_frame);
    const auto out_factors = perspective_factors(space, to_frame);
    const auto in_strides = detail::strides(in_factors);
    const auto& tbl = space.ctx()->table;

    Eigen::Index dim = 1;
    for (const auto& f : in_factors) dim *= f.dim;

    int j_pos = -1;
    for (std::size_t f = 0; f < in_factors.size(); ++f)
        if (in_factors[f].id == to_frame) j_pos = static_cast<int>(f);
    if (j_pos < 0) throw ConfigError("target frame is not in the source perspective");

    Eigen::MatrixXcd u(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        auto idx = decompose(col, in_factors, in_strides);
        const int g = static_cast<int>(idx[static_cast<std::size_t>(j_pos)]);
        const int ginv = tbl.inv[g];

        // Column of U: kron over the output layout of per-factor vectors.
        Eigen::VectorXcd acc = Eigen::VectorXcd::Constant(1, 1.0);
        for (const auto& of : out_factors) {
            if (of.id == from_frame) {
                Eigen::VectorXcd hot = Eigen::VectorXcd::Zero(of.dim);
                hot(ginv) = 1.0;
                acc = detail::kron(acc, hot);
            } else {
                int in_pos = -1;
                for (std::size_t f = 0; f < in_factors.size(); ++f)
                    if (in_factors[f].id == of.id) in_pos = static_cast<int>(f);
                const auto& rep = space.rep_of(of.id);
                acc = detail::kron(
                    acc, rep.matrices[static_cast<std::size_t>(ginv)].col(
                             idx[static_cast<std::size_t>(in_pos)]));
            }
        }
        u.col(col) = acc;
    }
    return u;
}

Perspective frame_change(const Perspective& persp, const std::string& to_frame) {
    Eigen::MatrixXcd u = frame_change_unitary(*persp.space, persp.frame_id, to_frame);
    Eigen::VectorXcd out = u * persp.state.amplitudes();
    return Perspective{persp.space, to_frame,
                       LabeledState(perspective_factors(*persp.space, to_frame),
                                    std::move(out))};
}

LabeledState trivialize(const PhysicalState& phys, const std::string& frame_id) {
    const auto& frame = frame_checked(*phys.space, frame_id);
    if (!frame.ideal)
        throw ConfigError("trivialize applies to ideal frames");
    Perspective persp = reduce(phys, frame_id);
    const int pos = phys.psi.factor_position(frame_id);
    const auto& factor = phys.space->kin_factors()[static_cast<std::size_t>(pos)];
    return embed(persp.state, factor, pos, phys.space->ctx()->table.identity);
}

Eigen::MatrixXcd BasisPermutation::matrix() const {
    const Eigen::Index dim = static_cast<Eigen::Index>(target_of.size());
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index x = 0; x < dim; ++x)
        p(target_of[static_cast<std::size_t>(x)], x) = 1.0;
    return p;
}

LabeledDensity BasisPermutation::conjugate(const LabeledDensity& rho_x) const {
    const Eigen::Index dim = rho_x.dim();
    if (dim != static_cast<Eigen::Index>(target_of.size()))
        throw ConfigError("permutation and density dimensions differ");
    Eigen::MatrixXcd out(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c)
            out(target_of[static_cast<std::size_t>(r)],
                target_of[static_cast<std::size_t>(c)]) = rho_x.matrix()(r, c);
    return LabeledDensity(image, std::move(out));
}

Eigen::VectorXd BasisPermutation::push_diagonal(const Eigen::VectorXd& diag_x) const {
    Eigen::VectorXd out(diag_x.size());
    for (Eigen::Index x = 0; x < diag_x.size(); ++x)
        out(target_of[static_cast<std::size_t>(x)]) = diag_x(x);
    return out;
}

BasisPermutation build_permutation(const CompositeSpace& space,
                                   const std::string& from_frame,
                                   const std::string& to_frame,
                                   const std::vector<std::string>& kept_ids) {
    if (from_frame == to_frame)
        throw ConfigError("permutation needs two distinct frames");
    (void)frame_checked(space, from_frame);
    (void)frame_checked(space, to_frame);

    std::set<std::string> kept(kept_ids.begin(), kept_ids.end());
    if (!kept.count(to_frame))
        throw ConfigError("kept set must contain the frame being swapped out (" +
                          to_frame + ")");
    if (kept.count(from_frame))
        throw ConfigError("kept set must not contain the perspective frame (" +
                          from_frame + ")");
    for (const auto& id : kept)
        if (!space.group_labeled(id))
            throw ConfigError("factor \"" + id +
                              "\" has no group-label basis; the relabeling map "
                              "is undefined on it");

    BasisPermutation perm;
    // Domain: kept ids in the canonical order of the perspective-of-from
    // layout. Image: to_frame replaced by from_frame, canonical for
    // perspective-of-to.
    std::set<std::string> image_ids(kept.begin(), kept.end());
    image_ids.erase(to_frame);
    image_ids.insert(from_frame);
    for (const auto& f : space.kin_factors()) {
        if (kept.count(f.id)) perm.domain.push_back(f);
        if (image_ids.count(f.id)) perm.image.push_back(f);
    }

    const auto dom_strides = detail::strides(perm.domain);
    const auto img_strides = detail::strides(perm.image);
    const auto& tbl = space.ctx()->table;

    Eigen::Index dim = 1;
    for (const auto& f : perm.domain) dim *= f.dim;

    perm.target_of.resize(static_cast<std::size_t>(dim));
    std::vector<bool> hit(static_cast<std::size_t>(dim), false);
    for (Eigen::Index x = 0; x < dim; ++x) {
        auto idx = decompose(x, perm.domain, dom_strides);
        int g = -1;
        for (std::size_t f = 0; f < perm.domain.size(); ++f)
            if (perm.domain[f].id == to_frame) g = static_cast<int>(idx[f]);
        const int ginv = tbl.inv[g];

        Eigen::Index y = 0;
        for (std::size_t of = 0; of < perm.image.size(); ++of) {
            const auto& id = perm.image[of].id;
            Eigen::Index label;
            if (id == from_frame) {
                label = ginv;
            } else {
                int dom_pos = -1;
                for (std::size_t f = 0; f < perm.domain.size(); ++f)
                    if (perm.domain[f].id == id) dom_pos = static_cast<int>(f);
                label = tbl.mul[ginv][idx[static_cast<std::size_t>(dom_pos)]];
            }
            y += label * img_strides[of];
        }
        perm.target_of[static_cast<std::size_t>(x)] = static_cast<int>(y);
        if (hit[static_cast<std::size_t>(y)])
            throw NumericError("label relabeling is not a bijection");
        hit[static_cast<std::size_t>(y)] = true;
    }
    return perm;
}

} // namespace qrf
