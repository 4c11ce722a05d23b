#include "qrf/representations.hpp"

#include <cmath>

#include "qrf/errors.hpp"

namespace qrf {

std::shared_ptr<const GroupContext> GroupContext::make(const GroupSpec& spec) {
    auto ctx = std::make_shared<GroupContext>();
    ctx->table = group_from_spec(spec);
    ctx->irreps = irreps_for(ctx->table);
    return ctx;
}

Eigen::MatrixXcd RepSpec::character() const {
    Eigen::MatrixXcd chi(1, static_cast<Eigen::Index>(matrices.size()));
    for (std::size_t g = 0; g < matrices.size(); ++g)
        chi(0, static_cast<Eigen::Index>(g)) = matrices[g].trace();
    return chi;
}

RepSpec regular_rep(const GroupContextPtr& ctx) {
    const auto& tbl = ctx->table;
    const int n = tbl.order;
    RepSpec r;
    r.ctx = ctx;
    r.dim = n;
    r.group_label_basis = true;
    r.basis_names = tbl.labels;
    r.mults.resize(ctx->irreps.size());
    for (std::size_t q = 0; q < ctx->irreps.size(); ++q)
        r.mults[q] = ctx->irreps.dim_of(static_cast<int>(q));

    r.matrices.assign(static_cast<std::size_t>(n), Eigen::MatrixXcd::Zero(n, n));
    for (int g = 0; g < n; ++g)
        for (int h = 0; h < n; ++h)
            r.matrices[static_cast<std::size_t>(g)](tbl.mul[g][h], h) = 1.0;

    // Peter-Weyl change of basis: column (q, copy c, row i) has group-basis
    // components sqrt(d_q/|G|) conj(D_q(h)_{i c}), which intertwines the left
    // translation L(g) with blockdiag_q I_{d_q} (x) D_q(g).
    r.sector_isomorphism.resize(n, n);
    Eigen::Index col = 0;
    for (std::size_t q = 0; q < ctx->irreps.size(); ++q) {
        const auto& ir = ctx->irreps.irreps[q];
        const double scale = std::sqrt(static_cast<double>(ir.dim) / n);
        for (int c = 0; c < ir.dim; ++c)
            for (int i = 0; i < ir.dim; ++i, ++col)
                for (int h = 0; h < n; ++h)
                    r.sector_isomorphism(h, col) =
                        scale * std::conj(ir.matrices[static_cast<std::size_t>(h)](i, c));
    }
    return r;
}

RepSpec rep_from_mults(const GroupContextPtr& ctx, const std::vector<int>& mults) {
    const auto& irr = ctx->irreps;
    if (mults.size() != irr.size())
        throw ConfigError("multiplicity vector length does not match the irrep count");
    RepSpec r;
    r.ctx = ctx;
    r.mults = mults;
    r.group_label_basis = false;

    long dim = 0;
    for (std::size_t q = 0; q < mults.size(); ++q) {
        if (mults[q] < 0) throw ConfigError("negative irrep multiplicity");
        dim += static_cast<long>(mults[q]) * irr.dim_of(static_cast<int>(q));
    }
    if (dim == 0) throw ConfigError("representation with all multiplicities zero");
    r.dim = static_cast<int>(dim);

    for (std::size_t q = 0; q < mults.size(); ++q)
        for (int m = 0; m < mults[q]; ++m)
            for (int i = 0; i < irr.dim_of(static_cast<int>(q)); ++i)
                r.basis_names.push_back(irr.irreps[q].label + ":" + std::to_string(m) +
                                        ":" + std::to_string(i));

    const int n = ctx->table.order;
    r.matrices.assign(static_cast<std::size_t>(n),
                      Eigen::MatrixXcd::Zero(r.dim, r.dim));
    for (int g = 0; g < n; ++g) {
        Eigen::Index off = 0;
        for (std::size_t q = 0; q < mults.size(); ++q) {
            const int d = irr.dim_of(static_cast<int>(q));
            for (int m = 0; m < mults[q]; ++m) {
                r.matrices[static_cast<std::size_t>(g)].block(off, off, d, d) =
                    irr.irreps[q].matrices[static_cast<std::size_t>(g)];
                off += d;
            }
        }
    }
    return r;
}

FrameSpec make_ideal_frame(const GroupContextPtr& ctx, std::string id) {
    FrameSpec f;
    f.id = std::move(id);
    f.rep = regular_rep(ctx);
    f.ideal = true;
    f.seed = Eigen::VectorXcd::Zero(f.rep.dim);
    f.seed(ctx->table.identity) = 1.0;
    return f;
}

Eigen::VectorXcd default_seed(const RepSpec& rep) {
    if (rep.group_label_basis) {
        Eigen::VectorXcd s = Eigen::VectorXcd::Zero(rep.dim);
        s(rep.ctx->table.identity) = 1.0;
        return s;
    }
    int sectors = 0;
    for (int m : rep.mults)
        if (m > 0) ++sectors;
    Eigen::VectorXcd s = Eigen::VectorXcd::Zero(rep.dim);
    const double w = 1.0 / std::sqrt(static_cast<double>(sectors));
    Eigen::Index off = 0;
    for (std::size_t q = 0; q < rep.mults.size(); ++q) {
        const int d = rep.ctx->irreps.dim_of(static_cast<int>(q));
        if (rep.mults[q] > 0) s(off) = w; // copy 0, row 0 of this sector
        off += static_cast<Eigen::Index>(rep.mults[q]) * d;
    }
    return s;
}

FrameSpec make_nonideal_frame(const GroupContextPtr& ctx, std::vector<int> mults,
                              std::optional<Eigen::VectorXcd> seed, std::string id) {
    FrameSpec f;
    f.id = std::move(id);
    f.rep = rep_from_mults(ctx, mults);
    f.ideal = false;
    if (seed) {
        if (seed->size() != f.rep.dim)
            throw ConfigError("frame seed length does not match the representation dimension");
        double n = seed->norm();
        if (n < 1e-12) throw ConfigError("frame seed is (numerically) zero");
        f.seed = *seed / n;
    } else {
        f.seed = default_seed(f.rep);
    }
    return f;
}

Eigen::VectorXcd coherent_orbit(const FrameSpec& frame, int g) {
    if (g < 0 || g >= static_cast<int>(frame.rep.matrices.size()))
        throw ConfigError("coherent_orbit: group element index out of range");
    if (frame.seed.size() != frame.rep.dim)
        throw ConfigError("frame has no seed vector");
    return frame.rep.matrices[static_cast<std::size_t>(g)] * frame.seed;
}

PovmCheckResult check_povm_resolution(const FrameSpec& frame) {
    const auto& rep = frame.rep;
    const int n = rep.ctx->table.order;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(rep.dim, rep.dim);
    for (int g = 0; g < n; ++g) {
        Eigen::VectorXcd phi = coherent_orbit(frame, g);
        a += phi * phi.adjoint();
    }
    a *= static_cast<double>(rep.dim) / n;

    PovmCheckResult res;
    res.residual =
        (a - Eigen::MatrixXcd::Identity(rep.dim, rep.dim)).cwiseAbs().maxCoeff();
    res.is_resolution = res.residual < 1e-9;
    for (std::size_t q = 0; q < rep.mults.size(); ++q)
        if (rep.mults[q] > rep.ctx->irreps.dim_of(static_cast<int>(q)))
            res.mults_within_irrep_dims = false;
    return res;
}

CompositeSpace::CompositeSpace(GroupContextPtr ctx, std::vector<FrameSpec> frames,
                               RepSpec system)
    : ctx_(std::move(ctx)), frames_(std::move(frames)), system_(std::move(system)) {
    if (frames_.empty()) throw ConfigError("a composite space needs at least one frame");
    for (std::size_t i = 0; i < frames_.size(); ++i) {
        frames_[i].id = "R" + std::to_string(i + 1);
        if (!frames_[i].rep.ctx || frames_[i].rep.ctx->table.order != ctx_->table.order)
            throw ConfigError("frame representation built over a different group");
    }
    if (!system_.ctx || system_.ctx->table.order != ctx_->table.order)
        throw ConfigError("system representation built over a different group");

    kin_dim_ = 1;
    for (const auto& f : frames_) {
        kin_factors_.push_back({f.id, f.rep.dim, f.rep.basis_names});
        kin_dim_ *= f.rep.dim;
    }
    kin_factors_.push_back({"S", system_.dim, system_.basis_names});
    kin_dim_ *= system_.dim;

    const int n = ctx_->table.order;
    actions_.reserve(static_cast<std::size_t>(n));
    for (int g = 0; g < n; ++g) {
        Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(1, 1);
        for (const auto& f : frames_)
            u = detail::kron(u, f.rep.matrices[static_cast<std::size_t>(g)]);
        u = detail::kron(u, system_.matrices[static_cast<std::size_t>(g)]);
        actions_.push_back(std::move(u));
    }

    std::complex<double> acc = 0.0;
    for (int g = 0; g < n; ++g) {
        std::complex<double> chi = 1.0;
        for (const auto& f : frames_)
            chi *= f.rep.matrices[static_cast<std::size_t>(g)].trace();
        chi *= system_.matrices[static_cast<std::size_t>(g)].trace();
        acc += chi;
    }
    acc /= static_cast<double>(n);
    double rounded = std::round(acc.real());
    if (std::abs(acc.real() - rounded) > 1e-6 || std::abs(acc.imag()) > 1e-6)
        throw NumericError("invariant subspace dimension is not an integer");
    physical_dim_ = static_cast<int>(rounded);
}

std::shared_ptr<const CompositeSpace> CompositeSpace::make(GroupContextPtr ctx,
                                                           std::vector<FrameSpec> frames,
                                                           RepSpec system) {
    return std::make_shared<const CompositeSpace>(std::move(ctx), std::move(frames),
                                                  std::move(system));
}

std::vector<std::string> CompositeSpace::factor_ids() const {
    std::vector<std::string> ids;
    for (const auto& f : kin_factors_) ids.push_back(f.id);
    return ids;
}

const RepSpec& CompositeSpace::rep_of(const std::string& factor_id) const {
    if (factor_id == "S") return system_;
    return frames_[static_cast<std::size_t>(frame_index(factor_id))].rep;
}

bool CompositeSpace::group_labeled(const std::string& factor_id) const {
    return rep_of(factor_id).group_label_basis;
}

int CompositeSpace::frame_index(const std::string& factor_id) const {
    for (std::size_t i = 0; i < frames_.size(); ++i)
        if (frames_[i].id == factor_id) return static_cast<int>(i);
    throw ConfigError("\"" + factor_id + "\" is not a frame of this space");
}

} // namespace qrf
