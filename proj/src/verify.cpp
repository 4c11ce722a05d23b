#include "qrf/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>

#include "qrf/errors.hpp"

namespace qrf {

namespace {

const std::vector<std::pair<Check, std::string>>& check_table() {
    static const std::vector<std::pair<Check, std::string>> t = {
        {Check::Lemma1, "lemma1"},
        {Check::Theorem1, "theorem1"},
        {Check::Corollary1, "corollary1"},
        {Check::Moments, "moments"},
        {Check::Theorem2, "theorem2"},
        {Check::DSMax, "dsmax"},
        {Check::Theorem3, "theorem3"},
        {Check::Povm, "povm"},
        {Check::FrameChange, "frame_change_consistency"},
        {Check::Trivialization, "trivialization"},
    };
    return t;
}

int count_ideal(const ExperimentSpec& spec) {
    int n = 0;
    for (const auto& f : spec.frames) n += f.ideal ? 1 : 0;
    return n;
}

std::string applicability_requirement(Check c) {
    switch (c) {
        case Check::Lemma1:
        case Check::Theorem1:
        case Check::Corollary1:
        case Check::Moments:
        case Check::FrameChange:
            return "needs at least two ideal frames";
        case Check::Theorem2:
        case Check::DSMax:
            return "needs at least two frames, all ideal";
        case Check::Theorem3:
            return "needs exactly two frames";
        case Check::Trivialization:
            return "needs at least one ideal frame";
        case Check::Povm:
            return "always applicable";
    }
    return {};
}

std::vector<std::string> ideal_frame_ids(const CompositeSpace& space) {
    std::vector<std::string> out;
    for (const auto& fr : space.frames())
        if (fr.ideal) out.push_back(fr.id);
    return out;
}

/// Factor ids whose basis vectors carry group labels, minus the exclusions.
std::vector<std::string> labeled_pool(const CompositeSpace& space,
                                      const std::set<std::string>& exclude) {
    std::vector<std::string> out;
    for (const auto& f : space.kin_factors())
        if (!exclude.count(f.id) && space.group_labeled(f.id)) out.push_back(f.id);
    return out;
}

/// All subsets when that fits under the cap, otherwise cap-many random masks.
std::vector<std::vector<std::string>> subsets_of(const std::vector<std::string>& pool,
                                                 int cap, Rng& rng) {
    const std::size_t n = pool.size();
    std::vector<std::vector<std::string>> out;
    auto members = [&](std::uint64_t mask) {
        std::vector<std::string> s;
        for (std::size_t b = 0; b < n; ++b)
            if (mask >> b & 1) s.push_back(pool[b]);
        return s;
    };
    if (n < 30 && (1ull << n) <= static_cast<std::uint64_t>(cap)) {
        for (std::uint64_t mask = 0; mask < (1ull << n); ++mask)
            out.push_back(members(mask));
    } else {
        const std::uint64_t keep = n >= 64 ? ~0ull : (1ull << n) - 1;
        for (int k = 0; k < cap; ++k) out.push_back(members(rng.next_u64() & keep));
    }
    return out;
}

LabeledDensity reduced(const Perspective& p, const std::vector<std::string>& ids) {
    return partial_trace(density_of(p.state), ids);
}

std::vector<std::string> other_frame_ids(const CompositeSpace& space,
                                         const std::string& frame_id) {
    std::vector<std::string> out;
    for (const auto& fr : space.frames())
        if (fr.id != frame_id) out.push_back(fr.id);
    return out;
}

/// Per-trial scratch: the sampled state plus lazily computed perspectives.
struct TrialCtx {
    const CompositeSpace& space;
    const PhysicalState& phys;
    std::map<std::string, Perspective> cache;

    const Perspective& persp(const std::string& id) {
        auto it = cache.find(id);
        if (it == cache.end()) it = cache.emplace(id, perspective_of(phys, id)).first;
        return it->second;
    }
};

double tolerance_for(Check c, const ExperimentSpec& spec) {
    switch (c) {
        case Check::Lemma1: return 1e-12;      // exact permutation, entrywise
        case Check::Moments: return 1e-10;     // trace arithmetic only
        case Check::Theorem3: return 1e-9;     // fixed slack on the bound
        case Check::Povm: return 1e-9;
        case Check::FrameChange: return 1e-10; // fidelity deficit
        default: return spec.tolerance;
    }
}

std::vector<std::string> columns_for(Check c) {
    switch (c) {
        case Check::Lemma1:
        case Check::Theorem1:
        case Check::Moments:
            return {"trial", "pair_subsets", "max_residual"};
        case Check::Corollary1: return {"trial", "omegas", "max_residual"};
        case Check::Theorem2:
            return {"trial",           "frame_i",         "frame_j", "delta_s",
                    "coherence_form",  "decomposed_form", "residual"};
        case Check::DSMax:
            return {"trial",        "entropy_spread", "coherence_spread",
                    "argmax_frame", "argmin_frame",   "residual"};
        case Check::Theorem3:
            return {"trial", "max_observed",      "bound",
                    "violation", "rank_r2_given_r1", "rank_r1_given_r2"};
        case Check::Povm: return {"frame", "residual", "is_resolution"};
        case Check::FrameChange: return {"trial", "max_fidelity_deficit"};
        case Check::Trivialization:
            return {"trial", "recovery_residual", "invariant_residual",
                    "schmidt_rank"};
    }
    return {};
}

// ---- per-check evaluators -------------------------------------------------

void eval_theorem1(TrialCtx& ctx, const ExperimentSpec& spec, Rng& rng,
                   CheckResult& res, int trial) {
    const auto ideals = ideal_frame_ids(ctx.space);
    double worst = 0.0;
    int combos = 0;
    for (std::size_t a = 0; a + 1 < ideals.size(); ++a) {
        for (std::size_t b = a + 1; b < ideals.size(); ++b) {
            const auto& ri = ideals[a];
            const auto& rj = ideals[b];
            const auto pool = labeled_pool(ctx.space, {ri, rj});
            for (const auto& s : subsets_of(pool, spec.subset_cap, rng)) {
                std::vector<std::string> x = {rj};
                x.insert(x.end(), s.begin(), s.end());
                std::vector<std::string> y = {ri};
                y.insert(y.end(), s.begin(), s.end());
                const auto spec_x = spectrum(dephase(reduced(ctx.persp(ri), x)));
                const auto spec_y = spectrum(dephase(reduced(ctx.persp(rj), y)));
                for (double alpha : spec.alphas) {
                    EntropyParams p;
                    p.alpha = alpha;
                    p.base = spec.log_base;
                    worst = std::max(worst,
                                     std::abs(renyi_from_spectrum(spec_x, p) -
                                              renyi_from_spectrum(spec_y, p)));
                }
                ++combos;
            }
        }
    }
    res.rows.push_back({static_cast<double>(trial), static_cast<double>(combos), worst});
    res.max_residual = std::max(res.max_residual, worst);
}

void eval_lemma1(TrialCtx& ctx, const ExperimentSpec& spec, Rng& rng,
                 CheckResult& res, int trial) {
    const auto ideals = ideal_frame_ids(ctx.space);
    double worst = 0.0;
    int combos = 0;
    for (std::size_t a = 0; a + 1 < ideals.size(); ++a) {
        for (std::size_t b = a + 1; b < ideals.size(); ++b) {
            const auto& ri = ideals[a];
            const auto& rj = ideals[b];
            const auto pool = labeled_pool(ctx.space, {ri, rj});
            for (const auto& s : subsets_of(pool, spec.subset_cap, rng)) {
                std::vector<std::string> x = {rj};
                x.insert(x.end(), s.begin(), s.end());
                std::vector<std::string> y = {ri};
                y.insert(y.end(), s.begin(), s.end());
                const auto perm = build_permutation(ctx.space, ri, rj, x);
                const LabeledDensity moved =
                    perm.conjugate(dephase(reduced(ctx.persp(ri), x)));
                const LabeledDensity direct = dephase(reduced(ctx.persp(rj), y));
                worst = std::max(worst, (moved.matrix() - direct.matrix())
                                            .cwiseAbs()
                                            .maxCoeff());
                ++combos;
            }
        }
    }
    res.rows.push_back({static_cast<double>(trial), static_cast<double>(combos), worst});
    res.max_residual = std::max(res.max_residual, worst);
}

void eval_moments(TrialCtx& ctx, const ExperimentSpec& spec, Rng& rng,
                  CheckResult& res, int trial) {
    const auto ideals = ideal_frame_ids(ctx.space);
    double worst = 0.0;
    int combos = 0;
    for (std::size_t a = 0; a + 1 < ideals.size(); ++a) {
        for (std::size_t b = a + 1; b < ideals.size(); ++b) {
            const auto& ri = ideals[a];
            const auto& rj = ideals[b];
            const auto pool = labeled_pool(ctx.space, {ri, rj});
            for (const auto& s : subsets_of(pool, spec.subset_cap, rng)) {
                std::vector<std::string> x = {rj};
                x.insert(x.end(), s.begin(), s.end());
                std::vector<std::string> y = {ri};
                y.insert(y.end(), s.begin(), s.end());
                const auto perm = build_permutation(ctx.space, ri, rj, x);
                const LabeledDensity rho_x = reduced(ctx.persp(ri), x);
                const LabeledDensity rho_y = reduced(ctx.persp(rj), y);
                Eigen::VectorXd diag_x(rho_x.dim());
                for (Eigen::Index k = 0; k < diag_x.size(); ++k)
                    diag_x(k) = 2.0 * rng.uniform() - 1.0;
                const Eigen::VectorXd diag_y = perm.push_diagonal(diag_x);
                for (int n = 1; n <= 4; ++n) {
                    double mx = 0.0, my = 0.0;
                    for (Eigen::Index k = 0; k < diag_x.size(); ++k) {
                        mx += rho_x.matrix()(k, k).real() * std::pow(diag_x(k), n);
                        my += rho_y.matrix()(k, k).real() * std::pow(diag_y(k), n);
                    }
                    worst = std::max(worst, std::abs(mx - my));
                }
                ++combos;
            }
        }
    }
    res.rows.push_back({static_cast<double>(trial), static_cast<double>(combos), worst});
    res.max_residual = std::max(res.max_residual, worst);
}

void eval_corollary1(TrialCtx& ctx, const ExperimentSpec& spec, Rng& rng,
                     CheckResult& res, int trial) {
    const auto pool = labeled_pool(ctx.space, {});
    const auto all_ids = ctx.space.factor_ids();
    double worst = 0.0;
    int omegas = 0;
    for (const auto& omega : subsets_of(pool, spec.subset_cap, rng)) {
        std::vector<std::string> frames_in;
        for (const auto& id : omega)
            if (id != "S") frames_in.push_back(id);
        if (frames_in.size() < 2) continue; // constancy needs two perspectives

        const std::set<std::string> omega_set(omega.begin(), omega.end());
        std::vector<std::string> complement;
        for (const auto& id : all_ids)
            if (!omega_set.count(id)) complement.push_back(id);

        for (double alpha : spec.alphas) {
            EntropyParams p;
            p.alpha = alpha;
            p.base = spec.log_base;
            double first = 0.0;
            for (std::size_t i = 0; i < frames_in.size(); ++i) {
                const auto& persp = ctx.persp(frames_in[i]);
                std::vector<std::string> omega_rest;
                for (const auto& id : omega)
                    if (id != frames_in[i]) omega_rest.push_back(id);
                const double value = renyi(reduced(persp, complement), p) +
                                     coherence(reduced(persp, omega_rest), p);
                if (i == 0)
                    first = value;
                else
                    worst = std::max(worst, std::abs(value - first));
            }
        }
        ++omegas;
    }
    res.rows.push_back({static_cast<double>(trial), static_cast<double>(omegas), worst});
    res.max_residual = std::max(res.max_residual, worst);
}

void eval_theorem2(TrialCtx& ctx, const ExperimentSpec& spec, CheckResult& res,
                   int trial) {
    EntropyParams p1;
    p1.base = spec.log_base;
    const auto& space = ctx.space;
    const int nf = space.num_frames();

    // Per-frame quantities, each from that frame's own reduction.
    std::vector<double> s_sys(static_cast<std::size_t>(nf));
    std::vector<double> coh(static_cast<std::size_t>(nf));
    std::vector<double> coh_sum(static_cast<std::size_t>(nf));
    std::vector<double> gam(static_cast<std::size_t>(nf));
    double worst_identity = 0.0;
    for (int i = 0; i < nf; ++i) {
        const auto& id = space.frame(i).id;
        const auto& persp = ctx.persp(id);
        const auto others = other_frame_ids(space, id);
        const LabeledDensity sigma = reduced(persp, others);
        const std::size_t ui = static_cast<std::size_t>(i);
        s_sys[ui] = renyi(reduced(persp, {"S"}), p1);
        coh[ui] = coherence(sigma, p1);
        double sum = 0.0;
        for (const auto& other : others) sum += coherence(reduced(persp, {other}), p1);
        coh_sum[ui] = sum;
        gam[ui] = gamma_correlation(persp, others, p1);
        // Coherence of the multi-frame state splits into per-frame coherences
        // plus the dephasing-destroyed correlation.
        worst_identity =
            std::max(worst_identity, std::abs(coh[ui] - (coh_sum[ui] + gam[ui])));
    }

    double worst = worst_identity;
    for (int i = 0; i < nf; ++i) {
        for (int j = i + 1; j < nf; ++j) {
            const std::size_t ui = static_cast<std::size_t>(i);
            const std::size_t uj = static_cast<std::size_t>(j);
            const double ds = std::abs(s_sys[ui] - s_sys[uj]);
            const double eq_coh = std::abs(coh[uj] - coh[ui]);
            const double eq_dec =
                std::abs(coh_sum[uj] - coh_sum[ui] + gam[uj] - gam[ui]);
            const double residual =
                std::max(std::abs(ds - eq_coh), std::abs(ds - eq_dec));
            worst = std::max(worst, residual);
            res.rows.push_back({static_cast<double>(trial), static_cast<double>(i + 1),
                                static_cast<double>(j + 1), ds, eq_coh, eq_dec,
                                residual});
        }
    }
    res.max_residual = std::max(res.max_residual, worst);
}

void eval_dsmax(TrialCtx& ctx, const ExperimentSpec& spec, CheckResult& res,
                int trial) {
    EntropyParams p1;
    p1.base = spec.log_base;
    const auto& space = ctx.space;
    const MaxEntropyDiff me = max_entropy_difference(ctx.phys, p1);

    // Independent route: the spread as a maximum over pairwise differences.
    double pairwise = 0.0;
    for (int i = 0; i < space.num_frames(); ++i)
        for (int j = i + 1; j < space.num_frames(); ++j)
            pairwise = std::max(pairwise,
                                entropy_difference(ctx.phys, space.frame(i).id,
                                                   space.frame(j).id, p1));

    const double residual = std::max(std::abs(me.value - pairwise),
                                     std::abs(me.value - me.coherence_spread));
    res.rows.push_back(
        {static_cast<double>(trial), me.value, me.coherence_spread,
         static_cast<double>(space.frame_index(me.argmax_frame) + 1),
         static_cast<double>(space.frame_index(me.argmin_frame) + 1), residual});
    res.max_residual = std::max(res.max_residual, residual);
}

void eval_theorem3(TrialCtx& ctx, const ExperimentSpec& spec,
                   const EffectiveBound& eb, CheckResult& res, int trial) {
    const auto& space = ctx.space;
    const std::string r1 = space.frame(0).id;
    const std::string r2 = space.frame(1).id;

    double max_obs = 0.0, max_viol = 0.0;
    for (double alpha : spec.alphas) {
        EntropyParams p;
        p.alpha = alpha;
        p.base = spec.log_base;
        const double obs = entropy_difference(ctx.phys, r1, r2, p);
        max_obs = std::max(max_obs, obs);
        max_viol = std::max(max_viol, obs - eb.bound);
    }
    max_viol = std::max(max_viol, 0.0);

    const int rank_r2 = numeric_rank(reduced(ctx.persp(r1), {r2}));
    const int rank_r1 = numeric_rank(reduced(ctx.persp(r2), {r1}));
    if (rank_r2 > eb.d_eff_2_given_1 || rank_r1 > eb.d_eff_1_given_2)
        res.details["rank_violations"] += 1.0;

    res.rows.push_back({static_cast<double>(trial), max_obs, eb.bound, max_viol,
                        static_cast<double>(rank_r2), static_cast<double>(rank_r1)});
    res.max_residual = std::max(res.max_residual, max_viol);
}

void eval_povm(const CompositeSpace& space, CheckResult& res) {
    int resolving = 0;
    for (int i = 0; i < space.num_frames(); ++i) {
        const PovmCheckResult r = check_povm_resolution(space.frame(i));
        resolving += r.is_resolution ? 1 : 0;
        res.rows.push_back({static_cast<double>(i + 1), r.residual,
                            r.is_resolution ? 1.0 : 0.0});
        res.max_residual = std::max(res.max_residual, r.residual);
    }
    res.details["frames_resolving"] = static_cast<double>(resolving);
}

void eval_frame_change(
    TrialCtx& ctx,
    const std::map<std::pair<std::string, std::string>, Eigen::MatrixXcd>& unitaries,
    CheckResult& res, int trial) {
    double worst = 0.0;
    for (const auto& [pair, u] : unitaries) {
        const auto& [from, to] = pair;
        const auto& src = ctx.persp(from);
        const auto& direct = ctx.persp(to);
        const Eigen::VectorXcd via = u * src.state.amplitudes();
        const double overlap =
            std::norm(direct.state.amplitudes().dot(via)); // dot conjugates
        worst = std::max(worst, 1.0 - overlap);
    }
    res.rows.push_back({static_cast<double>(trial), worst});
    res.max_residual = std::max(res.max_residual, worst);
}

void eval_trivialization(TrialCtx& ctx, const ExperimentSpec& spec, Rng& rng,
                         CheckResult& res, int trial) {
    const auto& space = ctx.space;
    double worst_rec = 0.0, worst_inv = 0.0;
    int max_rank = 1;
    for (const auto& fr : space.frames()) {
        if (!fr.ideal) continue;
        const LabeledState t = trivialize(ctx.phys, fr.id);
        const LabeledDensity rho_t = density_of(t);
        const auto& persp = ctx.persp(fr.id);
        const LabeledDensity rho_rel = density_of(persp.state);

        std::vector<std::string> rest;
        for (const auto& f : space.kin_factors())
            if (f.id != fr.id) rest.push_back(f.id);
        worst_rec = std::max(worst_rec, (partial_trace(rho_t, rest).matrix() -
                                         rho_rel.matrix())
                                            .cwiseAbs()
                                            .maxCoeff());
        max_rank = std::max(max_rank, schmidt_rank(t, fr.id));

        // Diagonal invariants evaluated from the trivialized full state vs
        // from the perspective reduction.
        for (const auto& s : subsets_of(rest, spec.subset_cap, rng)) {
            if (s.empty()) continue;
            const auto spec_phys = spectrum(dephase(partial_trace(rho_t, s)));
            const auto spec_rel = spectrum(dephase(partial_trace(rho_rel, s)));
            for (double alpha : spec.alphas) {
                EntropyParams p;
                p.alpha = alpha;
                p.base = spec.log_base;
                worst_inv = std::max(worst_inv,
                                     std::abs(renyi_from_spectrum(spec_phys, p) -
                                              renyi_from_spectrum(spec_rel, p)));
            }
        }
    }
    res.rows.push_back({static_cast<double>(trial), worst_rec, worst_inv,
                        static_cast<double>(max_rank)});
    res.max_residual = std::max(res.max_residual, worst_inv);
    res.details["max_recovery_residual"] =
        std::max(res.details["max_recovery_residual"], worst_rec);
    res.details["max_schmidt_rank"] =
        std::max(res.details["max_schmidt_rank"], static_cast<double>(max_rank));
}

bool check_passes(Check c, const CheckResult& r) {
    const bool base = r.max_residual <= r.tolerance;
    // A check that excluded every trial has verified nothing.
    const bool ran = r.trials_run > 0 || r.trials_excluded == 0;
    switch (c) {
        case Check::Theorem3:
            return base && ran && r.details.at("rank_violations") == 0.0;
        case Check::FrameChange:
            return base && ran &&
                   r.details.at("max_roundtrip_residual") <= 1e-12 &&
                   r.details.at("max_unitarity_residual") <= 1e-12;
        case Check::Trivialization:
            return base && ran && r.details.at("max_recovery_residual") <= 1e-10 &&
                   r.details.at("max_schmidt_rank") <= 1.0;
        default:
            return base && ran;
    }
}

} // namespace

const std::vector<Check>& all_checks() {
    static const std::vector<Check> order = [] {
        std::vector<Check> v;
        for (const auto& [c, name] : check_table()) v.push_back(c);
        return v;
    }();
    return order;
}

const std::string& check_name(Check c) {
    for (const auto& [check, name] : check_table())
        if (check == c) return name;
    throw ConfigError("unknown check id");
}

std::optional<Check> check_from_name(const std::string& name) {
    for (const auto& [check, known] : check_table())
        if (known == name) return check;
    return std::nullopt;
}

std::vector<Check> applicable_checks(const ExperimentSpec& spec) {
    const int n = static_cast<int>(spec.frames.size());
    const int ideal = count_ideal(spec);
    const bool all_ideal = ideal == n;

    std::vector<Check> out;
    for (Check c : all_checks()) {
        bool ok = false;
        switch (c) {
            case Check::Lemma1:
            case Check::Theorem1:
            case Check::Corollary1:
            case Check::Moments:
            case Check::FrameChange:
                ok = ideal >= 2;
                break;
            case Check::Theorem2:
            case Check::DSMax:
                ok = all_ideal && n >= 2;
                break;
            case Check::Theorem3:
                ok = n == 2;
                break;
            case Check::Povm:
                ok = true;
                break;
            case Check::Trivialization:
                ok = ideal >= 1;
                break;
        }
        if (ok) out.push_back(c);
    }
    return out;
}

void validate_spec(const ExperimentSpec& spec) {
    if (spec.frames.empty()) throw ConfigError("at least one frame is required");
    if (spec.trials < 1) throw ConfigError("trials must be >= 1");
    if (!(spec.tolerance > 0.0)) throw ConfigError("tolerance must be > 0");
    if (spec.subset_cap < 1) throw ConfigError("subset_cap must be >= 1");
    if (spec.alphas.empty()) throw ConfigError("the alpha grid must not be empty");
    for (double a : spec.alphas)
        if (!(a > 0.0)) throw ConfigError("every alpha must be > 0");

    const auto ctx = GroupContext::make(spec.group);
    const auto& irr = ctx->irreps;
    for (std::size_t i = 0; i < spec.frames.size(); ++i) {
        const auto& fc = spec.frames[i];
        const std::string where = "frame R" + std::to_string(i + 1);
        if (fc.ideal) {
            if (!fc.mults.empty() || !fc.seed.empty())
                throw ConfigError(where +
                                  ": ideal frames take no multiplicities or seed");
            continue;
        }
        if (fc.mults.size() != irr.size())
            throw ConfigError(where + ": multiplicities need one entry per irrep (" +
                              std::to_string(irr.size()) + " for " +
                              ctx->table.name + ")");
        int total_dim = 0;
        for (std::size_t q = 0; q < fc.mults.size(); ++q) {
            if (fc.mults[q] < 0)
                throw ConfigError(where + ": multiplicities must be >= 0");
            total_dim += fc.mults[q] * irr.dim_of(static_cast<int>(q));
            if (fc.qrf_wellformed && fc.mults[q] > irr.dim_of(static_cast<int>(q)))
                throw ConfigError(
                    where + ": the multiplicities must satisfy m_q <= d_q for the "
                            "coherent orbit to resolve the identity; irrep " +
                    irr.irreps[q].label + " has m=" + std::to_string(fc.mults[q]) +
                    " > d=" + std::to_string(irr.dim_of(static_cast<int>(q))) +
                    " (set qrf_wellformed=false to build it anyway)");
        }
        if (!fc.seed.empty() && static_cast<int>(fc.seed.size()) != total_dim)
            throw ConfigError(where + ": seed length " +
                              std::to_string(fc.seed.size()) +
                              " does not match the representation dimension " +
                              std::to_string(total_dim));
    }
    if (!spec.system.regular) {
        if (spec.system.mults.size() != irr.size())
            throw ConfigError("system multiplicities need one entry per irrep (" +
                              std::to_string(irr.size()) + " for " +
                              ctx->table.name + ")");
        for (int m : spec.system.mults)
            if (m < 0) throw ConfigError("system multiplicities must be >= 0");
    }

    const auto applicable = applicable_checks(spec);
    std::set<Check> seen;
    for (Check c : spec.checks) {
        if (!seen.insert(c).second)
            throw ConfigError("check \"" + check_name(c) + "\" is listed twice");
        if (std::find(applicable.begin(), applicable.end(), c) == applicable.end())
            throw ConfigError("check \"" + check_name(c) +
                              "\" does not apply to this configuration: " +
                              applicability_requirement(c));
    }

    if (spec.tradeoff_search) {
        if (spec.tradeoff_search->attempts < 1)
            throw ConfigError("tradeoff_search.attempts must be >= 1");
        if (spec.frames.size() != 2)
            throw ConfigError("the tradeoff witness search needs exactly two frames");
    }
}

SpacePtr build_space(const ExperimentSpec& spec) {
    validate_spec(spec);
    auto ctx = GroupContext::make(spec.group);
    std::vector<FrameSpec> frames;
    for (const auto& fc : spec.frames) {
        if (fc.ideal) {
            frames.push_back(make_ideal_frame(ctx));
        } else {
            std::optional<Eigen::VectorXcd> seed;
            if (!fc.seed.empty()) {
                Eigen::VectorXcd s(static_cast<Eigen::Index>(fc.seed.size()));
                for (std::size_t i = 0; i < fc.seed.size(); ++i)
                    s(static_cast<Eigen::Index>(i)) = fc.seed[i];
                seed = std::move(s);
            }
            frames.push_back(make_nonideal_frame(ctx, fc.mults, std::move(seed)));
        }
    }
    RepSpec system = spec.system.regular ? regular_rep(ctx)
                                         : rep_from_mults(ctx, spec.system.mults);
    return CompositeSpace::make(std::move(ctx), std::move(frames), std::move(system));
}

PhysicalState sample_physical(const SpacePtr& space, Rng& rng) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        Eigen::VectorXcd v(space->kin_dim());
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.complex_normal();
        v.normalize();
        LabeledState kin(space->kin_factors(), std::move(v));
        try {
            return project_physical(kin, space).first;
        } catch (const AnnihilationError&) {
            continue;
        }
    }
    throw NumericError(
        "100 random states in a row annihilated under group averaging: this "
        "configuration admits (numerically) no invariant states");
}

InvariantReport run_checks(const ExperimentSpec& spec) {
    validate_spec(spec);
    const SpacePtr space = build_space(spec);

    InvariantReport report;
    report.spec = spec;
    report.checks.reserve(spec.checks.size());
    for (Check c : spec.checks) {
        CheckResult r;
        r.name = check_name(c);
        r.tolerance = tolerance_for(c, spec);
        r.csv_columns = columns_for(c);
        report.checks.push_back(std::move(r));
    }

    // State-independent preparation.
    EffectiveBound eb;
    std::map<std::pair<std::string, std::string>, Eigen::MatrixXcd> unitaries;
    for (std::size_t ci = 0; ci < spec.checks.size(); ++ci) {
        CheckResult& res = report.checks[ci];
        switch (spec.checks[ci]) {
            case Check::Theorem3: {
                eb = effective_bound(*space, spec.log_base);
                res.details["bound"] = eb.bound;
                res.details["dim_bound"] = eb.dim_bound;
                res.details["d_eff_1_given_2"] = eb.d_eff_1_given_2;
                res.details["d_eff_2_given_1"] = eb.d_eff_2_given_1;
                res.details["rank_violations"] = 0.0;
                break;
            }
            case Check::FrameChange: {
                const auto ideals = ideal_frame_ids(*space);
                for (const auto& from : ideals)
                    for (const auto& to : ideals)
                        if (from != to)
                            unitaries[{from, to}] =
                                frame_change_unitary(*space, from, to);
                double roundtrip = 0.0, unitarity = 0.0;
                for (const auto& [pair, u] : unitaries) {
                    const Eigen::MatrixXcd& back = unitaries.at({pair.second, pair.first});
                    const Eigen::Index d = u.rows();
                    roundtrip = std::max(
                        roundtrip, (back * u - Eigen::MatrixXcd::Identity(d, d))
                                       .cwiseAbs()
                                       .maxCoeff());
                    unitarity = std::max(
                        unitarity,
                        (u.adjoint() * u - Eigen::MatrixXcd::Identity(d, d))
                            .cwiseAbs()
                            .maxCoeff());
                }
                res.details["max_roundtrip_residual"] = roundtrip;
                res.details["max_unitarity_residual"] = unitarity;
                break;
            }
            case Check::Povm:
                eval_povm(*space, res);
                break;
            case Check::Trivialization:
                res.details["max_recovery_residual"] = 0.0;
                res.details["max_schmidt_rank"] = 1.0;
                break;
            default:
                break;
        }
    }

    for (int trial = 0; trial < spec.trials; ++trial) {
        Rng state_rng = Rng::stream(spec.rng_seed, static_cast<std::uint64_t>(trial));
        const PhysicalState phys = sample_physical(space, state_rng);
        TrialCtx ctx{*space, phys, {}};

        for (std::size_t ci = 0; ci < spec.checks.size(); ++ci) {
            const Check c = spec.checks[ci];
            if (c == Check::Povm) continue; // state-independent, handled above
            CheckResult& res = report.checks[ci];
            Rng check_rng = Rng::stream(
                spec.rng_seed, ((static_cast<std::uint64_t>(ci) + 1) << 32) +
                                   static_cast<std::uint64_t>(trial));
            try {
                switch (c) {
                    case Check::Lemma1:
                        eval_lemma1(ctx, spec, check_rng, res, trial);
                        break;
                    case Check::Theorem1:
                        eval_theorem1(ctx, spec, check_rng, res, trial);
                        break;
                    case Check::Corollary1:
                        eval_corollary1(ctx, spec, check_rng, res, trial);
                        break;
                    case Check::Moments:
                        eval_moments(ctx, spec, check_rng, res, trial);
                        break;
                    case Check::Theorem2:
                        eval_theorem2(ctx, spec, res, trial);
                        break;
                    case Check::DSMax:
                        eval_dsmax(ctx, spec, res, trial);
                        break;
                    case Check::Theorem3:
                        eval_theorem3(ctx, spec, eb, res, trial);
                        break;
                    case Check::FrameChange:
                        eval_frame_change(ctx, unitaries, res, trial);
                        break;
                    case Check::Trivialization:
                        eval_trivialization(ctx, spec, check_rng, res, trial);
                        break;
                    case Check::Povm:
                        break;
                }
                ++res.trials_run;
            } catch (const ZeroOverlapError&) {
                ++res.trials_excluded;
            }
        }
    }

    for (std::size_t ci = 0; ci < spec.checks.size(); ++ci)
        report.checks[ci].pass = check_passes(spec.checks[ci], report.checks[ci]);

    if (spec.tradeoff_search) {
        TradeoffOutcome out;
        out.expected = spec.tradeoff_search->expect_witness;
        out.threshold = 10.0 * spec.tolerance;
        int excluded = 0;
        const auto witness = find_tradeoff_violation(
            space, spec.rng_seed, spec.tradeoff_search->attempts, out.threshold,
            spec.log_base, &excluded);
        out.attempts_excluded = excluded;
        if (witness) {
            out.found = true;
            out.found_at = witness->attempt;
            out.attempts_made = witness->attempt + 1;
            out.gap = witness->gap;
            const auto& amps = witness->phys.psi.amplitudes();
            out.witness_amplitudes.assign(amps.data(), amps.data() + amps.size());
        } else {
            out.attempts_made = spec.tradeoff_search->attempts;
        }
        out.pass = !out.expected || out.found;
        report.tradeoff = std::move(out);
    }

    report.all_pass = true;
    for (const auto& r : report.checks) report.all_pass = report.all_pass && r.pass;
    if (report.tradeoff) report.all_pass = report.all_pass && report.tradeoff->pass;
    return report;
}

double tradeoff_gap(const PhysicalState& phys, const EntropyParams& params) {
    if (params.alpha != 1.0)
        throw ConfigError("the tradeoff gap is a von Neumann quantity (alpha = 1)");
    const auto& space = *phys.space;
    if (space.num_frames() != 2)
        throw ConfigError("the tradeoff gap needs exactly two frames");
    const std::string r1 = space.frame(0).id;
    const std::string r2 = space.frame(1).id;
    auto side = [&](const std::string& from, const std::string& other) {
        const Perspective p = perspective_of(phys, from);
        return renyi(dephase(reduced(p, {other})), params);
    };
    return std::abs(side(r1, r2) - side(r2, r1));
}

std::optional<TradeoffWitness> find_tradeoff_violation(const SpacePtr& space,
                                                       std::uint64_t master_seed,
                                                       int attempts,
                                                       double threshold,
                                                       LogBase base, int* excluded) {
    if (space->num_frames() != 2)
        throw ConfigError("the tradeoff witness search needs exactly two frames");
    if (excluded) *excluded = 0;
    EntropyParams p1;
    p1.base = base;
    // Stream salt 11 lies past the ten per-check salts used by run_checks.
    constexpr std::uint64_t kSalt = 11ull << 32;
    for (int k = 0; k < attempts; ++k) {
        Rng rng = Rng::stream(master_seed, kSalt + static_cast<std::uint64_t>(k));
        PhysicalState phys = sample_physical(space, rng);
        try {
            const double gap = tradeoff_gap(phys, p1);
            if (gap > threshold) return TradeoffWitness{std::move(phys), gap, k};
        } catch (const ZeroOverlapError&) {
            if (excluded) ++*excluded;
        }
    }
    return std::nullopt;
}

} // namespace qrf
