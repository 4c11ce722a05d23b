#include "qrf/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qrf/errors.hpp"

namespace qrf {

namespace {

double to_base(double nats, LogBase base) {
    return base == LogBase::two ? nats / std::log(2.0) : nats;
}

LabeledDensity system_density(const Perspective& persp) {
    return partial_trace(density_of(persp.state), {"S"});
}

double system_entropy(const PhysicalState& phys, const std::string& frame_id,
                      const EntropyParams& params) {
    Perspective persp = perspective_of(phys, frame_id);
    return renyi(system_density(persp), params);
}

/// Frames-only reduction of a perspective: trace out S, keep the other Rk.
LabeledDensity frames_density(const Perspective& persp) {
    std::vector<std::string> kept;
    for (const auto& f : persp.state.factors())
        if (f.id != "S") kept.push_back(f.id);
    return partial_trace(density_of(persp.state), kept);
}

} // namespace

double renyi_from_spectrum(const std::vector<double>& eigs,
                           const EntropyParams& params) {
    if (!(params.alpha > 0.0))
        throw ConfigError("renyi entropy needs alpha > 0");
    double nats = 0.0;
    if (params.alpha == 1.0) {
        for (double lam : eigs)
            if (lam >= params.eig_floor) nats -= lam * std::log(lam);
    } else {
        double trace_pow = 0.0;
        for (double lam : eigs)
            if (lam >= params.eig_floor) trace_pow += std::pow(lam, params.alpha);
        if (trace_pow <= 0.0)
            throw NumericError("spectrum vanished below the eigenvalue floor");
        nats = std::log(trace_pow) / (1.0 - params.alpha);
    }
    return to_base(nats, params.base);
}

double renyi(const LabeledDensity& rho, const EntropyParams& params) {
    return renyi_from_spectrum(spectrum(rho), params);
}

double coherence(const LabeledDensity& rho, const EntropyParams& params) {
    return renyi(dephase(rho), params) - renyi(rho, params);
}

double total_correlation(const LabeledDensity& rho, const EntropyParams& params) {
    if (params.alpha != 1.0)
        throw ConfigError("total correlation is defined at alpha = 1 only");
    double sum = 0.0;
    for (const auto& f : rho.factors())
        sum += renyi(partial_trace(rho, {f.id}), params);
    return sum - renyi(rho, params);
}

double gamma_correlation(const Perspective& persp,
                         const std::vector<std::string>& frames_only,
                         const EntropyParams& params) {
    std::set<std::string> want;
    for (const auto& fr : persp.space->frames())
        if (fr.id != persp.frame_id) want.insert(fr.id);
    if (std::set<std::string>(frames_only.begin(), frames_only.end()) != want)
        throw ConfigError(
            "gamma takes exactly the frames other than the perspective frame");

    LabeledDensity joint = partial_trace(density_of(persp.state), frames_only);
    return total_correlation(joint, params) -
           total_correlation(dephase(joint), params);
}

double entropy_difference(const PhysicalState& phys, const std::string& frame_i,
                          const std::string& frame_j, const EntropyParams& params) {
    if (frame_i == frame_j) return 0.0;
    return std::abs(system_entropy(phys, frame_i, params) -
                    system_entropy(phys, frame_j, params));
}

MaxEntropyDiff max_entropy_difference(const PhysicalState& phys,
                                      const EntropyParams& params) {
    const auto& space = *phys.space;
    if (space.num_frames() < 2)
        throw ConfigError("entropy spread needs at least two frames");
    for (const auto& fr : space.frames())
        if (!fr.ideal)
            throw ConfigError("entropy spread is defined for ideal frames");

    MaxEntropyDiff out;
    double smax = 0.0, smin = 0.0, cmax = 0.0, cmin = 0.0;
    for (int i = 0; i < space.num_frames(); ++i) {
        const std::string& id = space.frame(i).id;
        Perspective persp = reduce(phys, id);
        const double s = renyi(system_density(persp), params);
        const double c = coherence(frames_density(persp), params);
        if (i == 0 || s > smax) {
            smax = s;
            out.argmax_frame = id;
        }
        if (i == 0 || s < smin) {
            smin = s;
            out.argmin_frame = id;
        }
        if (i == 0 || c > cmax) cmax = c;
        if (i == 0 || c < cmin) cmin = c;
    }
    out.value = smax - smin;
    out.coherence_spread = cmax - cmin;
    if (std::abs(out.value - out.coherence_spread) > 1e-9)
        throw NumericError(
            "entropy spread and coherence spread disagree beyond 1e-9");
    return out;
}

int effective_dimension(const IrrepTable& irreps, const std::vector<int>& mults_target,
                        const std::vector<int>& mults_cond_frame,
                        const std::vector<int>& mults_system) {
    const std::size_t nq = irreps.size();
    if (mults_target.size() != nq || mults_cond_frame.size() != nq ||
        mults_system.size() != nq)
        throw ConfigError("multiplicity vectors must have one entry per irrep");

    // n_q: copies of irrep q in (conditioning frame) x (system).
    std::vector<long> n(nq, 0);
    for (std::size_t q = 0; q < nq; ++q)
        for (std::size_t b = 0; b < nq; ++b)
            for (std::size_t c = 0; c < nq; ++c)
                n[q] += static_cast<long>(mults_cond_frame[b]) * mults_system[c] *
                        fusion_coefficient(irreps, static_cast<int>(b),
                                           static_cast<int>(c), static_cast<int>(q));

    long d_eff = 0;
    for (std::size_t a = 0; a < nq; ++a) {
        const long cap = n[static_cast<std::size_t>(
            irreps.conjugate[a])]; // pairing runs through the conjugate sector
        d_eff += irreps.irreps[a].dim *
                 std::min(static_cast<long>(mults_target[a]), cap);
    }
    return static_cast<int>(d_eff);
}

EffectiveBound effective_bound(const CompositeSpace& space, LogBase base) {
    if (space.num_frames() != 2)
        throw ConfigError("the entropy-difference bound is a two-frame statement");
    const auto& m1 = space.frame(0).rep.mults;
    const auto& m2 = space.frame(1).rep.mults;
    const auto& ms = space.system().mults;
    const auto& irreps = space.ctx()->irreps;

    EffectiveBound out;
    out.d_eff_1_given_2 = effective_dimension(irreps, m1, m2, ms);
    out.d_eff_2_given_1 = effective_dimension(irreps, m2, m1, ms);
    out.bound = to_base(
        std::log(static_cast<double>(std::max(out.d_eff_1_given_2,
                                              out.d_eff_2_given_1))),
        base);
    out.dim_bound = to_base(
        std::log(static_cast<double>(
            std::max(space.frame(0).rep.dim, space.frame(1).rep.dim))),
        base);
    return out;
}

BoundObservation entropy_difference_bound(const PhysicalState& phys,
                                          const EntropyParams& params) {
    BoundObservation out;
    out.bound = effective_bound(*phys.space, params.base);
    out.observed = entropy_difference(phys, phys.space->frame(0).id,
                                      phys.space->frame(1).id, params);
    out.holds = out.observed <= out.bound.bound + 1e-9;
    return out;
}

} // namespace qrf
