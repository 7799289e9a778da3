// sampler.hpp — exact Monte Carlo for the trapped ideal Bose gas.
//
// Canonical ensemble: occupations of the excited states are independent
// geometrics Z_j with parameter 1 - e^{-beta E_j}; conditioning the product
// law on M = sum Z_j <= n and setting N_0 = n - M reproduces the canonical
// Gibbs measure exactly, so rejection on {M <= n} is an exact sampler.  It is
// efficient precisely in the condensed regime t < t_c, and fails loudly
// (never silently) when the acceptance collapses.
//
// A level with multiplicity m is drawn as one negative-binomial variate
// (gamma-Poisson mixture) when m > 8 and as m explicit geometrics otherwise;
// the law is identical, the speedup for degenerate traps is large.
//
// W sampler: truncation of norm * sum_j (1 - X_j)/E_j with i.i.d. unit
// exponentials X_j, multiplicity-expanded, with a certified L2 truncation
// error; a level contributes (m - Gamma(m, 1))/E in one draw.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "analytic.hpp"
#include "rng.hpp"
#include "spectrum.hpp"

namespace bosegas {

struct OccupationSample {
    // (level index, count), ascending, ground always present, zeros elided
    std::vector<std::pair<std::uint32_t, std::int64_t>> occupations;
    std::int64_t n = 0;                     // total particle count of this draw
    int acceptance_tries = 0;
    double truncation_epsilon = 0.0;        // certified omitted expected occupancy
    std::int32_t tracked_level = -1;
    std::int64_t tracked_state_count = -1;  // occupation of one state of that level

    std::int64_t occupation_of(std::uint32_t level) const {
        for (const auto& [lev, cnt] : occupations)
            if (lev == level) return cnt;
            else if (lev > level) break;
        return 0;
    }
};

inline double total_energy(const OccupationSample& s, const EnergySpectrum& spec) {
    double e = 0.0;
    for (const auto& [lev, cnt] : s.occupations)
        e += static_cast<double>(cnt) * spec.energy(lev);
    return e;
}

struct RejectionFailureError : std::runtime_error {
    double acceptance_estimate;
    int tries;
    RejectionFailureError(double est, int t)
        : std::runtime_error(
              "sample_canonical: rejection failed after " + std::to_string(t) +
              " tries (acceptance < " + std::to_string(est) +
              "); the temperature is likely at or above t_c or n is too small"),
          acceptance_estimate(est),
          tries(t) {}
};

// Certified bound on the expected occupancy of everything above the generated
// cutoff (zero for custom spectra, which define a complete model).
inline double occupancy_tail_bound(const EnergySpectrum& spec, double beta) {
    if (spec.kind() == TrapKind::Custom) return 0.0;
    const WeylParams w = analytic_weyl(spec.kind(), spec.scale());
    const double K = spec.ejbd_constant(w.alpha);
    const double J = static_cast<double>(spec.total_excited_states());
    const double c = 1.0 / -std::expm1(-beta * spec.levels().back().energy);
    return c * detail::weyl_exp_tail(J, K, w.alpha, beta, 0.0);
}

// Smallest built-in spectrum whose omitted-tail expected occupancy is < eps.
inline EnergySpectrum spectrum_for_occupancy(TrapKind kind, double scale, double beta,
                                             double eps) {
    double cutoff = std::max(8.0 * scale, 8.0 / beta);
    for (int it = 0; it < 60; ++it) {
        EnergySpectrum spec = build_spectrum(kind, scale, cutoff);
        if (occupancy_tail_bound(spec, beta) < eps) return spec;
        cutoff *= 2.0;
    }
    throw CapacityError("spectrum_for_occupancy: cannot certify requested epsilon");
}

struct CanonicalOptions {
    int max_tries = 1000;
    double truncation_eps = 1e-3;   // recorded in the sample meta
    std::int32_t tracked_level = -1;  // sample this level state-by-state
};

// One canonical-ensemble draw of (N_0, N_1, ...) for n particles at inverse
// temperature beta.  Precondition (caller's): the spectrum cutoff certifies
// occupancy_tail_bound < truncation_eps, see spectrum_for_occupancy.
inline OccupationSample sample_canonical(std::int64_t n, double beta,
                                         const EnergySpectrum& spec, PhiloxEngine& rng,
                                         const CanonicalOptions& opts = {}) {
    if (n < 0) throw std::invalid_argument("sample_canonical: n must be >= 0");
    if (!(beta > 0.0)) throw std::invalid_argument("sample_canonical: beta must be > 0");
    const auto& lv = spec.levels();
    std::vector<std::pair<std::uint32_t, std::int64_t>> occ;
    occ.reserve(lv.size());
    for (int attempt = 1; attempt <= opts.max_tries; ++attempt) {
        occ.clear();
        std::int64_t m_total = 0;
        std::int64_t tracked = -1;
        bool rejected = false;
        for (std::size_t i = 1; i < lv.size(); ++i) {
            const std::int64_t mult = lv[i].multiplicity;
            const double e = lv[i].energy;
            std::int64_t c;
            if (static_cast<std::int32_t>(i) == opts.tracked_level) {
                c = 0;
                for (std::int64_t k = 0; k < mult; ++k) {
                    const std::int64_t z = sample_geometric(beta, e, rng);
                    if (k == 0) tracked = z;
                    c += z;
                }
            } else if (mult > 8) {
                c = sample_geometric_sum(mult, beta, e, rng);
            } else {
                c = 0;
                for (std::int64_t k = 0; k < mult; ++k) c += sample_geometric(beta, e, rng);
            }
            if (c > 0) {
                occ.emplace_back(static_cast<std::uint32_t>(i), c);
                m_total += c;
                if (m_total > n) { rejected = true; break; }
            }
        }
        if (rejected) continue;
        OccupationSample out;
        out.occupations.reserve(occ.size() + 1);
        out.occupations.emplace_back(0u, n - m_total);
        out.occupations.insert(out.occupations.end(), occ.begin(), occ.end());
        out.n = n;
        out.acceptance_tries = attempt;
        out.truncation_epsilon = opts.truncation_eps;
        out.tracked_level = opts.tracked_level;
        out.tracked_state_count = tracked;
        return out;
    }
    throw RejectionFailureError(1.0 / static_cast<double>(opts.max_tries), opts.max_tries);
}

inline OccupationSample sample_canonical(const ThermalConfig& cfg, const EnergySpectrum& spec,
                                         PhiloxEngine& rng, const CanonicalOptions& opts = {}) {
    return sample_canonical(cfg.n, cfg.beta, spec, rng, opts);
}

// ----------------------------------------------------------------- W sampler

// Truncation schedule for W = norm * sum (1 - X_j)/E_j.  Self-contained:
// holds the inverse energies and per-level state counts it iterates, so one
// plan can be shared across concurrent replicas.
struct WPlan {
    double delta = 0.0;          // requested L2 error
    double tail_l2 = 0.0;        // certified L2 error of the omitted tail
    double normalization = 1.0;
    std::int64_t states_used = 0;
    std::vector<double> inv_energy;
    std::vector<std::int64_t> counts;
};

inline WPlan plan_w(const EnergySpectrum& spec, const WeylParams& weyl, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("plan_w: delta must be > 0");
    if (!(weyl.alpha < 2.0 - kAlphaTol))
        throw std::domain_error("plan_w: W is undefined for alpha >= 2 (normal regimes)");
    InvEnergySums sums(spec, weyl);
    const std::int64_t total = sums.total_states();
    const double target = delta * delta;
    if (!(sums.tail_inv2_upper(total) <= target)) {
        const double rem = sums.remainder_inv2();
        const double grow =
            std::pow(rem / (0.5 * target), weyl.alpha / (2.0 - weyl.alpha));
        const double required =
            spec.cutoff() * std::max(2.0, std::pow(grow, 1.0 / weyl.alpha));
        throw SpectrumRangeError(
            "plan_w: requested delta unattainable at the generated cutoff", required);
    }
    // smallest J with certified tail <= delta^2 (tail is nonincreasing in J)
    std::int64_t lo = 0, hi = total;
    while (lo < hi) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (sums.tail_inv2_upper(mid) <= target)
            hi = mid;
        else
            lo = mid + 1;
    }
    WPlan plan;
    plan.delta = delta;
    plan.states_used = lo;
    plan.tail_l2 = std::sqrt(sums.tail_inv2_upper(lo));
    plan.normalization =
        alpha_is(weyl.alpha, 1.0)
            ? 1.0 / weyl.L
            : std::pow(weyl.L * weyl.alpha * gamma_fn(weyl.alpha) * zeta_fn(weyl.alpha),
                       -1.0 / weyl.alpha);
    std::int64_t left = lo;
    const auto& lv = spec.levels();
    for (std::size_t i = 1; i < lv.size() && left > 0; ++i) {
        const std::int64_t c = std::min<std::int64_t>(left, lv[i].multiplicity);
        plan.inv_energy.push_back(1.0 / lv[i].energy);
        plan.counts.push_back(c);
        left -= c;
    }
    return plan;
}

inline double sample_w(const WPlan& plan, PhiloxEngine& rng) {
    double acc = 0.0;
    for (std::size_t i = 0; i < plan.inv_energy.size(); ++i) {
        const std::int64_t c = plan.counts[i];
        if (c > 8) {
            acc += (static_cast<double>(c) - sample_gamma(static_cast<double>(c), rng)) *
                   plan.inv_energy[i];
        } else {
            double s = 0.0;
            for (std::int64_t k = 0; k < c; ++k) s += 1.0 - sample_exponential(rng);
            acc += s * plan.inv_energy[i];
        }
    }
    return plan.normalization * acc;
}

inline double sample_w(const EnergySpectrum& spec, const WeylParams& weyl, double delta,
                       PhiloxEngine& rng) {
    const WPlan plan = plan_w(spec, weyl, delta);
    return sample_w(plan, rng);
}

struct WSetup {
    EnergySpectrum spectrum;
    WPlan plan;
};

// Build a spectrum large enough to certify the requested delta, then plan.
inline WSetup prepare_w(TrapKind kind, double scale, double delta) {
    const WeylParams weyl = analytic_weyl(kind, scale);
    double cutoff = std::max(64.0 * scale, 64.0);
    for (int it = 0; it < 60; ++it) {
        EnergySpectrum spec = build_spectrum(kind, scale, cutoff);
        try {
            WPlan plan = plan_w(spec, weyl, delta);
            return {std::move(spec), std::move(plan)};
        } catch (const SpectrumRangeError& e) {
            cutoff = std::max(e.required_cutoff, cutoff * 2.0);
        }
    }
    throw CapacityError("prepare_w: cannot certify requested delta");
}

// ------------------------------------------------------- grand canonical

// Expected total particle number at chemical potential mu (< 0).
inline double grand_canonical_expected_total(const EnergySpectrum& spec, double T, double mu) {
    const double beta = 1.0 / T;
    double total = 0.0;
    const auto& lv = spec.levels();
    for (std::size_t i = lv.size(); i-- > 0;)
        total += static_cast<double>(lv[i].multiplicity) / std::expm1(beta * (lv[i].energy - mu));
    return total;
}

// mu < 0 with expected total == n to relative tolerance 1e-8, by bisection
// (the expected count is continuous and strictly increasing in mu).
inline double solve_chemical_potential(const EnergySpectrum& spec, double T, std::int64_t n) {
    if (!(T > 0.0)) throw std::invalid_argument("solve_chemical_potential: T must be > 0");
    if (n < 1) throw std::invalid_argument("solve_chemical_potential: n must be >= 1");
    const double target = static_cast<double>(n);
    double hi = -1e-18 * T;   // ground-state term alone exceeds any physical n here
    double lo = -T;
    while (grand_canonical_expected_total(spec, T, lo) > target) lo *= 2.0;
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 300; ++it) {
        mid = 0.5 * (lo + hi);
        const double f = grand_canonical_expected_total(spec, T, mid);
        if (std::abs(f - target) <= 1e-8 * target) return mid;
        if (f < target)
            lo = mid;
        else
            hi = mid;
    }
    return mid;
}

// Independent geometric occupation of every level (ground included) with
// parameter 1 - e^{-beta (E_j - mu)}; the total particle number is random.
inline OccupationSample sample_grand_canonical(const EnergySpectrum& spec, double T, double mu,
                                               PhiloxEngine& rng) {
    if (!(mu < 0.0)) throw std::domain_error("sample_grand_canonical: mu must be < 0");
    if (!(T > 0.0)) throw std::invalid_argument("sample_grand_canonical: T must be > 0");
    const double beta = 1.0 / T;
    OccupationSample out;
    const auto& lv = spec.levels();
    std::int64_t total = 0;
    for (std::size_t i = 0; i < lv.size(); ++i) {
        const std::int64_t mult = lv[i].multiplicity;
        const double e = lv[i].energy - mu;
        std::int64_t c;
        if (mult > 8) {
            c = sample_geometric_sum(mult, beta, e, rng);
        } else {
            c = 0;
            for (std::int64_t k = 0; k < mult; ++k) c += sample_geometric(beta, e, rng);
        }
        if (c > 0 || i == 0) out.occupations.emplace_back(static_cast<std::uint32_t>(i), c);
        total += c;
    }
    out.n = total;
    out.acceptance_tries = 1;
    return out;
}

// ------------------------------------------------------------- replication

struct ReplicaError : std::runtime_error {
    std::int64_t replica;
    ReplicaError(std::int64_t idx, const std::string& what)
        : std::runtime_error("replica " + std::to_string(idx) + ": " + what), replica(idx) {}
};

// Runs task(RngStream{base_seed, i}) for i = 0..count-1.  Replica i always
// sees the same stream, so the result vector is identical for any thread
// count or execution order.
template <typename Task>
auto replicate(Task&& task, std::int64_t count, std::uint64_t base_seed, int threads = 0)
    -> std::vector<std::invoke_result_t<Task&, RngStream>> {
    using Result = std::invoke_result_t<Task&, RngStream>;
    if (count < 1) throw std::invalid_argument("replicate: count must be >= 1");
    std::vector<Result> results(static_cast<std::size_t>(count));
    int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    nthreads = std::max(1, std::min<int>(nthreads, static_cast<int>(count)));
    std::vector<std::pair<std::int64_t, std::string>> errors(static_cast<std::size_t>(nthreads),
                                                             {-1, {}});
    auto worker = [&](int tid) {
        const std::int64_t begin = count * tid / nthreads;
        const std::int64_t end = count * (tid + 1) / nthreads;
        for (std::int64_t i = begin; i < end; ++i) {
            try {
                results[static_cast<std::size_t>(i)] =
                    task(RngStream{base_seed, static_cast<std::uint64_t>(i)});
            } catch (const std::exception& e) {
                errors[static_cast<std::size_t>(tid)] = {i, e.what()};
                return;
            }
        }
    };
    if (nthreads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    std::int64_t first = -1;
    std::string what;
    for (const auto& [idx, msg] : errors)
        if (idx >= 0 && (first < 0 || idx < first)) { first = idx; what = msg; }
    if (first >= 0) throw ReplicaError(first, what);
    return results;
}

}  // namespace bosegas
