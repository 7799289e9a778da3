// analytic.hpp — closed-form predictions: critical temperature, condensate
// fraction, limit-law descriptors, occupation/energy series with certified
// truncation error, the characteristic function of the limit variable, and
// the explicit tail bounds.
//
// Series over the spectrum are finite sums over the generated levels plus a
// rigorous bound on the omitted tail.  The bound comes from E_j >= K j^{1/alpha}
// with K extracted from the generated spectrum, which turns every infinite
// series into a certified finite computation.  Tail sums of 1/E_j^2 are used
// directionally: an upper-bound use adds the remainder estimate, a lower-bound
// use drops it, so the resulting probability bounds stay valid either way.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "special.hpp"
#include "spectrum.hpp"

namespace bosegas {

inline constexpr double kAlphaTol = 1e-9;

inline bool alpha_is(double alpha, double target) { return std::abs(alpha - target) <= kAlphaTol; }

// ------------------------------------------------------------------ thermal

// Temperature convention (k_B = 1): T = t n^{1/alpha} for alpha > 1 and
// T = t n / log n for alpha = 1.
struct ThermalConfig {
    std::int64_t n;
    double t;
    double alpha;
    double T;
    double beta;
};

inline ThermalConfig make_thermal_config(std::int64_t n, double t, double alpha) {
    if (n < 1) throw std::invalid_argument("make_thermal_config: n must be positive");
    if (!(t > 0.0)) throw std::invalid_argument("make_thermal_config: t must be positive");
    if (!(alpha >= 1.0)) throw std::invalid_argument("make_thermal_config: alpha must be >= 1");
    double T;
    if (alpha_is(alpha, 1.0)) {
        if (n < 3) throw std::invalid_argument("make_thermal_config: alpha = 1 needs n >= 3");
        T = t * static_cast<double>(n) / std::log(static_cast<double>(n));
    } else {
        T = t * std::pow(static_cast<double>(n), 1.0 / alpha);
    }
    return {n, t, alpha, T, 1.0 / T};
}

inline double critical_t(const WeylParams& w) {
    if (alpha_is(w.alpha, 1.0)) return 1.0 / w.L;
    return std::pow(w.L * w.alpha * gamma_fn(w.alpha) * zeta_fn(w.alpha), -1.0 / w.alpha);
}

inline ThermalConfig thermal_config_from_ratio(std::int64_t n, double t_over_tc,
                                               const WeylParams& w) {
    return make_thermal_config(n, t_over_tc * critical_t(w), w.alpha);
}

// ---------------------------------------------------------------- fraction

struct CondensateFraction {
    double value;           // limiting N_0 / n
    bool outside_theorem;   // true when t >= t_c (value pinned to 0 there)
};

inline CondensateFraction condensate_fraction(double t, const WeylParams& w) {
    if (!(t > 0.0)) throw std::invalid_argument("condensate_fraction: t must be positive");
    const double tc = critical_t(w);
    if (t >= tc) return {0.0, true};
    return {1.0 - std::pow(t / tc, w.alpha), false};
}

// --------------------------------------------------------------- limit law

enum class LimitRegime { AlphaEq1, AlphaIn12, AlphaEq2, AlphaGt2 };

inline const char* to_string(LimitRegime r) {
    switch (r) {
        case LimitRegime::AlphaEq1: return "alpha-eq-1";
        case LimitRegime::AlphaIn12: return "alpha-in-1-2";
        case LimitRegime::AlphaEq2: return "alpha-eq-2";
        case LimitRegime::AlphaGt2: return "alpha-gt-2";
    }
    return "?";
}

// Fluctuation law of N_0 about its mean: the scale of the fluctuations as an
// expression in n, and either a centered normal with explicit variance or the
// scaled non-normal variable (t/t_c) W.
struct LimitLaw {
    LimitRegime regime;
    std::string scale;
    bool normal;
    double variance = 0.0;       // only for the normal regimes
    double w_multiplier = 0.0;   // only for the W regimes
};

inline LimitLaw limit_law(const WeylParams& w, double t) {
    const double tc = critical_t(w);
    if (!(t > 0.0) || t >= tc)
        throw std::domain_error("limit_law: requires t < t_c");
    const double r = t / tc;
    if (alpha_is(w.alpha, 1.0))
        return {LimitRegime::AlphaEq1, "n/log n", false, 0.0, r};
    if (w.alpha < 2.0 - kAlphaTol)
        return {LimitRegime::AlphaIn12, "n^{1/alpha}", false, 0.0, r};
    if (alpha_is(w.alpha, 2.0))
        return {LimitRegime::AlphaEq2, "sqrt(n log n)", true, 3.0 * r * r / (M_PI * M_PI), 0.0};
    return {LimitRegime::AlphaGt2, "sqrt(n)", true,
            std::pow(r, w.alpha) * zeta_fn(w.alpha - 1.0) / zeta_fn(w.alpha), 0.0};
}

inline double energy_lln_constant(const WeylParams& w) {
    if (alpha_is(w.alpha, 1.0)) return w.L * M_PI * M_PI / 6.0;
    return w.L * w.alpha * gamma_fn(w.alpha + 1.0) * zeta_fn(w.alpha + 1.0);
}

// ------------------------------------------------------ certified series

struct SeriesResult {
    double value;
    double tail_bound;   // certified bound on the omitted part
};

namespace detail {

// int_z^inf v^{s-1} e^{-v} dv <= z^{s-1} e^{-z} / (1 - (s-1)/z) for z > s-1
inline double upper_gamma_bound(double s, double z) {
    if (!(z > s - 1.0)) return std::numeric_limits<double>::infinity();
    if (s <= 1.0) return std::pow(z, s - 1.0) * std::exp(-z);
    return std::pow(z, s - 1.0) * std::exp(-z) / (1.0 - (s - 1.0) / z);
}

// bound on sum_{j>J} (K j^{1/alpha})^w e^{-beta K j^{1/alpha}}  (decreasing-term
// integral comparison; requires the summand to be decreasing at J, i.e. z > w)
inline double weyl_exp_tail(double J, double K, double alpha, double beta, double w) {
    const double z = beta * K * std::pow(J, 1.0 / alpha);
    if (!(z > w)) return std::numeric_limits<double>::infinity();
    return alpha * std::pow(beta, -w) * std::pow(beta * K, -alpha) *
           upper_gamma_bound(w + alpha, z);
}

enum class OccSeries { MeanM, VarM, MeanR, VarR };

inline SeriesResult occupation_series(OccSeries kind, double beta, const EnergySpectrum& spec,
                                      double tol) {
    if (!(beta > 0.0)) throw std::invalid_argument("occupation series: beta must be > 0");
    if (!(tol > 0.0)) throw std::invalid_argument("occupation series: tol must be > 0");
    double sum = 0.0;
    const auto& lv = spec.levels();
    for (std::size_t i = lv.size(); i-- > 1;) {  // smallest terms first
        const double e = lv[i].energy;
        const double m = static_cast<double>(lv[i].multiplicity);
        const double q = std::expm1(beta * e);
        switch (kind) {
            case OccSeries::MeanM: sum += m / q; break;
            case OccSeries::VarM: sum += m * (1.0 + q) / (q * q); break;
            case OccSeries::MeanR: sum += m * e / q; break;
            case OccSeries::VarR: sum += m * e * e * (1.0 + q) / (q * q); break;
        }
    }
    double tail = 0.0;
    if (spec.kind() != TrapKind::Custom) {  // custom files define a complete model
        const WeylParams w = analytic_weyl(spec.kind(), spec.scale());
        const double K = spec.ejbd_constant(w.alpha);
        const double J = static_cast<double>(spec.total_excited_states());
        const double elast = lv.back().energy;
        const double c = 1.0 / -std::expm1(-beta * elast);
        switch (kind) {
            case OccSeries::MeanM: tail = c * weyl_exp_tail(J, K, w.alpha, beta, 0.0); break;
            case OccSeries::VarM: tail = c * c * weyl_exp_tail(J, K, w.alpha, beta, 0.0); break;
            case OccSeries::MeanR: tail = c * weyl_exp_tail(J, K, w.alpha, beta, 1.0); break;
            case OccSeries::VarR: tail = c * c * weyl_exp_tail(J, K, w.alpha, beta, 2.0); break;
        }
        if (!(tail <= tol)) {
            // estimate the cutoff that would certify: states grow like L lambda^alpha
            double lam = std::max(spec.cutoff(), 1.0 / beta);
            for (int it = 0; it < 200; ++it) {
                lam *= 2.0;
                const double jj = std::max(w.L * std::pow(lam, w.alpha), J);
                const double cc = 1.0 / -std::expm1(-beta * lam);
                const double wexp = (kind == OccSeries::MeanR)   ? 1.0
                                    : (kind == OccSeries::VarR) ? 2.0
                                                                : 0.0;
                const double cfac = (kind == OccSeries::VarM || kind == OccSeries::VarR)
                                        ? cc * cc
                                        : cc;
                if (cfac * weyl_exp_tail(jj, K, w.alpha, beta, wexp) < 0.5 * tol) break;
            }
            throw SpectrumRangeError(
                "occupation series: generated cutoff cannot certify requested tolerance, "
                "extend the spectrum",
                lam);
        }
    }
    return {sum, tail};
}

}  // namespace detail

// E(M) = sum_j 1/(e^{beta E_j} - 1) over excited states, within tol of the
// full series; the companion variance/energy series follow the same contract.
inline SeriesResult mean_M(double beta, const EnergySpectrum& spec, double tol) {
    return detail::occupation_series(detail::OccSeries::MeanM, beta, spec, tol);
}
inline SeriesResult var_M(double beta, const EnergySpectrum& spec, double tol) {
    return detail::occupation_series(detail::OccSeries::VarM, beta, spec, tol);
}
inline SeriesResult mean_R(double beta, const EnergySpectrum& spec, double tol) {
    return detail::occupation_series(detail::OccSeries::MeanR, beta, spec, tol);
}
inline SeriesResult var_R(double beta, const EnergySpectrum& spec, double tol) {
    return detail::occupation_series(detail::OccSeries::VarR, beta, spec, tol);
}

// ------------------------------------------------- inverse-energy prefix sums

// State-granular prefix sums of 1/E_j and 1/E_j^2 over the excited states,
// with a one-sided remainder for everything beyond the generated range.
class InvEnergySums {
  public:
    InvEnergySums(const EnergySpectrum& spec, const WeylParams& weyl) : spec_(&spec) {
        const auto& lv = spec.levels();
        cum_inv_.resize(lv.size(), 0.0);
        cum_inv2_.resize(lv.size(), 0.0);
        double a = 0.0, b = 0.0;
        for (std::size_t i = 1; i < lv.size(); ++i) {
            const double m = static_cast<double>(lv[i].multiplicity);
            a += m / lv[i].energy;
            b += m / (lv[i].energy * lv[i].energy);
            cum_inv_[i] = a;
            cum_inv2_[i] = b;
        }
        if (spec.kind() == TrapKind::Custom) {
            remainder_inv2_ = 0.0;  // complete model
        } else if (weyl.alpha < 2.0 - kAlphaTol) {
            // K taken from the asymptotic half of the generated range; the
            // small-j levels would make the bound needlessly loose
            const double k = spec.ejbd_constant(weyl.alpha, lv.size() / 2);
            const double j = static_cast<double>(spec.total_excited_states());
            remainder_inv2_ = (weyl.alpha / (2.0 - weyl.alpha)) / (k * k) *
                              std::pow(j, -(2.0 - weyl.alpha) / weyl.alpha);
        } else {
            remainder_inv2_ = std::numeric_limits<double>::infinity();
        }
    }

    std::int64_t total_states() const { return spec_->total_excited_states(); }

    // sum_{j<=J} 1/E_j over excited states
    double prefix_inv(std::int64_t J) const {
        if (J <= 0) return 0.0;
        J = std::min(J, total_states());
        const std::size_t lev = spec_->level_of_excited_state(J);
        const std::int64_t within = J - spec_->excited_states_through(lev - 1);
        return cum_inv_[lev - 1] +
               static_cast<double>(within) / spec_->energy(lev);
    }

    double prefix_inv2(std::int64_t J) const {
        if (J <= 0) return 0.0;
        J = std::min(J, total_states());
        const std::size_t lev = spec_->level_of_excited_state(J);
        const std::int64_t within = J - spec_->excited_states_through(lev - 1);
        return cum_inv2_[lev - 1] +
               static_cast<double>(within) / (spec_->energy(lev) * spec_->energy(lev));
    }

    // sum_{j>J} 1/E_j^2 including the out-of-range remainder (upper-bound use)
    double tail_inv2_upper(std::int64_t J) const {
        return std::max(0.0, cum_inv2_.back() - prefix_inv2(J)) + remainder_inv2_;
    }

    // generated part only (lower-bound use)
    double tail_inv2_lower(std::int64_t J) const {
        return std::max(0.0, cum_inv2_.back() - prefix_inv2(J));
    }

    double remainder_inv2() const { return remainder_inv2_; }

    // largest J with prefix_inv(J) <= target (may be 0)
    std::int64_t last_state_below(double target) const {
        if (target <= 0.0) return 0;
        if (cum_inv_.back() <= target) {
            // a complete (custom) model simply runs out of states; an
            // extensible trap needs a larger cutoff to locate the crossing
            if (spec_->kind() == TrapKind::Custom) return total_states();
            throw SpectrumRangeError(
                "inverse-energy prefix never reaches target within generated range",
                spec_->cutoff() * 4.0);
        }
        std::size_t lo = 0, hi = cum_inv_.size() - 1;
        while (lo < hi) {  // last level with cum_inv <= target
            const std::size_t mid = (lo + hi + 1) / 2;
            if (cum_inv_[mid] <= target)
                lo = mid;
            else
                hi = mid - 1;
        }
        const double have = cum_inv_[lo];
        const std::size_t next = lo + 1;
        std::int64_t j = spec_->excited_states_through(lo);
        const double e = spec_->energy(next);
        std::int64_t extra = static_cast<std::int64_t>(std::floor((target - have) * e));
        extra = std::clamp<std::int64_t>(extra, 0, spec_->multiplicity(next));
        return j + extra;
    }

    // smallest J with prefix_inv(J) >= target
    std::int64_t first_state_at(double target) const {
        if (target <= 0.0) return 0;
        if (cum_inv_.back() < target)
            throw SpectrumRangeError(
                "inverse-energy prefix never reaches target within generated range",
                spec_->cutoff() * 4.0);
        std::int64_t j = last_state_below(target);
        if (prefix_inv(j) < target) ++j;
        return j;
    }

  private:
    const EnergySpectrum* spec_;
    std::vector<double> cum_inv_;
    std::vector<double> cum_inv2_;
    double remainder_inv2_ = 0.0;
};

// --------------------------------------------------- characteristic function

struct CharFnResult {
    std::complex<double> value;
    double tail_bound;   // |log correction| of the omitted terms, xi^2/2 sum 1/E_j^2
};

// exp( sum_{j<=terms} [ log E_j - log(E_j - i xi) - i xi / E_j ] ) with the
// principal logarithm, multiplicity-weighted over excited states
inline CharFnResult u_char_fn(double xi, const EnergySpectrum& spec, std::int64_t terms) {
    if (terms < 0 || terms > spec.total_excited_states())
        throw std::invalid_argument("u_char_fn: terms must lie within the generated states");
    if (xi == 0.0) return {{1.0, 0.0}, 0.0};
    std::complex<double> acc{0.0, 0.0};
    std::int64_t left = terms;
    const auto& lv = spec.levels();
    for (std::size_t i = 1; i < lv.size() && left > 0; ++i) {
        const double cnt =
            static_cast<double>(std::min<std::int64_t>(left, lv[i].multiplicity));
        const double e = lv[i].energy;
        const std::complex<double> term =
            std::log(std::complex<double>(e, 0.0)) - std::log(std::complex<double>(e, -xi)) -
            std::complex<double>(0.0, xi / e);
        acc += cnt * term;
        left -= static_cast<std::int64_t>(cnt);
    }
    const WeylParams w = spec.kind() == TrapKind::Custom
                             ? WeylParams(1.0, 1.0)
                             : analytic_weyl(spec.kind(), spec.scale());
    InvEnergySums sums(spec, w);
    const double tail = 0.5 * xi * xi * sums.tail_inv2_upper(terms);
    return {std::exp(acc), tail};
}

// ------------------------------------------------------------- tail bounds

namespace detail {

inline void check_tail_preconditions(double x, const WeylParams& w) {
    if (!(x > 0.0)) throw std::domain_error("tail bound: x must be positive");
    if (!(w.alpha < 2.0 - kAlphaTol))
        throw std::domain_error(
            "tail bound: requires sum 1/E_j^2 < infinity, i.e. alpha < 2");
}

}  // namespace detail

// P(W >= x) <= exp(-x^2 / (8 sum_{j>n_x} 1/E_j^2)) with n_x the largest state
// count whose inverse-energy partial sum stays <= x/2.  The tail sum is taken
// with its out-of-range remainder added, which keeps the bound valid.
inline double tail_upper_bound(double x, const EnergySpectrum& spec, const WeylParams& w) {
    detail::check_tail_preconditions(x, w);
    InvEnergySums sums(spec, w);
    const std::int64_t nx = sums.last_state_below(0.5 * x);
    const double s = sums.tail_inv2_upper(nx);
    if (s <= 0.0) return 0.0;
    return std::min(1.0, std::exp(-x * x / (8.0 * s)));
}

// P(W >= x) >= 2^{-22} exp(-120 x^2 / sum_{j>n_x'} 1/E_j^2) with n_x' the
// smallest state count whose partial sum reaches 2x.  The tail sum here drops
// the out-of-range remainder, again the validity-preserving direction.
inline double tail_lower_bound(double x, const EnergySpectrum& spec, const WeylParams& w) {
    detail::check_tail_preconditions(x, w);
    InvEnergySums sums(spec, w);
    const std::int64_t nxp = sums.first_state_at(2.0 * x);
    const double s = sums.tail_inv2_lower(nxp);
    if (s <= 0.0) return 0.0;
    return std::pow(2.0, -22.0) * std::exp(-120.0 * x * x / s);
}

// ------------------------------------------------------------------- MGF

struct MgfResult {
    double value;
    double log_tail_bound;   // bound on the omitted log-terms
};

// phi(lambda) = E(e^{-lambda W}) = prod_j e^{-lambda/E_j} / (1 - lambda/E_j),
// truncated after `terms` states; defined for lambda < E_1, lambda may be < 0.
inline MgfResult neg_w_mgf(double lambda, const EnergySpectrum& spec, std::int64_t terms) {
    if (spec.level_count() < 2) throw std::invalid_argument("neg_w_mgf: no excited levels");
    const double e1 = spec.energy(1);
    if (!(lambda < e1))
        throw std::domain_error("neg_w_mgf: diverges for lambda >= E_1");
    if (terms < 1 || terms > spec.total_excited_states())
        throw std::invalid_argument("neg_w_mgf: terms must lie within the generated states");
    double acc = 0.0;
    std::int64_t left = terms;
    const auto& lv = spec.levels();
    std::size_t i = 1;
    for (; i < lv.size() && left > 0; ++i) {
        const double cnt =
            static_cast<double>(std::min<std::int64_t>(left, lv[i].multiplicity));
        const double r = lambda / lv[i].energy;
        acc += cnt * (-r - std::log1p(-r));
        left -= static_cast<std::int64_t>(cnt);
    }
    const WeylParams w = spec.kind() == TrapKind::Custom
                             ? WeylParams(1.0, 1.0)
                             : analytic_weyl(spec.kind(), spec.scale());
    InvEnergySums sums(spec, w);
    // omitted energies all exceed the first energy past the truncation
    const double e_omit = (i < lv.size()) ? lv[i].energy : lv.back().energy;
    const double cfac = lambda > 0.0 ? 1.0 / (1.0 - lambda / e_omit) : 1.0;
    const double tail = 0.5 * lambda * lambda * sums.tail_inv2_upper(terms) * cfac;
    return {std::exp(acc), tail};
}

// Chernoff bound P(W <= -x) <= inf_{0 < lambda < E_1} e^{-lambda x} phi(lambda),
// minimized by golden-section search (the log is convex in lambda).
inline double chernoff_left_tail(double x, const EnergySpectrum& spec) {
    if (!(x > 0.0)) throw std::domain_error("chernoff_left_tail: x must be positive");
    const double e1 = spec.energy(1);
    const std::int64_t terms = spec.total_excited_states();
    auto objective = [&](double lam) {
        const MgfResult m = neg_w_mgf(lam, spec, terms);
        return -lam * x + std::log(m.value) + m.log_tail_bound;
    };
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 1e-9, b = e1 * (1.0 - 1e-9);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = objective(c), fd = objective(d);
    for (int it = 0; it < 90; ++it) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - gr * (b - a);
            fc = objective(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + gr * (b - a);
            fd = objective(d);
        }
    }
    return std::min(1.0, std::exp(std::min(fc, fd)));
}

}  // namespace bosegas
