// rng.hpp — reproducible random streams and the exact samplers built on them.
//
// Streams are counter-based (Philox 4x32, 10 rounds): a stream is addressed
// by (seed, stream_id) and produces the same sequence on every run, so
// replicated work can be farmed out in any order.  Distinct stream ids give
// statistically independent sequences by construction; the 64-bit stream id
// occupies the upper counter words and the 64-bit seed is the cipher key.
//
// Samplers:
//   exponential : 256-layer ziggurat (Marsaglia & Tsang 2000), exact
//   normal      : Marsaglia polar method
//   gamma       : Marsaglia & Tsang (2000) squeeze, shape >= 1
//   poisson     : inversion below mean 10, Hormann's PTRD above
//   geometric   : inverse transform floor(-log U / (beta E))
//   negative binomial : gamma-Poisson mixture, law identical to a sum of
//                       independent geometrics

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace bosegas {

struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

class PhiloxEngine {
  public:
    explicit PhiloxEngine(RngStream s)
        : key0_(static_cast<std::uint32_t>(s.seed)),
          key1_(static_cast<std::uint32_t>(s.seed >> 32)),
          ctr2_(static_cast<std::uint32_t>(s.stream)),
          ctr3_(static_cast<std::uint32_t>(s.stream >> 32)) {}

    std::uint32_t next_u32() {
        if (idx_ == 4) {
            gen_block();
            idx_ = 0;
        }
        return out_[idx_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return lo | (hi << 32);
    }

    // uniform on the open interval (0, 1); never returns 0 or 1
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
    }

  private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    void gen_block() {
        std::uint32_t x0 = ctr0_, x1 = ctr1_, x2 = ctr2_, x3 = ctr3_;
        std::uint32_t k0 = key0_, k1 = key1_;
        for (int r = 0; r < 10; ++r) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * x0;
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * x2;
            const std::uint32_t y0 = static_cast<std::uint32_t>(p1 >> 32) ^ x1 ^ k0;
            const std::uint32_t y1 = static_cast<std::uint32_t>(p1);
            const std::uint32_t y2 = static_cast<std::uint32_t>(p0 >> 32) ^ x3 ^ k1;
            const std::uint32_t y3 = static_cast<std::uint32_t>(p0);
            x0 = y0; x1 = y1; x2 = y2; x3 = y3;
            k0 += kWeyl0; k1 += kWeyl1;
        }
        out_[0] = x0; out_[1] = x1; out_[2] = x2; out_[3] = x3;
        if (++ctr0_ == 0) ++ctr1_;  // 64-bit block counter
    }

    std::uint32_t key0_, key1_;
    std::uint32_t ctr0_ = 0, ctr1_ = 0, ctr2_, ctr3_;
    std::uint32_t out_[4] = {};
    int idx_ = 4;
};

namespace detail {

// 256-layer ziggurat tables for the unit exponential.
struct ExpZiggurat {
    static constexpr double kTailStart = 7.69711747013104972;
    static constexpr double kLayerArea = 0.0039496598225815572;

    double extent[256];   // horizontal extent of each strip, scaled by 2^-53
    double inner[256];    // fast-accept edge
    double f_outer[256];  // density at the outer edge (bottom of strip)
    double f_inner[256];  // density at the inner edge (top of strip)

    ExpZiggurat() {
        double x_prev = kTailStart;
        extent[0] = kLayerArea / std::exp(-kTailStart) * 0x1p-53;
        inner[0] = kTailStart;
        f_outer[0] = 0.0;
        f_inner[0] = std::exp(-kTailStart);
        for (int s = 1; s < 256; ++s) {
            const double x =
                (s == 255) ? 0.0
                           : -std::log(std::exp(-x_prev) + kLayerArea / x_prev);
            extent[s] = x_prev * 0x1p-53;
            inner[s] = x;
            f_outer[s] = std::exp(-x_prev);
            f_inner[s] = std::exp(-x);
            x_prev = x;
        }
    }
};

}  // namespace detail

inline double sample_exponential(PhiloxEngine& rng) {
    static const detail::ExpZiggurat z;
    for (;;) {
        const std::uint64_t u = rng.next_u64();
        const int s = static_cast<int>(u & 255);
        const double x = static_cast<double>(u >> 11) * z.extent[s];
        if (x < z.inner[s]) return x;
        if (s == 0) return detail::ExpZiggurat::kTailStart - std::log(rng.uniform());
        const double y = z.f_outer[s] + rng.uniform() * (z.f_inner[s] - z.f_outer[s]);
        if (y < std::exp(-x)) return x;
    }
}

inline double sample_normal(PhiloxEngine& rng) {
    for (;;) {
        const double a = 2.0 * rng.uniform() - 1.0;
        const double b = 2.0 * rng.uniform() - 1.0;
        const double r2 = a * a + b * b;
        if (r2 < 1.0 && r2 > 0.0)
            return a * std::sqrt(-2.0 * std::log(r2) / r2);
    }
}

// Gamma(shape, 1) for shape >= 1.
inline double sample_gamma(double shape, PhiloxEngine& rng) {
    if (!(shape >= 1.0)) throw std::invalid_argument("sample_gamma: shape must be >= 1");
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = sample_normal(rng);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

namespace detail {

inline std::int64_t poisson_inversion(double mean, PhiloxEngine& rng) {
    double p = std::exp(-mean);
    double s = p;
    const double u = rng.uniform();
    std::int64_t k = 0;
    while (u > s) {
        ++k;
        p *= mean / static_cast<double>(k);
        s += p;
    }
    return k;
}

// Hormann (1993), transformed rejection with decomposition, exact for mean >= 10.
inline std::int64_t poisson_ptrd(double mean, PhiloxEngine& rng) {
    const double smu = std::sqrt(mean);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = rng.uniform() - 0.5;
        const double v = rng.uniform();
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        const double k = kf;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            -mean + k * std::log(mean) - std::lgamma(k + 1.0))
            return static_cast<std::int64_t>(kf);
    }
}

}  // namespace detail

inline std::int64_t sample_poisson(double mean, PhiloxEngine& rng) {
    if (!(mean >= 0.0)) throw std::invalid_argument("sample_poisson: mean must be >= 0");
    if (mean == 0.0) return 0;
    return mean < 10.0 ? detail::poisson_inversion(mean, rng)
                       : detail::poisson_ptrd(mean, rng);
}

// Occupation of one state: P(k) = e^{-beta E k} (1 - e^{-beta E}).
inline std::int64_t sample_geometric(double beta, double energy, PhiloxEngine& rng) {
    if (!(energy > 0.0))
        throw std::domain_error("sample_geometric: only excited levels (energy > 0)");
    if (!(beta > 0.0)) throw std::domain_error("sample_geometric: beta must be > 0");
    return static_cast<std::int64_t>(std::floor(-std::log(rng.uniform()) / (beta * energy)));
}

// Sum of `count` independent geometrics with parameter 1 - e^{-beta E},
// drawn as one gamma-Poisson mixture: lam ~ Gamma(count, 1/(e^{beta E}-1)),
// then Poisson(lam).  Same law, O(1) instead of O(count).
inline std::int64_t sample_geometric_sum(std::int64_t count, double beta, double energy,
                                         PhiloxEngine& rng) {
    if (!(energy > 0.0))
        throw std::domain_error("sample_geometric_sum: only excited levels (energy > 0)");
    const double theta = 1.0 / std::expm1(beta * energy);
    const double lam = sample_gamma(static_cast<double>(count), rng) * theta;
    return sample_poisson(lam, rng);
}

}  // namespace bosegas
