// spectrum.hpp — single-particle energy spectra: construction, counting,
// and the eigenvalue-counting (Weyl) parameters (L, alpha).
//
// An EnergySpectrum stores the distinct energies up to a cutoff together
// with their multiplicities.  The ground state is shifted to zero at
// construction; every downstream formula works with the shifted energies.
// Multiplicities are stored explicitly, so a 3D harmonic trap to cutoff
// 600 is 600 levels rather than ~3.6e7 repeated ones.
//
// Built-in traps (energies before the shift, all indices >= 0):
//   harmonic-1d : C j
//   harmonic-2d : C (i + j),            level s has multiplicity s + 1
//   harmonic-3d : C (i + j + k),        level s has multiplicity (s+1)(s+2)/2
//   box-2d      : C (i^2 + j^2)         multiplicities by exact lattice count
//   box-3d      : C (i^2 + j^2 + k^2)   multiplicities by exact lattice count

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bosegas {

enum class TrapKind { Harmonic1D, Harmonic2D, Harmonic3D, Box2D, Box3D, Custom };

inline const char* to_string(TrapKind k) {
    switch (k) {
        case TrapKind::Harmonic1D: return "harmonic-1d";
        case TrapKind::Harmonic2D: return "harmonic-2d";
        case TrapKind::Harmonic3D: return "harmonic-3d";
        case TrapKind::Box2D: return "box-2d";
        case TrapKind::Box3D: return "box-3d";
        case TrapKind::Custom: return "custom";
    }
    return "?";
}

inline TrapKind trap_kind_from_string(const std::string& s) {
    if (s == "harmonic-1d") return TrapKind::Harmonic1D;
    if (s == "harmonic-2d") return TrapKind::Harmonic2D;
    if (s == "harmonic-3d") return TrapKind::Harmonic3D;
    if (s == "box-2d") return TrapKind::Box2D;
    if (s == "box-3d") return TrapKind::Box3D;
    if (s == "custom") return TrapKind::Custom;
    throw std::invalid_argument("unknown trap kind: " + s);
}

// Parameters of the counting law  #{j : E_j <= lambda} ~ L lambda^alpha.
struct WeylParams {
    double L;
    double alpha;

    WeylParams(double L_, double alpha_) : L(L_), alpha(alpha_) {
        if (!(L > 0.0)) throw std::invalid_argument("WeylParams: L must be > 0");
        if (!(alpha >= 1.0)) throw std::invalid_argument("WeylParams: alpha must be >= 1");
    }
};

struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

struct SpectrumRangeError : std::runtime_error {
    double required_cutoff;
    SpectrumRangeError(const std::string& what, double required)
        : std::runtime_error(what), required_cutoff(required) {}
};

class EnergySpectrum {
  public:
    struct Level {
        double energy;            // shifted, levels[0].energy == 0
        std::int64_t multiplicity;
    };

    EnergySpectrum(std::vector<Level> levels, TrapKind kind, double scale,
                   double raw_ground_energy, double cutoff)
        : levels_(std::move(levels)),
          kind_(kind),
          scale_(scale),
          raw_ground_energy_(raw_ground_energy),
          cutoff_(cutoff) {
        if (levels_.empty()) throw std::invalid_argument("EnergySpectrum: no levels");
        if (levels_.front().energy != 0.0)
            throw std::invalid_argument("EnergySpectrum: ground level must sit at 0");
        if (levels_.front().multiplicity != 1)
            throw std::invalid_argument("EnergySpectrum: degenerate ground state");
        cum_.resize(levels_.size());
        std::int64_t acc = 0;
        double prev = -1.0;
        for (std::size_t i = 0; i < levels_.size(); ++i) {
            if (!(levels_[i].energy > prev))
                throw std::invalid_argument("EnergySpectrum: energies must strictly increase");
            if (levels_[i].multiplicity < 1)
                throw std::invalid_argument("EnergySpectrum: multiplicities must be >= 1");
            prev = levels_[i].energy;
            acc += levels_[i].multiplicity;
            cum_[i] = acc;
        }
    }

    const std::vector<Level>& levels() const { return levels_; }
    std::size_t level_count() const { return levels_.size(); }
    double energy(std::size_t i) const { return levels_[i].energy; }
    std::int64_t multiplicity(std::size_t i) const { return levels_[i].multiplicity; }
    TrapKind kind() const { return kind_; }
    double scale() const { return scale_; }
    double raw_ground_energy() const { return raw_ground_energy_; }
    double cutoff() const { return cutoff_; }

    // states (multiplicity-weighted) through level index i, ground included
    std::int64_t cumulative_states(std::size_t i) const { return cum_[i]; }
    std::int64_t total_states() const { return cum_.back(); }
    // excited states through level i (level 0 contributes nothing)
    std::int64_t excited_states_through(std::size_t i) const { return cum_[i] - 1; }
    std::int64_t total_excited_states() const { return cum_.back() - 1; }

    // smallest level index i >= 1 such that excited_states_through(i) >= j, j >= 1
    std::size_t level_of_excited_state(std::int64_t j) const {
        auto it = std::lower_bound(cum_.begin(), cum_.end(), j + 1);
        return static_cast<std::size_t>(it - cum_.begin());
    }

    // Lower-bound constant K of E_j >= K j^{1/alpha} over the generated excited
    // states (the minimum is attained at the last state of some level).
    // from_level lets callers restrict to the asymptotic tail of the range.
    double ejbd_constant(double alpha, std::size_t from_level = 1) const {
        double k = std::numeric_limits<double>::infinity();
        for (std::size_t i = std::max<std::size_t>(from_level, 1); i < levels_.size(); ++i) {
            double j = static_cast<double>(excited_states_through(i));
            k = std::min(k, levels_[i].energy / std::pow(j, 1.0 / alpha));
        }
        return k;
    }

  private:
    std::vector<Level> levels_;
    std::vector<std::int64_t> cum_;
    TrapKind kind_;
    double scale_;
    double raw_ground_energy_;
    double cutoff_;
};

// S(lambda) = #{j : E_j <= lambda}, multiplicity-weighted, 0 for lambda < 0.
inline std::int64_t count_levels(const EnergySpectrum& spec, double lambda) {
    if (lambda < 0.0) return 0;
    if (lambda > spec.cutoff() * (1.0 + 1e-12) + 1e-12)
        throw SpectrumRangeError("count_levels: lambda beyond generated cutoff", lambda);
    const auto& lv = spec.levels();
    auto it = std::upper_bound(lv.begin(), lv.end(), lambda,
                               [](double x, const EnergySpectrum::Level& l) { return x < l.energy; });
    if (it == lv.begin()) return 0;
    return spec.cumulative_states(static_cast<std::size_t>(it - lv.begin()) - 1);
}

namespace detail {

inline std::int64_t harmonic_multiplicity(TrapKind kind, std::int64_t s) {
    switch (kind) {
        case TrapKind::Harmonic1D: return 1;
        case TrapKind::Harmonic2D: return s + 1;
        case TrapKind::Harmonic3D: return (s + 1) * (s + 2) / 2;
        default: throw std::logic_error("harmonic_multiplicity: not a harmonic trap");
    }
}

// exact number of lattice points (i, j[, k]) >= 0 with squared norm == s,
// computed for all s <= m by iterating sorted tuples
inline std::vector<std::int64_t> box_counts(int dim, std::int64_t m, std::int64_t point_budget) {
    std::vector<std::int64_t> cnt(static_cast<std::size_t>(m) + 1, 0);
    const std::int64_t r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(m))) + 1;
    std::int64_t points = 0;
    if (dim == 2) {
        for (std::int64_t i = 0; i <= r && i * i <= m; ++i)
            for (std::int64_t j = i; i * i + j * j <= m; ++j) {
                std::int64_t w = (i == j) ? 1 : 2;
                points += w;
                if (points > point_budget)
                    throw CapacityError("box-2d enumeration exceeds lattice point budget");
                cnt[static_cast<std::size_t>(i * i + j * j)] += w;
            }
    } else {
        for (std::int64_t i = 0; i <= r && i * i <= m; ++i)
            for (std::int64_t j = i; i * i + j * j <= m; ++j) {
                const std::int64_t ij = i * i + j * j;
                for (std::int64_t k = j; ij + k * k <= m; ++k) {
                    std::int64_t w = (i == j && j == k) ? 1 : (i == j || j == k) ? 3 : 6;
                    points += w;
                    if (points > point_budget)
                        throw CapacityError("box-3d enumeration exceeds lattice point budget");
                    cnt[static_cast<std::size_t>(ij + k * k)] += w;
                }
            }
    }
    return cnt;
}

}  // namespace detail

// All distinct shifted levels with energy <= energy_cutoff, exact multiplicities.
// level_budget caps the stored level list; point_budget caps box lattice work.
inline EnergySpectrum build_spectrum(TrapKind kind, double scale, double energy_cutoff,
                                     std::int64_t level_budget = 30000000,
                                     std::int64_t point_budget = 100000000) {
    if (!(scale > 0.0)) throw std::invalid_argument("build_spectrum: scale must be > 0");
    if (!(energy_cutoff > 0.0)) throw std::invalid_argument("build_spectrum: cutoff must be > 0");
    const std::int64_t m = static_cast<std::int64_t>(energy_cutoff / scale + 1e-9);
    std::vector<EnergySpectrum::Level> levels;
    switch (kind) {
        case TrapKind::Harmonic1D:
        case TrapKind::Harmonic2D:
        case TrapKind::Harmonic3D: {
            if (m + 1 > level_budget)
                throw CapacityError("build_spectrum: level list exceeds memory budget");
            levels.reserve(static_cast<std::size_t>(m) + 1);
            for (std::int64_t s = 0; s <= m; ++s)
                levels.push_back({s * scale, detail::harmonic_multiplicity(kind, s)});
            break;
        }
        case TrapKind::Box2D:
        case TrapKind::Box3D: {
            if (m + 1 > level_budget)
                throw CapacityError("build_spectrum: level list exceeds memory budget");
            auto cnt = detail::box_counts(kind == TrapKind::Box2D ? 2 : 3, m, point_budget);
            for (std::int64_t s = 0; s <= m; ++s)
                if (cnt[static_cast<std::size_t>(s)] > 0)
                    levels.push_back({s * scale, cnt[static_cast<std::size_t>(s)]});
            break;
        }
        case TrapKind::Custom:
            throw std::invalid_argument("build_spectrum: custom spectra come from files");
    }
    return EnergySpectrum(std::move(levels), kind, scale, 0.0, energy_cutoff);
}

// Rebuild the same built-in trap out to a larger cutoff.
inline EnergySpectrum extend_spectrum(const EnergySpectrum& spec, double new_cutoff) {
    if (spec.kind() == TrapKind::Custom)
        throw SpectrumRangeError("extend_spectrum: custom spectrum cannot be extended",
                                 new_cutoff);
    return build_spectrum(spec.kind(), spec.scale(), new_cutoff);
}

// Closed-form counting constants for the built-in traps, oracle-checked
// against exhaustive counts (see tests).  Two often-quoted alternatives
// differ: for eigenvalues C j the fit of S(lambda) = floor(lambda/C) + 1
// gives L = 1/C (not C), and for the box over non-negative integer triples
// the octant count gives L = (pi/6) C^{-3/2} (not 4pi/3 C^{-3/2}).
inline WeylParams analytic_weyl(TrapKind kind, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("analytic_weyl: scale must be > 0");
    switch (kind) {
        case TrapKind::Harmonic1D: return {1.0 / scale, 1.0};
        case TrapKind::Harmonic2D: return {0.5 / (scale * scale), 2.0};
        case TrapKind::Harmonic3D: return {1.0 / (6.0 * scale * scale * scale), 3.0};
        case TrapKind::Box2D: return {M_PI / (4.0 * scale), 1.0};
        case TrapKind::Box3D: return {M_PI / (6.0 * std::pow(scale, 1.5)), 1.5};
        case TrapKind::Custom: break;
    }
    throw std::invalid_argument("analytic_weyl: unsupported for custom spectra");
}

struct WeylFit {
    WeylParams params;
    double max_log_residual;  // max |log S - (log L + alpha log lambda)| over the grid
};

// Least squares of log S(lambda) against log lambda over the given grid.
inline WeylFit fit_weyl(const EnergySpectrum& spec, const std::vector<double>& grid) {
    if (grid.size() < 4) throw std::invalid_argument("fit_weyl: need at least 4 grid points");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("fit_weyl: grid must be strictly increasing");
    if (!(grid.back() >= 10.0 * grid.front()))
        throw std::invalid_argument("fit_weyl: degenerate grid, need max >= 10 * min");
    std::vector<double> xs, ys;
    xs.reserve(grid.size());
    ys.reserve(grid.size());
    for (double lam : grid) {
        std::int64_t s = count_levels(spec, lam);
        if (s <= 0) throw std::invalid_argument("fit_weyl: S(lambda) = 0 on the grid");
        xs.push_back(std::log(lam));
        ys.push_back(std::log(static_cast<double>(s)));
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) { mx += xs[i]; my += ys[i]; }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    double alpha = sxy / sxx;
    if (alpha < 1.0) alpha = 1.0;  // clip, then refit the intercept
    double icpt = my - alpha * mx;
    double res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        res = std::max(res, std::abs(ys[i] - (icpt + alpha * xs[i])));
    return {WeylParams(std::exp(icpt), alpha), res};
}

// Text format: one "energy multiplicity" pair per line, '#' starts a comment,
// energies non-decreasing.  Duplicate energies are merged, the ground level is
// shifted to zero and must be non-degenerate after merging.
inline EnergySpectrum load_spectrum(std::istream& in) {
    std::vector<EnergySpectrum::Level> raw;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double e, mraw;
        if (!(ls >> e)) {
            std::string rest;
            if (ls.clear(), ls >> rest)
                throw std::invalid_argument("load_spectrum: non-numeric data at line " +
                                            std::to_string(lineno));
            continue;  // blank / comment-only line
        }
        if (!(ls >> mraw))
            throw std::invalid_argument("load_spectrum: missing multiplicity at line " +
                                        std::to_string(lineno));
        std::string trailing;
        if (ls >> trailing)
            throw std::invalid_argument("load_spectrum: trailing data at line " +
                                        std::to_string(lineno));
        if (!(mraw >= 1.0) || mraw != std::floor(mraw) || mraw > 9.0e15)
            throw std::invalid_argument("load_spectrum: multiplicity must be a positive integer"
                                        " at line " + std::to_string(lineno));
        if (!raw.empty() && e < raw.back().energy)
            throw std::invalid_argument("load_spectrum: energies must be non-decreasing"
                                        " at line " + std::to_string(lineno));
        if (!raw.empty() && e == raw.back().energy)
            raw.back().multiplicity += static_cast<std::int64_t>(mraw);
        else
            raw.push_back({e, static_cast<std::int64_t>(mraw)});
    }
    if (raw.empty()) throw std::invalid_argument("load_spectrum: empty file");
    const double ground = raw.front().energy;
    if (raw.front().multiplicity != 1)
        throw std::invalid_argument("load_spectrum: degenerate ground state");
    for (auto& l : raw) l.energy -= ground;
    const double cutoff = raw.back().energy;
    return EnergySpectrum(std::move(raw), TrapKind::Custom, 1.0, ground,
                          cutoff > 0.0 ? cutoff : 1.0);
}

inline EnergySpectrum load_spectrum_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_spectrum: cannot open " + path);
    return load_spectrum(f);
}

}  // namespace bosegas
