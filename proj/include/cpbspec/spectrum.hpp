// spectrum.hpp — catalog of Lorentzian transition lines between dressed
// doublets and evaluation of the detector-windowed spectrum S(nu) on a
// frequency grid.
//
// Each line is one term  weight * gamma / (gamma^2 + (nu - center)^2).
// For a distribution beta_n and transition order k (= 1 unless explicitly
// marked experimental), the catalog holds:
//
//   n = 0 doublet ("n0" lines), two entries, and
//   n >= k, four entries per n at centers upsilon_n^a - upsilon_{n-k}^b.
//
// Two weight-to-branch assignments are supported. "paper" keeps the
// historical printed pairing (n0 lines sit at upsilon_0^{+-} themselves;
// sin^4(theta_n) weights attach to the a=+ branch). "derived" follows the
// evolution amplitudes: sin^4(theta_n) attaches to a=-, sin^2(theta_{n-k})
// to b=+, and the n0 doublet is shifted by the ground-level energy E_J/2
// so it lands in the emission band. The time-domain oracle reproduces the
// "derived" assignment; both are kept so the difference stays observable.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "cpbspec/dressed.hpp"
#include "cpbspec/errors.hpp"
#include "cpbspec/field_states.hpp"
#include "cpbspec/params.hpp"

namespace cpbspec {

enum class WeightPairing { paper, derived };

inline const char* to_string(WeightPairing p) {
    return p == WeightPairing::paper ? "paper" : "derived";
}

// Branch label of a line: (a, b) = branch of the upper doublet n and of
// the lower doublet n-k; n0 lines carry the branch of the bare doublet.
enum class Branch { plus_plus, plus_minus, minus_plus, minus_minus, n0_plus, n0_minus };

inline const char* to_string(Branch b) {
    switch (b) {
    case Branch::plus_plus: return "+/+";
    case Branch::plus_minus: return "+/-";
    case Branch::minus_plus: return "-/+";
    case Branch::minus_minus: return "-/-";
    case Branch::n0_plus: return "n0+";
    case Branch::n0_minus: return "n0-";
    }
    return "?";
}

struct TransitionLine {
    double center = 0.0; // angular frequency
    double weight = 0.0; // dimensionless, in [0, 1]
    int source_n = 0;    // photon index of the originating doublet
    Branch branch = Branch::plus_plus;
};

struct SpectrumConfig {
    double gamma = 0.0;            // detector width, > 0
    std::vector<double> nu_grid;   // strictly increasing spectrum frequencies
    int transition_order = 1;      // k; values != 1 need the experimental flag
    WeightPairing pairing = WeightPairing::paper;
    bool allow_experimental_order = false;
    double weight_floor = 1e-14;   // lines below this weight are dropped

    void validate() const {
        if (!(gamma > 0.0))
            throw domain_error("SpectrumConfig: gamma must be > 0");
        if (nu_grid.empty())
            throw domain_error("SpectrumConfig: empty frequency grid");
        for (std::size_t i = 1; i < nu_grid.size(); ++i)
            if (!(nu_grid[i] > nu_grid[i - 1]))
                throw domain_error("SpectrumConfig: nu_grid must be strictly increasing");
        if (transition_order < 1)
            throw domain_error("SpectrumConfig: transition_order must be >= 1");
        if (transition_order != 1 && !allow_experimental_order)
            throw domain_error("SpectrumConfig: transition_order != 1 requires the "
                               "experimental flag");
        if (!(weight_floor >= 0.0))
            throw domain_error("SpectrumConfig: weight_floor must be >= 0");
    }
};

// Uniform grid of `points` frequencies spanning offsets (nu-omega)/g in
// [min_offset, max_offset]. Defaults resolve a gamma = 0.1 g line with
// ~16 samples per FWHM over the usual display window.
inline std::vector<double> default_nu_grid(const CanonicalParams& p, double min_offset = -12.0,
                                           double max_offset = 12.0, int points = 2001) {
    p.validate();
    if (points < 1 || !(max_offset > min_offset))
        throw domain_error("default_nu_grid: bad grid request");
    std::vector<double> grid(static_cast<std::size_t>(points));
    if (points == 1) {
        grid[0] = p.omega + p.g * min_offset;
        return grid;
    }
    const double step = (max_offset - min_offset) / (points - 1);
    for (int i = 0; i < points; ++i)
        grid[static_cast<std::size_t>(i)] = p.omega + p.g * (min_offset + i * step);
    return grid;
}

// Build the line catalog for distribution d. Lines with weight below
// c.weight_floor (after multiplication by beta_n^2) are omitted.
inline std::vector<TransitionLine> transition_lines(const CanonicalParams& p,
                                                    const PhotonDistribution& d,
                                                    const SpectrumConfig& c) {
    p.validate();
    c.validate();
    const int k = c.transition_order;
    if (c.pairing == WeightPairing::derived && k != 1)
        throw domain_error("transition_lines: derived pairing is defined for "
                           "transition_order 1 only");

    const int n_top = d.max_support();
    std::vector<DressedLevel> levels(static_cast<std::size_t>(n_top) + 1);
    for (int n = 0; n <= n_top; ++n)
        levels[static_cast<std::size_t>(n)] = dressed_level(p, n);

    std::vector<TransitionLine> lines;
    lines.reserve(4 * static_cast<std::size_t>(n_top) + 2);

    const double p0 = d.prob(0);
    if (k == 1 || c.pairing == WeightPairing::paper) {
        // n = 0 doublet. "paper": lines at upsilon_0^{+-} with sin^4/cos^4
        // weights. "derived": same weights swapped across branches and both
        // centers shifted by the ground-level energy (omega + delta)/2.
        const DressedLevel& l0 = levels[0];
        const double s2 = std::sin(l0.theta) * std::sin(l0.theta);
        const double c2 = 1.0 - s2;
        if (c.pairing == WeightPairing::paper) {
            const double w_plus = p0 * s2 * s2;
            const double w_minus = p0 * c2 * c2;
            if (w_plus > c.weight_floor)
                lines.push_back({l0.upsilon_plus, w_plus, 0, Branch::n0_plus});
            if (w_minus > c.weight_floor)
                lines.push_back({l0.upsilon_minus, w_minus, 0, Branch::n0_minus});
        } else {
            const double ground_shift = 0.5 * (p.omega + p.delta);
            const double w_plus = p0 * c2 * c2;
            const double w_minus = p0 * s2 * s2;
            if (w_plus > c.weight_floor)
                lines.push_back({l0.upsilon_plus + ground_shift, w_plus, 0, Branch::n0_plus});
            if (w_minus > c.weight_floor)
                lines.push_back({l0.upsilon_minus + ground_shift, w_minus, 0, Branch::n0_minus});
        }
    }

    for (int n = k; n <= n_top; ++n) {
        const double pn = d.prob(n);
        if (pn <= c.weight_floor) continue;
        const DressedLevel& hi = levels[static_cast<std::size_t>(n)];
        const DressedLevel& lo = levels[static_cast<std::size_t>(n - k)];
        const double s2n = std::sin(hi.theta) * std::sin(hi.theta);
        const double c2n = 1.0 - s2n;
        const double s2m = std::sin(lo.theta) * std::sin(lo.theta);
        const double c2m = 1.0 - s2m;

        double w_pp, w_pm, w_mp, w_mm;
        if (c.pairing == WeightPairing::paper) {
            w_pp = pn * s2n * s2n * c2m;
            w_pm = pn * s2n * s2n * s2m;
            w_mp = pn * c2n * c2n * c2m;
            w_mm = pn * c2n * c2n * s2m;
        } else {
            w_pp = pn * c2n * c2n * s2m;
            w_pm = pn * c2n * c2n * c2m;
            w_mp = pn * s2n * s2n * s2m;
            w_mm = pn * s2n * s2n * c2m;
        }
        const double c_pp = hi.upsilon_plus - lo.upsilon_plus;
        const double c_pm = hi.upsilon_plus - lo.upsilon_minus;
        const double c_mp = hi.upsilon_minus - lo.upsilon_plus;
        const double c_mm = hi.upsilon_minus - lo.upsilon_minus;
        if (w_pp > c.weight_floor) lines.push_back({c_pp, w_pp, n, Branch::plus_plus});
        if (w_pm > c.weight_floor) lines.push_back({c_pm, w_pm, n, Branch::plus_minus});
        if (w_mp > c.weight_floor) lines.push_back({c_mp, w_mp, n, Branch::minus_plus});
        if (w_mm > c.weight_floor) lines.push_back({c_mm, w_mm, n, Branch::minus_minus});
    }

    if (lines.empty())
        throw domain_error("transition_lines: distribution produced no lines");
    return lines;
}

// S(nu) = sum over lines of weight * gamma / (gamma^2 + (nu - center)^2).
inline double evaluate(std::span<const TransitionLine> lines, double gamma, double nu) {
    if (!(gamma > 0.0))
        throw domain_error("evaluate: gamma must be > 0");
    double s = 0.0;
    for (const TransitionLine& line : lines) {
        const double d = nu - line.center;
        s += line.weight * gamma / (gamma * gamma + d * d);
    }
    return s;
}

// Analytic integral of S over the whole line: pi * sum of weights.
inline double integrated_power(std::span<const TransitionLine> lines, double gamma) {
    if (!(gamma > 0.0))
        throw domain_error("integrated_power: gamma must be > 0");
    double w = 0.0;
    for (const TransitionLine& line : lines) w += line.weight;
    return std::numbers::pi * w;
}

// Summary of the input field attached to serialized results.
struct FieldSummary {
    Provenance provenance;
    double mean_photons = 0.0;
    int min_support = 0;
    int max_support = 0;

    static FieldSummary from(const PhotonDistribution& d) {
        return {d.provenance(), d.mean_photons(), d.min_support(), d.max_support()};
    }
};

struct SpectrumSeries {
    CanonicalParams params;
    SpectrumConfig config;
    FieldSummary field;
    std::vector<TransitionLine> lines; // empty for oracle-produced series
    std::vector<double> values;        // S at every grid frequency
    std::string source;                // "analytic" or "oracle"
};

// Evaluate the catalog on the configured grid. Each sample depends only on
// its own frequency, so the grid may be split across any number of threads
// without changing a single bit of the result (threads = 0 picks the
// hardware concurrency).
inline SpectrumSeries evaluate_grid(const CanonicalParams& p, const PhotonDistribution& d,
                                    const SpectrumConfig& c, int threads = 0) {
    std::vector<TransitionLine> lines = transition_lines(p, d, c);
    std::vector<double> values(c.nu_grid.size());

    unsigned n_threads = threads > 0 ? static_cast<unsigned>(threads)
                                     : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(values.size()));

    auto worker = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            values[i] = evaluate(lines, c.gamma, c.nu_grid[i]);
    };
    if (n_threads <= 1) {
        worker(0, values.size());
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        const std::size_t chunk = (values.size() + n_threads - 1) / n_threads;
        for (unsigned t = 0; t < n_threads; ++t) {
            const std::size_t lo = t * chunk;
            const std::size_t hi = std::min(values.size(), lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(worker, lo, hi);
        }
        for (std::thread& th : pool) th.join();
    }

    return {p, c, FieldSummary::from(d), std::move(lines), std::move(values), "analytic"};
}

struct Peak {
    double nu = 0.0;
    double height = 0.0;
};

struct PeakSearchResult {
    std::vector<Peak> peaks;      // strict local maxima, tallest first
    bool grid_too_coarse = false; // grid spacing exceeds gamma/2 somewhere
};

inline PeakSearchResult find_peaks(const SpectrumSeries& s) {
    const std::vector<double>& grid = s.config.nu_grid;
    const std::vector<double>& v = s.values;
    if (v.size() < 3)
        throw domain_error("find_peaks: need at least 3 samples");

    PeakSearchResult result;
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] - grid[i - 1] > 0.5 * s.config.gamma)
            result.grid_too_coarse = true;
    for (std::size_t i = 1; i + 1 < v.size(); ++i)
        if (v[i] > v[i - 1] && v[i] > v[i + 1])
            result.peaks.push_back({grid[i], v[i]});
    std::stable_sort(result.peaks.begin(), result.peaks.end(),
                     [](const Peak& a, const Peak& b) { return a.height > b.height; });
    return result;
}

} // namespace cpbspec
