// field_states.hpp — initial photon-number distributions of the cavity
// field: binomial states, their number/vacuum limits, and Poissonian
// (coherent) distributions.

#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "cpbspec/errors.hpp"

namespace cpbspec {

enum class FieldKind { vacuum, binomial, coherent, number, custom };

inline const char* to_string(FieldKind k) {
    switch (k) {
    case FieldKind::vacuum: return "vacuum";
    case FieldKind::binomial: return "binomial";
    case FieldKind::coherent: return "coherent";
    case FieldKind::number: return "number";
    case FieldKind::custom: return "custom";
    }
    return "unknown";
}

// How a distribution was constructed. Fields are meaningful per kind:
// binomial uses (eta, m), coherent uses (alpha_sq, tail_epsilon),
// number uses m.
struct Provenance {
    FieldKind kind = FieldKind::vacuum;
    double eta = 0.0;
    int m = 0;
    double alpha_sq = 0.0;
    double tail_epsilon = 0.0;
};

// Real non-negative number-state amplitudes beta_0..beta_N with unit
// two-norm. Only beta_n^2 enters any observable here, so a global (or
// per-component) phase carries no information and is not represented.
class PhotonDistribution {
public:
    PhotonDistribution(std::vector<double> amplitudes, Provenance prov)
        : amps_(std::move(amplitudes)), prov_(prov) {
        if (amps_.empty())
            throw domain_error("PhotonDistribution: no amplitudes");
    }

    const std::vector<double>& amplitudes() const { return amps_; }
    const Provenance& provenance() const { return prov_; }
    std::size_t size() const { return amps_.size(); }

    // beta_n, zero outside the stored range.
    double amplitude(int n) const {
        if (n < 0 || static_cast<std::size_t>(n) >= amps_.size()) return 0.0;
        return amps_[static_cast<std::size_t>(n)];
    }

    // beta_n^2
    double prob(int n) const {
        const double a = amplitude(n);
        return a * a;
    }

    int min_support() const {
        for (std::size_t i = 0; i < amps_.size(); ++i)
            if (amps_[i] > 0.0) return static_cast<int>(i);
        return 0;
    }

    int max_support() const {
        for (std::size_t i = amps_.size(); i-- > 0;)
            if (amps_[i] > 0.0) return static_cast<int>(i);
        return 0;
    }

    double mean_photons() const {
        long double m = 0.0L;
        for (std::size_t n = 0; n < amps_.size(); ++n)
            m += static_cast<long double>(n) * amps_[n] * amps_[n];
        return static_cast<double>(m);
    }

    double variance() const {
        long double m1 = 0.0L, m2 = 0.0L;
        for (std::size_t n = 0; n < amps_.size(); ++n) {
            const long double p = static_cast<long double>(amps_[n]) * amps_[n];
            m1 += static_cast<long double>(n) * p;
            m2 += static_cast<long double>(n) * n * p;
        }
        return static_cast<double>(m2 - m1 * m1);
    }

private:
    std::vector<double> amps_;
    Provenance prov_;
};

namespace detail {

inline double log_choose(int m, int n) {
    return std::lgamma(m + 1.0) - std::lgamma(n + 1.0) - std::lgamma(m - n + 1.0);
}

} // namespace detail

inline PhotonDistribution vacuum() {
    return PhotonDistribution({1.0}, {FieldKind::vacuum, 0.0, 0, 0.0, 0.0});
}

inline PhotonDistribution number_state(int m) {
    if (m < 0)
        throw domain_error("number_state: M must be >= 0");
    std::vector<double> amps(static_cast<std::size_t>(m) + 1, 0.0);
    amps.back() = 1.0;
    return PhotonDistribution(std::move(amps), {FieldKind::number, 0.0, m, 0.0, 0.0});
}

// Binomial state: beta_n = sqrt( C(M,n) eta^n (1-eta)^(M-n) ). Computed in
// log space so that M up to ~1e6 stays finite; eta in {0, 1} degenerates
// bit-exactly to the vacuum / number-state amplitudes.
inline PhotonDistribution binomial_distribution(double eta, int m) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw domain_error("binomial_distribution: eta must lie in [0, 1]");
    if (m < 1)
        throw domain_error("binomial_distribution: M must be >= 1");
    std::vector<double> amps(static_cast<std::size_t>(m) + 1, 0.0);
    if (eta == 0.0) {
        amps.front() = 1.0;
    } else if (eta == 1.0) {
        amps.back() = 1.0;
    } else {
        const double log_eta = std::log(eta);
        const double log_comp = std::log1p(-eta);
        std::vector<double> pmf(amps.size());
        long double norm = 0.0L;
        for (int n = 0; n <= m; ++n) {
            const double lp = detail::log_choose(m, n) + n * log_eta + (m - n) * log_comp;
            pmf[static_cast<std::size_t>(n)] = std::exp(lp);
            norm += pmf[static_cast<std::size_t>(n)];
        }
        for (std::size_t n = 0; n < amps.size(); ++n)
            amps[n] = std::sqrt(static_cast<double>(pmf[n] / norm));
    }
    return PhotonDistribution(std::move(amps), {FieldKind::binomial, eta, m, 0.0, 0.0});
}

// Poissonian distribution with mean |alpha|^2, truncated at the smallest N
// whose tail mass falls below tail_epsilon, then renormalized.
inline PhotonDistribution coherent_distribution(double alpha_sq, double tail_epsilon) {
    if (!(alpha_sq >= 0.0))
        throw domain_error("coherent_distribution: mean photon number must be >= 0");
    if (!(tail_epsilon > 0.0))
        throw domain_error("coherent_distribution: tail_epsilon must be > 0");
    std::vector<double> pmf;
    if (alpha_sq == 0.0) {
        pmf.push_back(1.0);
    } else {
        const double log_mean = std::log(alpha_sq);
        long double cumulative = 0.0L;
        for (int n = 0;; ++n) {
            const double lp = n * log_mean - alpha_sq - std::lgamma(n + 1.0);
            pmf.push_back(std::exp(lp));
            cumulative += pmf.back();
            if (1.0L - cumulative < static_cast<long double>(tail_epsilon)) break;
            if (n > 10'000'000)
                throw domain_error("coherent_distribution: truncation did not converge");
        }
    }
    long double norm = 0.0L;
    for (double p : pmf) norm += p;
    std::vector<double> amps(pmf.size());
    for (std::size_t n = 0; n < pmf.size(); ++n)
        amps[n] = std::sqrt(static_cast<double>(pmf[n] / norm));
    return PhotonDistribution(std::move(amps),
                              {FieldKind::coherent, 0.0, 0, alpha_sq, tail_epsilon});
}

// Arbitrary non-negative amplitude sequence, normalized on construction.
inline PhotonDistribution custom_distribution(std::vector<double> amplitudes) {
    if (amplitudes.empty())
        throw domain_error("custom_distribution: empty amplitude list");
    long double norm = 0.0L;
    for (double a : amplitudes) {
        if (!(a >= 0.0))
            throw domain_error("custom_distribution: amplitudes must be >= 0");
        norm += static_cast<long double>(a) * a;
    }
    if (!(norm > 0.0L))
        throw domain_error("custom_distribution: all amplitudes are zero");
    const double scale = 1.0 / std::sqrt(static_cast<double>(norm));
    for (double& a : amplitudes) a *= scale;
    return PhotonDistribution(std::move(amplitudes), {FieldKind::custom, 0.0, 0, 0.0, 0.0});
}

inline double mean_photons(const PhotonDistribution& d) { return d.mean_photons(); }

} // namespace cpbspec
