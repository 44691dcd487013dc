// dressed.hpp — closed-form dressed-doublet quantities of the coupled
// qubit/cavity model: Rabi splittings, eigenenergies, mixing angles and
// the resulting time-evolution amplitudes.
//
// Conventions. The n-th doublet spans {|n,e>, |n+1,g>}. In that basis the
// Hamiltonian block is
//
//     [ omega (n+1/2) + delta/2       g sqrt(n+1)        ]
//     [ g sqrt(n+1)                   omega (n+1/2) - delta/2 ]
//
// with eigenvalues upsilon_pm = omega (n+1/2) +- mu_n,
// mu_n = sqrt(delta^2/4 + g^2 (n+1)), and eigenvectors
//   |+> = cos(theta) |n,e> + sin(theta) |n+1,g>
//   |-> = sin(theta) |n,e> - cos(theta) |n+1,g>
// where theta_n = atan( (2 mu_n - delta) / (2 g sqrt(n+1)) ) in (0, pi/2).

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <utility>

#include "cpbspec/errors.hpp"
#include "cpbspec/params.hpp"

namespace cpbspec {

namespace detail {
inline void require_photon_index(int n) {
    if (n < 0)
        throw domain_error("photon index must be >= 0");
}
} // namespace detail

// Half the gap of the n-th dressed doublet.
inline double rabi_splitting(const CanonicalParams& p, int n) {
    p.validate();
    detail::require_photon_index(n);
    return std::sqrt(0.25 * p.delta * p.delta + p.g * p.g * (n + 1.0));
}

// (upper, lower) doublet eigenenergies omega (n+1/2) +- mu_n.
inline std::pair<double, double> eigenenergies(const CanonicalParams& p, int n) {
    const double mu = rabi_splitting(p, n);
    const double center = p.omega * (n + 0.5);
    return {center + mu, center - mu};
}

// Bare-to-dressed rotation angle, principal branch. The argument
// 2 mu_n - delta is strictly positive for g > 0, so no branch handling
// is needed; at resonance the angle is exactly pi/4.
inline double mixing_angle(const CanonicalParams& p, int n) {
    p.validate();
    detail::require_photon_index(n);
    if (p.delta == 0.0)
        return std::numbers::pi / 4.0;
    const double mu = rabi_splitting(p, n);
    return std::atan2(2.0 * mu - p.delta, 2.0 * p.g * std::sqrt(n + 1.0));
}

// Per-doublet bundle of the quantities above.
struct DressedLevel {
    int n = 0;
    double mu = 0.0;
    double upsilon_plus = 0.0;
    double upsilon_minus = 0.0;
    double theta = 0.0;
};

inline DressedLevel dressed_level(const CanonicalParams& p, int n) {
    const double mu = rabi_splitting(p, n);
    const double center = p.omega * (n + 0.5);
    return {n, mu, center + mu, center - mu, mixing_angle(p, n)};
}

// Amplitudes of U(t) restricted to the n-th doublet, for a state starting
// in |n,e>:  U(t)|n,e> = a |n,e> + b |n+1,g>.
struct EvolutionAmps {
    std::complex<double> a; // sin^2(theta) e^{-i t upsilon_-} + cos^2(theta) e^{-i t upsilon_+}
    std::complex<double> b; // sin(theta) cos(theta) (e^{-i t upsilon_+} - e^{-i t upsilon_-})
};

inline EvolutionAmps evolution_amps(const CanonicalParams& p, int n, double t) {
    const DressedLevel lv = dressed_level(p, n);
    const std::complex<double> ep = std::exp(std::complex<double>(0.0, -lv.upsilon_plus * t));
    const std::complex<double> em = std::exp(std::complex<double>(0.0, -lv.upsilon_minus * t));
    const double s = std::sin(lv.theta);
    const double c = std::cos(lv.theta);
    return {s * s * em + c * c * ep, s * c * (ep - em)};
}

inline std::complex<double> evolution_amp_a(const CanonicalParams& p, int n, double t) {
    return evolution_amps(p, n, t).a;
}

inline std::complex<double> evolution_amp_b(const CanonicalParams& p, int n, double t) {
    return evolution_amps(p, n, t).b;
}

} // namespace cpbspec
