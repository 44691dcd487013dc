// oracle.hpp — brute-force verification path. Builds the truncated
// qubit/cavity Hamiltonian, diagonalizes it numerically, propagates the
// dipole correlation exactly through the eigenbasis, and Fourier-transforms
// the time-averaged correlation with a Lorentzian detector window.
//
// Everything here is deliberately independent of the closed-form catalog in
// spectrum.hpp: dressed energies and weights never enter; only the matrix
// model does.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cpbspec/errors.hpp"
#include "cpbspec/field_states.hpp"
#include "cpbspec/params.hpp"
#include "cpbspec/spectrum.hpp"

namespace cpbspec {

// Truncated model over the basis {|n,g>, |n,e>}, n = 0..n_max, with
// index(n, s) = 2n + s (s = 0 ground, 1 excited). In the rotating-wave
// form the Hamiltonian is real symmetric and couples only the pairs
// {|n,e>, |n+1,g>}; |0,g> stays uncoupled.
//
//   <n,s|H|n,s>         = n omega -+ E_J / 2      (E_J = omega + delta)
//   <n+1,g|H|n,e>       = g sqrt(n+1)
//
// The raw constructor accepts g = 0 so the decoupled limit stays testable;
// CanonicalParams itself requires g > 0.
class TruncatedModel {
public:
    TruncatedModel(double omega, double delta, double g, int n_max)
        : omega_(omega), delta_(delta), g_(g), n_max_(n_max) {
        if (!(omega > 0.0))
            throw domain_error("TruncatedModel: omega must be > 0");
        if (!(g >= 0.0))
            throw domain_error("TruncatedModel: coupling must be >= 0");
        if (n_max < 1)
            throw domain_error("TruncatedModel: n_max must be >= 1");

        const int dim = dimension();
        const double ej = omega_ + delta_;
        hamiltonian_ = Eigen::MatrixXd::Zero(dim, dim);
        sigma_minus_ = Eigen::MatrixXd::Zero(dim, dim);
        for (int n = 0; n <= n_max_; ++n) {
            hamiltonian_(index(n, false), index(n, false)) = n * omega_ - 0.5 * ej;
            hamiltonian_(index(n, true), index(n, true)) = n * omega_ + 0.5 * ej;
            sigma_minus_(index(n, false), index(n, true)) = 1.0;
        }
        for (int n = 0; n + 1 <= n_max_; ++n) {
            const double coupling = g_ * std::sqrt(n + 1.0);
            hamiltonian_(index(n + 1, false), index(n, true)) = coupling;
            hamiltonian_(index(n, true), index(n + 1, false)) = coupling;
        }

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian_);
        if (solver.info() != Eigen::Success)
            throw domain_error("TruncatedModel: eigendecomposition failed");
        eigenvalues_ = solver.eigenvalues();
        eigenvectors_ = solver.eigenvectors();
        sigma_minus_eig_ = eigenvectors_.transpose() * sigma_minus_ * eigenvectors_;
    }

    TruncatedModel(const CanonicalParams& p, int n_max)
        : TruncatedModel((p.validate(), p.omega), p.delta, p.g, n_max) {}

    static int index(int n, bool excited) { return 2 * n + (excited ? 1 : 0); }

    int n_max() const { return n_max_; }
    int dimension() const { return 2 * (n_max_ + 1); }
    double omega() const { return omega_; }
    double delta() const { return delta_; }
    double coupling() const { return g_; }
    const Eigen::MatrixXd& hamiltonian() const { return hamiltonian_; }
    const Eigen::MatrixXd& sigma_minus() const { return sigma_minus_; }
    Eigen::MatrixXd sigma_plus() const { return sigma_minus_.transpose(); }
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
    const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }
    const Eigen::MatrixXd& sigma_minus_eigenbasis() const { return sigma_minus_eig_; }

    // 2x2 doublet block {|n,e>, |n+1,g>}, sliced from the stored matrix.
    Eigen::Matrix2d block(int n) const {
        if (n < 0 || n + 1 > n_max_)
            throw domain_error("TruncatedModel::block: doublet outside cutoff");
        Eigen::Matrix2d b;
        const int ie = index(n, true);
        const int ig = index(n + 1, false);
        b << hamiltonian_(ie, ie), hamiltonian_(ie, ig),
             hamiltonian_(ig, ie), hamiltonian_(ig, ig);
        return b;
    }

    // Initial product state sum_n beta_n |n,e> in the bare basis.
    Eigen::VectorXd initial_state(const PhotonDistribution& d) const {
        if (d.max_support() > n_max_ - 1)
            throw cutoff_error("TruncatedModel: distribution support " +
                               std::to_string(d.max_support()) +
                               " exceeds cutoff n_max - 1 = " + std::to_string(n_max_ - 1));
        Eigen::VectorXd psi = Eigen::VectorXd::Zero(dimension());
        for (int n = 0; n <= d.max_support(); ++n)
            psi(index(n, true)) = d.amplitude(n);
        return psi;
    }

private:
    double omega_, delta_, g_;
    int n_max_;
    Eigen::MatrixXd hamiltonian_;
    Eigen::MatrixXd sigma_minus_;
    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXd eigenvectors_;
    Eigen::MatrixXd sigma_minus_eig_; // Q^T sigma_- Q
};

inline TruncatedModel build_truncated_model(const CanonicalParams& p, int n_max) {
    return TruncatedModel(p, n_max);
}

// Numerically diagonalized doublet block, eigenvalues ascending.
struct BlockEigensystem {
    double lower = 0.0;
    double upper = 0.0;
    Eigen::Vector2d lower_vec; // in the {|n,e>, |n+1,g>} basis
    Eigen::Vector2d upper_vec;
};

inline BlockEigensystem block_eigensystem(const TruncatedModel& m, int n) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(m.block(n));
    if (solver.info() != Eigen::Success)
        throw domain_error("block_eigensystem: eigensolver failed");
    return {solver.eigenvalues()(0), solver.eigenvalues()(1),
            solver.eigenvectors().col(0), solver.eigenvectors().col(1)};
}

// Smallest cutoff that comfortably contains the distribution: at least
// support + 1 (each |n,e> needs its |n+1,g> partner), at least the mean
// plus eight standard deviations, and never below 16.
inline int recommended_n_max(const PhotonDistribution& d) {
    const double spread = d.mean_photons() + 8.0 * std::sqrt(std::max(0.0, d.variance()));
    return std::max({16, d.max_support() + 1, static_cast<int>(std::ceil(spread)) + 1});
}

namespace detail {

inline Eigen::VectorXcd phase_vector(const Eigen::VectorXd& eigenvalues, double t) {
    Eigen::VectorXcd e(eigenvalues.size());
    for (Eigen::Index j = 0; j < eigenvalues.size(); ++j)
        e(j) = std::exp(std::complex<double>(0.0, -eigenvalues(j) * t));
    return e;
}

} // namespace detail

// <psi0| U+(t+tau) sigma_+ U(tau) sigma_- U(t) |psi0>, propagated exactly
// through the eigenbasis (no time stepping).
inline std::complex<double> correlation_first_principles(const TruncatedModel& m,
                                                         const PhotonDistribution& d,
                                                         double t, double tau) {
    const Eigen::VectorXd psi0 = m.eigenvectors().transpose() * m.initial_state(d);
    const Eigen::VectorXcd et = detail::phase_vector(m.eigenvalues(), t);
    const Eigen::VectorXcd etau = detail::phase_vector(m.eigenvalues(), tau);
    const Eigen::VectorXcd ett = detail::phase_vector(m.eigenvalues(), t + tau);

    const Eigen::VectorXcd u = et.cwiseProduct(psi0.cast<std::complex<double>>());
    const Eigen::VectorXcd v = etau.cwiseProduct(m.sigma_minus_eigenbasis() * u);
    const Eigen::VectorXcd w = m.sigma_minus_eigenbasis().transpose() * v;
    const Eigen::VectorXcd bra = ett.cwiseProduct(psi0.cast<std::complex<double>>());
    return bra.dot(w); // Eigen's dot conjugates the left operand
}

// Literal product form of the correlation built from the closed-form
// evolution amplitudes: sum_n beta_n^2 A(n,t) A(n-k,tau) A*(n,t-tau).
// A negative first index denotes the uncoupled ground level, whose
// amplitude is taken as the bare phase e^{-i omega (n+1/2) tau}; this
// convention is required to evaluate the product at all and is kept
// deliberately visible (it does NOT reproduce the first-principles path,
// see max_correlation_discrepancy).
inline std::complex<double> correlation_from_amplitudes(const CanonicalParams& p,
                                                        const PhotonDistribution& d,
                                                        double t, double tau, int k = 1) {
    p.validate();
    if (k < 1)
        throw domain_error("correlation_from_amplitudes: k must be >= 1");
    auto amp = [&](int n, double time) -> std::complex<double> {
        if (n < 0)
            return std::exp(std::complex<double>(0.0, -p.omega * (n + 0.5) * time));
        return evolution_amp_a(p, n, time);
    };
    std::complex<double> acc{0.0, 0.0};
    for (int n = 0; n <= d.max_support(); ++n) {
        const double pn = d.prob(n);
        if (pn == 0.0) continue;
        acc += pn * amp(n, t) * amp(n - k, tau) * std::conj(amp(n, t - tau));
    }
    return acc;
}

struct CorrelationSample {
    double t = 0.0;
    double tau = 0.0;
    std::complex<double> value;
};

// Largest pointwise gap between the two correlation routes over a uniform
// (t, tau) grid. Reported, never asserted: the printed product form is not
// expected to coincide with the exact propagation.
inline double max_correlation_discrepancy(const TruncatedModel& m, const CanonicalParams& p,
                                          const PhotonDistribution& d, double t_max,
                                          double tau_max, int n_t, int n_tau, int k = 1) {
    if (n_t < 1 || n_tau < 1)
        throw domain_error("max_correlation_discrepancy: need at least one sample per axis");
    double worst = 0.0;
    for (int i = 0; i <= n_t; ++i) {
        const double t = t_max * i / n_t;
        for (int j = 0; j <= n_tau; ++j) {
            const double tau = tau_max * j / n_tau;
            const std::complex<double> a = correlation_first_principles(m, d, t, tau);
            const std::complex<double> b = correlation_from_amplitudes(p, d, t, tau, k);
            worst = std::max(worst, std::abs(a - b));
        }
    }
    return worst;
}

struct OracleSettings {
    double t_avg = 0.0;   // averaging window for the first time argument
    double tau_max = 0.0; // upper limit of the detector integral
    int n_t = 2048;       // Simpson intervals over t (must be even)
    int n_tau = 2048;     // Simpson intervals over tau (must be even)
    bool strict = true;   // enforce the resolution bounds below
};

// Defaults: tau_max = 8/gamma (detector damping e^-8), t_avg = 50 periods
// of the slowest doublet beat present in the distribution.
inline OracleSettings default_oracle_settings(const CanonicalParams& p,
                                              const PhotonDistribution& d, double gamma) {
    p.validate();
    if (!(gamma > 0.0))
        throw domain_error("default_oracle_settings: gamma must be > 0");
    const double mu_min = rabi_splitting(p, d.min_support());
    OracleSettings s;
    s.tau_max = 8.0 / gamma;
    s.t_avg = 50.0 * (2.0 * std::numbers::pi / (2.0 * mu_min));
    return s;
}

namespace detail {

// Composite-Simpson coefficient pattern 1,4,2,...,4,1.
inline double simpson_coefficient(int i, int n) {
    if (i == 0 || i == n) return 1.0;
    return (i % 2 == 1) ? 4.0 : 2.0;
}

} // namespace detail

// Numerical realization of the detector-windowed spectrum:
//
//   S(nu) = Re int_0^tau_max dtau e^{-i nu tau - gamma tau}
//             (1/t_avg) int_0^t_avg dt <sigma_+(t+tau) sigma_-(t)>
//
// with composite Simpson quadrature on both axes. The t-average is folded
// into a single matrix G in the eigenbasis, so the cost is
// O((n_t + n_tau) dim^2) rather than O(n_t n_tau dim^2). All reductions run
// in a fixed order; repeated calls are bit-identical.
inline SpectrumSeries time_domain_spectrum(const TruncatedModel& m, const PhotonDistribution& d,
                                           double gamma, std::vector<double> nu_grid,
                                           const OracleSettings& settings) {
    if (!(gamma > 0.0))
        throw domain_error("time_domain_spectrum: gamma must be > 0");
    if (nu_grid.empty())
        throw domain_error("time_domain_spectrum: empty frequency grid");
    if (settings.n_t < 2 || settings.n_t % 2 != 0 || settings.n_tau < 2 || settings.n_tau % 2 != 0)
        throw domain_error("time_domain_spectrum: n_t and n_tau must be even and >= 2");
    if (!(settings.t_avg > 0.0) || !(settings.tau_max > 0.0))
        throw domain_error("time_domain_spectrum: t_avg and tau_max must be > 0");

    const Eigen::VectorXd psi0_bare = m.initial_state(d); // also validates the cutoff
    const Eigen::VectorXd psi0 = m.eigenvectors().transpose() * psi0_bare;
    const Eigen::MatrixXd& sp = m.sigma_minus_eigenbasis(); // sigma_+ = sp^T acts via transpose below
    const Eigen::Index dim = psi0.size();

    // Transition frequencies that can appear in tau (rows j of sigma_+ vs
    // columns k): lambda_j - lambda_k wherever sigma_+ has real weight.
    // Frequencies in t are eigenvalue gaps within the initial state's
    // support; both feed the resolution bounds checked next.
    const double sp_scale = sp.cwiseAbs().maxCoeff();
    double omega_lo = 0.0, omega_hi = 0.0;
    bool any_transition = false;
    for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index l = 0; l < dim; ++l) {
            if (std::abs(sp(l, j)) <= 1e-9 * sp_scale) continue; // sigma_+(j,l) = sp(l,j)
            const double f = m.eigenvalues()(j) - m.eigenvalues()(l);
            if (!any_transition) {
                omega_lo = omega_hi = f;
                any_transition = true;
            } else {
                omega_lo = std::min(omega_lo, f);
                omega_hi = std::max(omega_hi, f);
            }
        }
    }
    // Beats that can survive in the t-average: pairs (j, l) inside the
    // initial state's support that are bridged by sigma_+ sigma_-. The
    // entrywise-absolute product bounds the bridge from above, so no
    // contributing pair is missed.
    double beat_max = 0.0;
    const double psi_scale = psi0.cwiseAbs().maxCoeff();
    const Eigen::MatrixXd bridge = sp.cwiseAbs().transpose() * sp.cwiseAbs();
    const double bridge_scale = bridge.maxCoeff();
    for (Eigen::Index j = 0; j < dim; ++j) {
        if (std::abs(psi0(j)) <= 1e-9 * psi_scale) continue;
        for (Eigen::Index l = 0; l < dim; ++l) {
            if (std::abs(psi0(l)) <= 1e-9 * psi_scale) continue;
            if (bridge(j, l) <= 1e-9 * bridge_scale) continue;
            beat_max = std::max(beat_max, std::abs(m.eigenvalues()(j) - m.eigenvalues()(l)));
        }
    }

    if (settings.strict) {
        const double tau_floor = 8.0 / gamma;
        if (settings.tau_max < tau_floor * (1.0 - 1e-12))
            throw resolution_error("time_domain_spectrum: tau_max = " +
                                   std::to_string(settings.tau_max) + " below the bound 8/gamma = " +
                                   std::to_string(tau_floor));
        const double mu_min = std::sqrt(0.25 * m.delta() * m.delta() +
                                        m.coupling() * m.coupling() * (d.min_support() + 1.0));
        if (mu_min > 0.0) {
            const double t_floor = 4.0 * (2.0 * std::numbers::pi / (2.0 * mu_min));
            if (settings.t_avg < t_floor * (1.0 - 1e-12))
                throw resolution_error("time_domain_spectrum: t_avg = " +
                                       std::to_string(settings.t_avg) +
                                       " below four periods of the slowest beat = " +
                                       std::to_string(t_floor));
        }
        const double dt = settings.t_avg / settings.n_t;
        if (beat_max > 0.0 && dt > 2.0 * std::numbers::pi / (4.0 * beat_max))
            throw resolution_error("time_domain_spectrum: dt = " + std::to_string(dt) +
                                   " exceeds a quarter period of the fastest beat " +
                                   std::to_string(2.0 * std::numbers::pi / beat_max));
        const double dtau = settings.tau_max / settings.n_tau;
        double f_max = 0.0;
        if (any_transition) {
            f_max = std::max(std::abs(omega_hi - nu_grid.front()),
                             std::abs(nu_grid.back() - omega_lo));
        }
        if (f_max > 0.0 && dtau > 2.0 * std::numbers::pi / (4.0 * f_max))
            throw resolution_error("time_domain_spectrum: dtau = " + std::to_string(dtau) +
                                   " exceeds a quarter period of the fastest detuned "
                                   "transition " +
                                   std::to_string(2.0 * std::numbers::pi / f_max));
    }

    // Time-averaged correlation folded into G: with a_j(t) = psi0_j e^{i lambda_j t}
    // and b(t) = sigma_-^eig (E(t) psi0),
    //   G_jl = avg_t a_j(t) b_l(t) sigma_+(j,l)
    // and Cbar(tau) = sum_jl G_jl e^{i (lambda_j - lambda_l) tau}.
    const double dt = settings.t_avg / settings.n_t;
    Eigen::MatrixXcd g_matrix = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = 0; i <= settings.n_t; ++i) {
        const double t = dt * i;
        const double w = detail::simpson_coefficient(i, settings.n_t) * dt / (3.0 * settings.t_avg);
        const Eigen::VectorXcd et = detail::phase_vector(m.eigenvalues(), t);
        const Eigen::VectorXcd u = et.cwiseProduct(psi0.cast<std::complex<double>>());
        const Eigen::VectorXcd b = sp * u; // sigma_-^eig u
        const Eigen::VectorXcd a = et.conjugate().cwiseProduct(psi0.cast<std::complex<double>>());
        for (Eigen::Index j = 0; j < dim; ++j) {
            if (a(j) == std::complex<double>(0.0, 0.0)) continue;
            for (Eigen::Index l = 0; l < dim; ++l)
                g_matrix(j, l) += w * a(j) * b(l) * sp(l, j);
        }
    }

    const double dtau = settings.tau_max / settings.n_tau;
    std::vector<std::complex<double>> damped(static_cast<std::size_t>(settings.n_tau) + 1);
    for (int i = 0; i <= settings.n_tau; ++i) {
        const double tau = dtau * i;
        std::complex<double> cbar{0.0, 0.0};
        for (Eigen::Index j = 0; j < dim; ++j) {
            for (Eigen::Index l = 0; l < dim; ++l) {
                if (g_matrix(j, l) == std::complex<double>(0.0, 0.0)) continue;
                const double f = m.eigenvalues()(j) - m.eigenvalues()(l);
                cbar += g_matrix(j, l) * std::exp(std::complex<double>(0.0, f * tau));
            }
        }
        const double w = detail::simpson_coefficient(i, settings.n_tau) * dtau / 3.0;
        damped[static_cast<std::size_t>(i)] = w * std::exp(-gamma * tau) * cbar;
    }

    std::vector<double> values(nu_grid.size());
    for (std::size_t q = 0; q < nu_grid.size(); ++q) {
        const double nu = nu_grid[q];
        std::complex<double> acc{0.0, 0.0};
        for (int i = 0; i <= settings.n_tau; ++i) {
            const double tau = dtau * i;
            acc += damped[static_cast<std::size_t>(i)] *
                   std::exp(std::complex<double>(0.0, -nu * tau));
        }
        values[q] = acc.real();
    }

    SpectrumConfig cfg;
    cfg.gamma = gamma;
    cfg.nu_grid = std::move(nu_grid);
    CanonicalParams p{m.omega(), m.delta(), std::max(m.coupling(), 0.0)};
    return {p, std::move(cfg), FieldSummary::from(d), {}, std::move(values), "oracle"};
}

struct PeakMatch {
    double center_a = 0.0;
    double center_b = 0.0;
    double distance = 0.0;
    double height_ratio = 0.0; // height_b / height_a
};

struct CompareOptions {
    double peak_floor_rel = 0.01; // ignore peaks below this fraction of the series max
    int match_window_steps = 3;   // pairing window, in grid steps
    double l2_verdict = 0.05;     // relative L2 bound for a "match" verdict
};

struct ComparisonReport {
    double l2_relative = 0.0;
    double grid_step = 0.0;
    std::vector<PeakMatch> matched;
    std::vector<Peak> unmatched_a;
    std::vector<Peak> unmatched_b;
    double max_matched_distance = 0.0;
    bool all_peaks_matched = false;
    bool peaks_within_one_step = false;
    std::string verdict; // "match" or "mismatch"
};

// Compare two series on the same grid: relative L2 distance plus a pairing
// of significant peaks (above peak_floor_rel of each series' maximum).
inline ComparisonReport compare_spectra(const SpectrumSeries& a, const SpectrumSeries& b,
                                        const CompareOptions& opt = {}) {
    if (a.config.nu_grid.size() != b.config.nu_grid.size())
        throw domain_error("compare_spectra: frequency grids differ in size");
    for (std::size_t i = 0; i < a.config.nu_grid.size(); ++i)
        if (a.config.nu_grid[i] != b.config.nu_grid[i])
            throw domain_error("compare_spectra: frequency grids differ");

    ComparisonReport rep;
    rep.grid_step = a.config.nu_grid.size() > 1 ? a.config.nu_grid[1] - a.config.nu_grid[0] : 0.0;

    long double num = 0.0L, den = 0.0L;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const long double diff = static_cast<long double>(a.values[i]) - b.values[i];
        num += diff * diff;
        den += static_cast<long double>(a.values[i]) * a.values[i];
    }
    rep.l2_relative = den > 0.0L ? static_cast<double>(std::sqrt(num / den))
                                 : static_cast<double>(std::sqrt(num));

    auto significant = [&](const SpectrumSeries& s) {
        PeakSearchResult found = find_peaks(s);
        const double top = found.peaks.empty() ? 0.0 : found.peaks.front().height;
        std::vector<Peak> keep;
        for (const Peak& p : found.peaks)
            if (p.height >= opt.peak_floor_rel * top) keep.push_back(p);
        return keep;
    };
    std::vector<Peak> peaks_a = significant(a);
    std::vector<Peak> peaks_b = significant(b);

    const double window = opt.match_window_steps * rep.grid_step;
    std::vector<bool> used(peaks_b.size(), false);
    for (const Peak& pa : peaks_a) {
        int best = -1;
        double best_dist = window;
        for (std::size_t j = 0; j < peaks_b.size(); ++j) {
            if (used[j]) continue;
            const double dist = std::abs(peaks_b[j].nu - pa.nu);
            if (dist <= best_dist) {
                best = static_cast<int>(j);
                best_dist = dist;
            }
        }
        if (best >= 0) {
            used[static_cast<std::size_t>(best)] = true;
            rep.matched.push_back({pa.nu, peaks_b[static_cast<std::size_t>(best)].nu, best_dist,
                                   pa.height > 0.0
                                       ? peaks_b[static_cast<std::size_t>(best)].height / pa.height
                                       : 0.0});
            rep.max_matched_distance = std::max(rep.max_matched_distance, best_dist);
        } else {
            rep.unmatched_a.push_back(pa);
        }
    }
    for (std::size_t j = 0; j < peaks_b.size(); ++j)
        if (!used[j]) rep.unmatched_b.push_back(peaks_b[j]);

    rep.all_peaks_matched = rep.unmatched_a.empty() && rep.unmatched_b.empty() &&
                            !rep.matched.empty();
    rep.peaks_within_one_step =
        rep.all_peaks_matched && rep.max_matched_distance <= rep.grid_step * (1.0 + 1e-12);
    rep.verdict = (rep.peaks_within_one_step && rep.l2_relative <= opt.l2_verdict)
                      ? "match"
                      : "mismatch";
    return rep;
}

} // namespace cpbspec
