#include <catch2/catch.hpp>

#include <numbers>
#include <random>

#include "cpbspec/dressed.hpp"
#include "cpbspec/oracle.hpp"

using namespace cpbspec;

TEST_CASE("rabi splitting") {
    CanonicalParams res{10.0, 0.0, 1.0};
    REQUIRE(rabi_splitting(res, 0) == Approx(1.0).epsilon(1e-15));
    REQUIRE(rabi_splitting(res, 3) == Approx(2.0).epsilon(1e-15));

    // Detuned value cross-checked against the numeric 2x2 eigensplitting.
    CanonicalParams det{10.0, 2.0, 1.0};
    const double mu = rabi_splitting(det, 0);
    REQUIRE(mu == Approx(std::sqrt(2.0)).epsilon(1e-14));
    TruncatedModel m(det, 2);
    const BlockEigensystem blk = block_eigensystem(m, 0);
    REQUIRE(mu == Approx(0.5 * (blk.upper - blk.lower)).epsilon(1e-12));

    REQUIRE_THROWS_AS(rabi_splitting(res, -1), domain_error);
}

TEST_CASE("eigenenergies") {
    CanonicalParams p{10.0, 0.0, 1.0};
    auto [up0, lo0] = eigenenergies(p, 0);
    REQUIRE(up0 == Approx(6.0).epsilon(1e-15));
    REQUIRE(lo0 == Approx(4.0).epsilon(1e-15));
    auto [up3, lo3] = eigenenergies(p, 3);
    REQUIRE(up3 == Approx(37.0).epsilon(1e-15));
    REQUIRE(lo3 == Approx(33.0).epsilon(1e-15));

    std::mt19937 rng(4321);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        CanonicalParams q{0.5 + 9.5 * uni(rng), -5.0 + 10.0 * uni(rng), 0.1 + 2.9 * uni(rng)};
        const int n = static_cast<int>(rng() % 40);
        auto [up, lo] = eigenenergies(q, n);
        REQUIRE(up > lo);
        REQUIRE(0.5 * (up + lo) == Approx(q.omega * (n + 0.5)).epsilon(1e-12));
        const DressedLevel lv = dressed_level(q, n);
        REQUIRE(lv.upsilon_plus - lv.upsilon_minus ==
                Approx(2.0 * lv.mu).margin(1e-12 * std::abs(lv.upsilon_plus)));
        REQUIRE(lv.mu * lv.mu ==
                Approx(0.25 * q.delta * q.delta + q.g * q.g * (n + 1)).epsilon(1e-14));
    }
}

TEST_CASE("mixing angle") {
    SECTION("resonance gives pi/4 exactly, matching equal-weight eigenvectors") {
        CanonicalParams p{10.0, 0.0, 0.3};
        for (int n : {0, 1, 5, 17})
            REQUIRE(mixing_angle(p, n) == std::numbers::pi / 4.0);
        TruncatedModel m(p, 3);
        const BlockEigensystem blk = block_eigensystem(m, 1);
        REQUIRE(std::abs(blk.upper_vec(0)) == Approx(std::abs(blk.upper_vec(1))).epsilon(1e-12));
    }
    SECTION("large positive detuning sends theta to 0") {
        CanonicalParams p{2000.0, 1000.0, 1.0};
        REQUIRE(mixing_angle(p, 0) < 1e-2);
        REQUIRE(mixing_angle(p, 0) > 0.0);
    }
    SECTION("large negative detuning sends theta to pi/2") {
        CanonicalParams p{2000.0, -1000.0, 1.0};
        REQUIRE(mixing_angle(p, 0) > std::numbers::pi / 2.0 - 1e-2);
        REQUIRE(mixing_angle(p, 0) < std::numbers::pi / 2.0);
    }
    SECTION("zero coupling is rejected") {
        CanonicalParams p{10.0, 1.0, 0.0};
        REQUIRE_THROWS_AS(mixing_angle(p, 0), domain_error);
    }
    SECTION("monotone decreasing in delta") {
        double prev = std::numbers::pi;
        for (double delta = -5.0; delta <= 5.0; delta += 0.25) {
            CanonicalParams p{10.0, delta, 0.8};
            const double theta = mixing_angle(p, 2);
            REQUIRE(theta < prev);
            REQUIRE(theta > 0.0);
            REQUIRE(theta < std::numbers::pi / 2.0);
            prev = theta;
        }
    }
}

TEST_CASE("evolution amplitudes") {
    CanonicalParams p{10.0, 0.0, 1.0};

    SECTION("t = 0") {
        const EvolutionAmps amps = evolution_amps(p, 4, 0.0);
        REQUIRE(amps.a.real() == Approx(1.0).margin(1e-15));
        REQUIRE(amps.a.imag() == Approx(0.0).margin(1e-15));
        REQUIRE(std::abs(amps.b) == Approx(0.0).margin(1e-15));
    }
    SECTION("resonant modulus follows cos and sin of mu t") {
        const double t = std::numbers::pi / 2.0; // mu_0 = 1
        REQUIRE(std::abs(evolution_amp_a(p, 0, t)) == Approx(0.0).margin(1e-12));
        REQUIRE(std::abs(evolution_amp_b(p, 0, t)) == Approx(1.0).epsilon(1e-12));
        for (double tt : {0.3, 0.9, 2.2}) {
            REQUIRE(std::abs(evolution_amp_a(p, 0, tt)) ==
                    Approx(std::abs(std::cos(tt))).margin(1e-12));
            REQUIRE(std::abs(evolution_amp_b(p, 0, tt)) ==
                    Approx(std::abs(std::sin(tt))).margin(1e-12));
        }
    }
    SECTION("far detuning suppresses the exchange amplitude") {
        CanonicalParams far{2000.0, 1000.0, 1.0};
        double worst = 0.0;
        for (double t = 0.0; t < 10.0; t += 0.01)
            worst = std::max(worst, std::abs(evolution_amp_b(far, 0, t)));
        REQUIRE(worst < 1e-2);
    }
    SECTION("unitarity over random draws") {
        std::mt19937 rng(2024);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        for (int i = 0; i < 100; ++i) {
            CanonicalParams q{0.1 + 9.9 * uni(rng), -5.0 + 10.0 * uni(rng),
                              0.05 + 2.95 * uni(rng)};
            const int n = static_cast<int>(rng() % 50);
            const double t = 100.0 * uni(rng);
            const EvolutionAmps amps = evolution_amps(q, n, t);
            REQUIRE(std::norm(amps.a) + std::norm(amps.b) == Approx(1.0).margin(1e-12));
        }
    }
}

TEST_CASE("analytic dressing matches the numeric block eigensystem") {
    std::mt19937 rng(5150);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        CanonicalParams p{10.0, -5.0 + 10.0 * uni(rng), 0.05 + 2.95 * uni(rng)};
        TruncatedModel m(p, 51);
        for (int n = 0; n <= 50; ++n) {
            const DressedLevel lv = dressed_level(p, n);
            const BlockEigensystem blk = block_eigensystem(m, n);
            REQUIRE(blk.upper == Approx(lv.upsilon_plus).epsilon(1e-10));
            REQUIRE(blk.lower == Approx(lv.upsilon_minus).epsilon(1e-10));
            const Eigen::Vector2d up(std::cos(lv.theta), std::sin(lv.theta));
            const Eigen::Vector2d lo(std::sin(lv.theta), -std::cos(lv.theta));
            REQUIRE(std::abs(up.dot(blk.upper_vec)) > 1.0 - 1e-10);
            REQUIRE(std::abs(lo.dot(blk.lower_vec)) > 1.0 - 1e-10);
        }
    }
}
