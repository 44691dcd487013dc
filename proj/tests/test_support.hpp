// test_support.hpp — helpers shared by the unit and acceptance suites

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cpbspec/field_states.hpp"

namespace test_support {

// 0.5 * sum |p_n - q_n| over the union of supports.
inline double total_variation(const cpbspec::PhotonDistribution& a,
                              const cpbspec::PhotonDistribution& b) {
    const int top = std::max(a.max_support(), b.max_support());
    long double acc = 0.0L;
    for (int n = 0; n <= top; ++n)
        acc += std::abs(a.prob(n) - b.prob(n));
    return static_cast<double>(acc / 2.0L);
}

// Composite-Simpson integral of f over [lo, hi] with at least `min_points`
// nodes (rounded up to an even interval count).
template <typename F>
double simpson(F&& f, double lo, double hi, int min_points) {
    int n = std::max(2, min_points);
    if (n % 2) ++n;
    const double h = (hi - lo) / n;
    long double acc = 0.0L;
    for (int i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * f(lo + i * h);
    }
    return static_cast<double>(acc * h / 3.0L);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// Unique scratch directory under the system temp dir, removed on scope exit.
class TempDir {
public:
    TempDir() {
        static std::mt19937_64 rng{std::random_device{}()};
        dir_ = std::filesystem::temp_directory_path() /
               ("cpbspec_test_" + std::to_string(rng()));
        std::filesystem::create_directories(dir_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(dir_, ec);
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

private:
    std::filesystem::path dir_;
};

} // namespace test_support
