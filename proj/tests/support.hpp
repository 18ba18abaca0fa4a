#ifndef QUADLIN_TESTS_SUPPORT_HPP
#define QUADLIN_TESTS_SUPPORT_HPP

#include <quadlin/quadlin.hpp>

#include <algorithm>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace testing_support
{

using Fam = quadlin::CoefficientFamily<double>;
using Cx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

struct Rng
{
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
    Cx complex(double r = 1) { return {uniform(-r, r), uniform(-r, r)}; }

    /// Nonzero complex number with modulus in [lo, hi].
    Cx complex_annulus(double lo, double hi) { return std::polar(uniform(lo, hi), uniform(0, 2 * pi)); }
};

/// Distance of a real angle to the nearest pole of f (odd multiples of pi).
inline double pole_distance(double a)
{
    const double r = std::remainder(a - pi, 2 * pi);
    return std::abs(r);
}

/// Real angles in (0, 2 pi) whose pairwise differences stay `margin` away from poles.
inline std::vector<double> pole_free_angles(Rng& rng, int count, double margin = 0.05)
{
    for (;;) {
        std::vector<double> a(count);
        for (auto& x : a) x = rng.uniform(0, 2 * pi);
        bool ok = true;
        for (int p = 0; p < count && ok; ++p) {
            for (int q = p + 1; q < count && ok; ++q) ok = pole_distance(a[p] - a[q]) > margin;
        }
        if (ok) return a;
    }
}

inline std::vector<Fam> elliptic_families(double lambda0 = 0.3)
{
    return {Fam::rectangular(0.5, lambda0), Fam::rectangular(1.0, lambda0), Fam::rectangular(2.0, lambda0),
            Fam::rhombic(0.5, lambda0),     Fam::rhombic(1.0, lambda0),     Fam::rhombic(2.0, lambda0)};
}

inline std::vector<Fam> all_families(double lambda0 = 0.3)
{
    auto out = elliptic_families(lambda0);
    out.push_back(Fam::degenerate(lambda0));
    return out;
}

/// Wraps a family and scales f by `factor` whenever its argument is within 1e-9 of `at`
/// (mod 2 pi); everything else is forwarded. Used as a sensitivity probe.
struct PerturbedFamily
{
    using real_type = double;
    Fam base;
    double at;
    double factor;

    bool hit(double a) const { return std::abs(std::remainder(a - at, 2 * pi)) < 1e-9; }
    Cx f(double a) const { return hit(a) ? factor * base.f(a) : base.f(a); }
    Cx g0(double a) const { return base.g0(a); }
    Cx h(double a) const { return base.h(a); }
    Cx g(double a, double b) const { return f(a - b) * h(a) * h(b); }
};

static_assert(quadlin::CoefficientSource<PerturbedFamily>);

} // namespace testing_support

#endif
