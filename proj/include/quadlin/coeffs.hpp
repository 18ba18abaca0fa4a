#ifndef QUADLIN_COEFFS_HPP
#define QUADLIN_COEFFS_HPP

// Coefficient families f, g0, g1, h, g of the integrable linear
// quad-equation, with normalization c = 1:
//
//   f(a)  = theta_1(a/2) / theta_2(a/2)
//   g0(a) = -theta_2'(a/2) / (theta_2(a/2) theta_3 theta_4)
//   g(a, b) = f(a - b) h(a) h(b)
//
// rectangular: h(a) = theta_4((a - l0)/2) / theta_3((a - l0)/2)   (real)
// rhombic:     h(a) = i f(a - l0)                                 (imaginary)
// degenerate:  f = g0 = tan(a/2), h = 1

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <limits>
#include <numbers>
#include <span>
#include <string>

#include "errors.hpp"
#include "theta.hpp"

namespace quadlin
{

/// Anything that can feed the quad-equation, Laplacian and energies.
template <class C>
concept CoefficientSource = requires(const C& c, typename C::real_type x) {
    typename C::real_type;
    { c.f(x) } -> std::convertible_to<std::complex<typename C::real_type>>;
    { c.g0(x) } -> std::convertible_to<std::complex<typename C::real_type>>;
    { c.h(x) } -> std::convertible_to<std::complex<typename C::real_type>>;
    { c.g(x, x) } -> std::convertible_to<std::complex<typename C::real_type>>;
};

template <std::floating_point Real>
class CoefficientFamily
{
public:
    using real_type = Real;
    using complex_type = std::complex<Real>;

    /// Distance of a/2 to the nearest zero of theta_2 below which f, g0 refuse to evaluate.
    static constexpr Real pole_guard = Real(0.02);

    static CoefficientFamily rectangular(Real tau0, Real lambda0 = 0)
    {
        return CoefficientFamily(ThetaParams<Real>::rectangular(tau0), lambda0);
    }

    static CoefficientFamily rhombic(Real tau0, Real lambda0 = 0)
    {
        return CoefficientFamily(ThetaParams<Real>::rhombic(tau0), lambda0);
    }

    static CoefficientFamily degenerate(Real lambda0 = 0)
    {
        return CoefficientFamily(ThetaParams<Real>::degenerate(), lambda0);
    }

    /// Rectangular family with real nome q (q = 0 gives the degenerate family).
    static CoefficientFamily from_nome(Real q, Real lambda0 = 0)
    {
        return CoefficientFamily(ThetaParams<Real>::from_nome(q), lambda0);
    }

    static CoefficientFamily make(Regime r, Real tau0, Real lambda0 = 0)
    {
        switch (r) {
            case Regime::rectangular: return rectangular(tau0, lambda0);
            case Regime::rhombic: return rhombic(tau0, lambda0);
            case Regime::degenerate: return degenerate(lambda0);
            case Regime::generic: break;
        }
        throw regime_error("coefficient families exist only for rectangular, rhombic and degenerate tori");
    }

    Regime regime() const noexcept { return params_.regime(); }
    const ThetaParams<Real>& params() const noexcept { return params_; }
    Real tau0() const noexcept { return params_.tau0(); }
    Real lambda0() const noexcept { return lambda0_; }
    complex_type theta3() const noexcept { return th3_; }
    complex_type theta4() const noexcept { return th4_; }

    /// Same torus, different lambda0.
    CoefficientFamily with_lambda0(Real lambda0) const
    {
        CoefficientFamily copy = *this;
        copy.lambda0_ = lambda0;
        return copy;
    }

    complex_type f(complex_type alpha) const
    {
        guard_pole(alpha, "f");
        if (params_.is_degenerate()) return std::tan(alpha / Real(2));
        const complex_type z = alpha / Real(2);
        return theta(1, z, params_) / theta(2, z, params_);
    }

    complex_type g0(complex_type alpha) const
    {
        guard_pole(alpha, "g0");
        if (params_.is_degenerate()) return std::tan(alpha / Real(2));
        const complex_type z = alpha / Real(2);
        return -theta_deriv(2, z, params_) / (theta(2, z, params_) * th3_ * th4_);
    }

    /// -theta_3'(a/2) / (theta_3(a/2) theta_3 theta_4); rectangular regime only.
    Real g1(Real alpha) const
    {
        if (regime() != Regime::rectangular) {
            throw regime_error("g1 is defined for the rectangular regime only");
        }
        const complex_type z(alpha / Real(2), 0);
        return (-theta_deriv(3, z, params_) / (theta(3, z, params_) * th3_ * th4_)).real();
    }

    complex_type h(Real alpha) const
    {
        switch (regime()) {
            case Regime::rectangular: {
                const complex_type z((alpha - lambda0_) / Real(2), 0);
                return theta(4, z, params_) / theta(3, z, params_);
            }
            case Regime::rhombic: return complex_type(0, 1) * f(complex_type(alpha - lambda0_));
            default: return complex_type(1);
        }
    }

    complex_type g(Real alpha, Real beta) const
    {
        return f(complex_type(alpha - beta)) * h(alpha) * h(beta);
    }

private:
    CoefficientFamily(ThetaParams<Real> p, Real lambda0) : params_(p), lambda0_(lambda0)
    {
        if (p.regime() == Regime::generic) {
            throw regime_error("coefficient families exist only for rectangular, rhombic and degenerate tori");
        }
        if (!std::isfinite(lambda0)) throw domain_error("lambda0 must be finite");
        const complex_type zero(0);
        th3_ = theta(3, zero, params_);
        th4_ = theta(4, zero, params_);
    }

    // Zeros of theta_2 sit at pi/2 + m pi + n pi tau.
    void guard_pole(complex_type alpha, const char* who) const
    {
        const Real pi = std::numbers::pi_v<Real>;
        complex_type w = alpha / Real(2) - pi / Real(2);
        Real best = std::numeric_limits<Real>::infinity();
        if (params_.is_degenerate()) {
            const Real m = std::round(w.real() / pi);
            best = std::abs(w - complex_type(m * pi, 0));
        } else {
            const complex_type period = pi * params_.tau();
            const Real n0 = std::round(w.imag() / period.imag());
            for (Real n = n0 - 1; n <= n0 + 1; n += 1) {
                const complex_type wn = w - n * period;
                const Real m0 = std::round(wn.real() / pi);
                for (Real m = m0 - 1; m <= m0 + 1; m += 1) {
                    best = std::min(best, std::abs(wn - complex_type(m * pi, 0)));
                }
            }
        }
        if (best < pole_guard) {
            throw pole_error(std::string(who) + " evaluated at a pole", static_cast<double>(alpha.real()));
        }
    }

    ThetaParams<Real> params_;
    Real lambda0_;
    complex_type th3_{1};
    complex_type th4_{1};
};

// Functional-equation residuals; all vanish for the elliptic families.

/// Four-term cyclic sum f(a-b)f(b-c)f(c-a) + f(b-a)f(a-d)f(d-b) + f(c-b)f(b-d)f(d-c) + f(a-c)f(c-d)f(d-a).
template <std::floating_point Real>
std::complex<Real> check_fff(std::complex<Real> a, std::complex<Real> b, std::complex<Real> c,
                             std::complex<Real> d, const CoefficientFamily<Real>& fam)
{
    auto f = [&](std::complex<Real> x) { return fam.f(x); };
    return f(a - b) * f(b - c) * f(c - a) + f(b - a) * f(a - d) * f(d - b) + f(c - b) * f(b - d) * f(d - c)
           + f(a - c) * f(c - d) * f(d - a);
}

template <CoefficientSource C>
std::complex<typename C::real_type> check_fhh(typename C::real_type a, typename C::real_type b,
                                              typename C::real_type c, const C& fam)
{
    const auto fab = fam.f(a - b), fbc = fam.f(b - c), fca = fam.f(c - a);
    const auto ha = fam.h(a), hb = fam.h(b), hc = fam.h(c);
    return fab * ha * hb + fbc * hb * hc + fca * hc * ha - fab * fbc * fca;
}

/// f(a-b)f(b-c)f(c-a) - (g0(a-b) + g0(b-c) + g0(c-a)).
template <std::floating_point Real>
std::complex<Real> check_gsum(std::complex<Real> a, std::complex<Real> b, std::complex<Real> c,
                              const CoefficientFamily<Real>& fam)
{
    return fam.f(a - b) * fam.f(b - c) * fam.f(c - a) - (fam.g0(a - b) + fam.g0(b - c) + fam.g0(c - a));
}

/// theta_1/theta_2 at nome i q0 minus theta_1 theta_3 / (theta_2 theta_4) at nome q0^2, both at a/2.
template <std::floating_point Real>
std::complex<Real> rhombic_nome_reduction_check(Real alpha, Real tau0)
{
    using Cx = std::complex<Real>;
    const auto fam = CoefficientFamily<Real>::rhombic(tau0);
    const Cx lhs = fam.f(Cx(alpha));
    const auto squared = ThetaParams<Real>::rectangular(2 * tau0);
    const Cx z(alpha / 2);
    const Cx rhs = theta(1, z, squared) * theta(3, z, squared) / (theta(2, z, squared) * theta(4, z, squared));
    return lhs - rhs;
}

/// g0(a) - f(a) (rectangular, positive) or f(a) - g0(a) (rhombic, positive) for 0 < a < pi.
template <std::floating_point Real>
Real lemma_margin(Real alpha, const CoefficientFamily<Real>& fam)
{
    if (!(alpha > 0 && alpha < std::numbers::pi_v<Real>)) throw domain_error("lemma margin needs 0 < alpha < pi");
    const std::complex<Real> a(alpha);
    switch (fam.regime()) {
        case Regime::rectangular: return (fam.g0(a) - fam.f(a)).real();
        case Regime::rhombic: return (fam.f(a) - fam.g0(a)).real();
        default: return 0;
    }
}

/// Closed form of lemma_margin through theta functions of the squared nome.
///
/// rectangular: (2 / (theta_3 theta_4)) (-theta_3'(a/2; q^2) / theta_3(a/2; q^2))
/// rhombic:     2 theta_4'(a/2; q0^2) / (theta_4(a/2; q0^2) theta_3(0; q0^2)^2)
template <std::floating_point Real>
Real lemma_margin_closed_form(Real alpha, const CoefficientFamily<Real>& fam)
{
    if (!(alpha > 0 && alpha < std::numbers::pi_v<Real>)) throw domain_error("lemma margin needs 0 < alpha < pi");
    using Cx = std::complex<Real>;
    const Cx z(alpha / 2);
    const auto squared = ThetaParams<Real>::rectangular(2 * fam.tau0());
    switch (fam.regime()) {
        case Regime::rectangular: {
            const Cx log_der = theta_deriv(3, z, squared) / theta(3, z, squared);
            return (Real(-2) * log_der / (fam.theta3() * fam.theta4())).real();
        }
        case Regime::rhombic: {
            const Cx t30 = theta(3, Cx(0), squared);
            return (Real(2) * theta_deriv(4, z, squared) / (theta(4, z, squared) * t30 * t30)).real();
        }
        default: return 0;
    }
}

/// Star mass sum_k g0(a_{k+1} - a_k) for a cyclic label sequence closing a black star.
template <CoefficientSource C>
std::complex<typename C::real_type> star_mass_g0(std::span<const typename C::real_type> labels, const C& fam)
{
    std::complex<typename C::real_type> sum(0);
    const std::size_t m = labels.size();
    for (std::size_t k = 0; k < m; ++k) sum += fam.g0(labels[(k + 1) % m] - labels[k]);
    return sum;
}

/// The same mass through g: sum_k g(a_{k+1}, a_k); independent of lambda0.
template <CoefficientSource C>
std::complex<typename C::real_type> star_mass_g(std::span<const typename C::real_type> labels, const C& fam)
{
    std::complex<typename C::real_type> sum(0);
    const std::size_t m = labels.size();
    for (std::size_t k = 0; k < m; ++k) sum += fam.g(labels[(k + 1) % m], labels[k]);
    return sum;
}

} // namespace quadlin

#endif
