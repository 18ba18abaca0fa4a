#ifndef QUADLIN_THETA_HPP
#define QUADLIN_THETA_HPP

// Jacobi theta functions in the Whittaker-Watson normalization,
//
//   theta_1(z, q) = 2 sum_{n>=0} (-1)^n q^{(n+1/2)^2} sin((2n+1) z)
//   theta_2(z, q) = 2 sum_{n>=0}        q^{(n+1/2)^2} cos((2n+1) z)
//   theta_3(z, q) = 1 + 2 sum_{n>=1}        q^{n^2} cos(2nz)
//   theta_4(z, q) = 1 + 2 sum_{n>=1} (-1)^n q^{n^2} cos(2nz)
//
// with q = exp(i pi tau). Fractional powers of q are always taken as
// exp(i pi tau e), never as principal roots of q.

#include <cmath>
#include <complex>
#include <concepts>
#include <numbers>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace quadlin
{

enum class Regime
{
    rectangular, ///< tau = i tau0
    rhombic,     ///< tau = 1/2 + i tau0
    generic,     ///< any tau in the upper half plane
    degenerate   ///< q = 0
};

inline std::string_view to_string(Regime r)
{
    switch (r) {
        case Regime::rectangular: return "rectangular";
        case Regime::rhombic: return "rhombic";
        case Regime::generic: return "generic";
        case Regime::degenerate: return "degenerate";
    }
    return "unknown";
}

inline Regime parse_regime(std::string_view s)
{
    if (s == "rectangular") return Regime::rectangular;
    if (s == "rhombic") return Regime::rhombic;
    if (s == "generic") return Regime::generic;
    if (s == "degenerate") return Regime::degenerate;
    throw usage_error("unknown regime '" + std::string(s) + "'");
}

/// Modulus tau, cached nome q = exp(i pi tau) and the regime tag.
template <std::floating_point Real>
class ThetaParams
{
public:
    using real_type = Real;
    using complex_type = std::complex<Real>;

    static ThetaParams rectangular(Real tau0)
    {
        check_tau0(tau0);
        return ThetaParams(complex_type(0, tau0), Regime::rectangular);
    }

    static ThetaParams rhombic(Real tau0)
    {
        check_tau0(tau0);
        return ThetaParams(complex_type(Real(0.5), tau0), Regime::rhombic);
    }

    static ThetaParams generic(complex_type tau)
    {
        if (!(tau.imag() > 0) || !std::isfinite(tau.imag()) || !std::isfinite(tau.real())) {
            throw domain_error("theta modulus must lie in the upper half plane");
        }
        return ThetaParams(tau, Regime::generic);
    }

    static ThetaParams degenerate() { return ThetaParams(); }

    /// Rectangular parameters from a real nome 0 <= q < 1; q = 0 gives the degenerate regime.
    static ThetaParams from_nome(Real q)
    {
        if (q == 0) return degenerate();
        if (!(q > 0 && q < 1)) throw domain_error("real nome must satisfy 0 <= q < 1");
        return rectangular(-std::log(q) / std::numbers::pi_v<Real>);
    }

    Regime regime() const noexcept { return regime_; }
    bool is_degenerate() const noexcept { return regime_ == Regime::degenerate; }
    complex_type tau() const noexcept { return tau_; }
    Real tau0() const noexcept { return tau_.imag(); }
    complex_type nome() const noexcept { return q_; }

    /// q^e evaluated as exp(i pi tau e).
    complex_type nome_power(Real e) const
    {
        if (is_degenerate()) return e == 0 ? complex_type(1) : complex_type(0);
        return std::exp(complex_type(0, std::numbers::pi_v<Real>) * tau_ * e);
    }

private:
    ThetaParams() : tau_(0, 0), q_(0, 0), regime_(Regime::degenerate) {}

    ThetaParams(complex_type tau, Regime r)
        : tau_(tau), q_(std::exp(complex_type(0, std::numbers::pi_v<Real>) * tau)), regime_(r)
    {
        if (!(std::abs(q_) < 1)) throw domain_error("nome must satisfy |q| < 1");
    }

    static void check_tau0(Real tau0)
    {
        if (!(tau0 > 0) || !std::isfinite(tau0)) throw domain_error("tau0 must be positive and finite");
    }

    complex_type tau_;
    complex_type q_;
    Regime regime_;
};

template <std::floating_point Real>
inline constexpr Real default_theta_eps = Real(1e-13);

// Specialization of the default for the extended path: tighter truncation.
template <>
inline constexpr long double default_theta_eps<long double> = 1e-17L;

template <std::floating_point Real>
struct ThetaValue
{
    std::complex<Real> value;
    std::complex<Real> derivative;
};

namespace detail
{

inline constexpr int theta_max_terms = 200;

inline void check_index(int k)
{
    if (k < 1 || k > 4) throw usage_error("theta index must be 1..4, got " + std::to_string(k));
}

// Series for |Im w| at most half the fundamental strip.
template <std::floating_point Real>
ThetaValue<Real> theta_series(int k, std::complex<Real> w, const ThetaParams<Real>& p, Real eps)
{
    using C = std::complex<Real>;
    const Real im = std::abs(w.imag());
    C value(0), deriv(0);
    Real accumulated = 0;
    const bool odd_family = (k == 1 || k == 2);
    if (!odd_family) {
        value = C(1);
        accumulated = 1;
    }
    const int first = odd_family ? 0 : 1;
    for (int n = first; n < first + theta_max_terms; ++n) {
        const Real freq = odd_family ? Real(2 * n + 1) : Real(2 * n);
        const Real expo = odd_family ? (Real(n) + Real(0.5)) * (Real(n) + Real(0.5)) : Real(n) * Real(n);
        const C qpow = p.nome_power(expo);
        const Real bound = 2 * std::abs(qpow) * std::exp(freq * im) * freq;
        const bool alternating = (k == 1 || k == 4) && (n % 2 == 1);
        const C coeff = Real(2) * (alternating ? -qpow : qpow);
        const C arg = freq * w;
        if (k == 1) {
            value += coeff * std::sin(arg);
            deriv += coeff * freq * std::cos(arg);
        } else {
            value += coeff * std::cos(arg);
            deriv -= coeff * freq * std::sin(arg);
        }
        accumulated += bound;
        if (n > first && bound < eps * accumulated) return {value, deriv};
        if (!std::isfinite(accumulated)) break;
    }
    throw domain_error("theta series did not converge");
}

// theta_k(z) and theta_k'(z) after reducing Im z by the quasi-period pi*tau.
template <std::floating_point Real>
ThetaValue<Real> theta_eval(int k, std::complex<Real> z, const ThetaParams<Real>& p, Real eps)
{
    using C = std::complex<Real>;
    check_index(k);
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw domain_error("non-finite theta argument");
    if (p.is_degenerate()) {
        // Strict q -> 0 limits: theta_1, theta_2 carry a q^{1/4} prefactor.
        if (k == 1 || k == 2) return {C(0), C(0)};
        return {C(1), C(0)};
    }
    const Real pi = std::numbers::pi_v<Real>;
    const C period = pi * p.tau();
    const Real m_real = std::round(z.imag() / period.imag());
    if (std::abs(m_real) > Real(1e6)) throw domain_error("theta argument too far from the real axis");
    const long m = static_cast<long>(m_real);
    const C w = z - m_real * period;
    ThetaValue<Real> base = theta_series(k, w, p, eps);
    if (m == 0) return base;
    // theta_k(w + m pi tau) = s_k^m q^{-m^2} exp(-2 i m w) theta_k(w)
    const C log_factor = C(0, -pi) * p.tau() * (m_real * m_real) + C(0, -2 * m_real) * w;
    C factor = std::exp(log_factor);
    if ((k == 1 || k == 4) && (m % 2 != 0)) factor = -factor;
    if (!std::isfinite(factor.real()) || !std::isfinite(factor.imag())) {
        throw domain_error("theta quasi-periodicity factor overflows");
    }
    return {factor * base.value, factor * (base.derivative - C(0, 2 * m_real) * base.value)};
}

} // namespace detail

/// theta_k(z | tau) for k = 1..4.
template <std::floating_point Real>
std::complex<Real> theta(int k, std::complex<Real> z, const ThetaParams<Real>& p,
                         Real eps = default_theta_eps<Real>)
{
    return detail::theta_eval(k, z, p, eps).value;
}

/// d/dz theta_k(z | tau), from the term-wise differentiated series.
template <std::floating_point Real>
std::complex<Real> theta_deriv(int k, std::complex<Real> z, const ThetaParams<Real>& p,
                               Real eps = default_theta_eps<Real>)
{
    return detail::theta_eval(k, z, p, eps).derivative;
}

template <std::floating_point Real>
struct ThetaConstants
{
    std::complex<Real> theta2;
    std::complex<Real> theta3;
    std::complex<Real> theta4;
    std::complex<Real> theta1_prime;
};

/// (theta_2(0), theta_3(0), theta_4(0), theta_1'(0)); (0, 1, 1, 0) in the degenerate regime.
template <std::floating_point Real>
ThetaConstants<Real> theta_constants(const ThetaParams<Real>& p)
{
    const std::complex<Real> zero(0);
    return {theta(2, zero, p), theta(3, zero, p), theta(4, zero, p), theta_deriv(1, zero, p)};
}

} // namespace quadlin

#endif
