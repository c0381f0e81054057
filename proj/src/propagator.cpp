#include "bsbs/propagator.hpp"

#include "bsbs/errors.hpp"
#include "bsbs/quadrature.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

namespace bsbs {

namespace {

constexpr cplx I(0.0, 1.0);
const double sqrt2 = std::sqrt(2.0);

double max_abs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

bool all_finite(const Mat2& m)
{
    for (int i = 0; i < 4; ++i)
        if (!std::isfinite(m.data()[i].real()) || !std::isfinite(m.data()[i].imag()))
            return false;
    return true;
}

// sin(x)/k or sinh(x)/k with x = k*t, evaluated without cancellation as k -> 0.
template <class R>
std::complex<R> sin_over(std::complex<R> k, R t, bool hyperbolic)
{
    std::complex<R> x = k * t;
    if (std::abs(x) < R(1e-3)) {
        std::complex<R> x2 = x * x;
        R sign = hyperbolic ? 1 : -1;
        return t * (R(1) + sign * x2 / R(6) + x2 * x2 / R(120));
    }
    return (hyperbolic ? std::sinh(x) : std::sin(x)) / k;
}

ChannelParams with_g(ChannelParams p, double g)
{
    p.g = g;
    return p;
}

} // namespace

const char* to_string(Process p) { return p == Process::stokes ? "stokes" : "anti_stokes"; }

EffectiveParams effective_params(const ChannelParams& params)
{
    cplx Ge(params.Gamma, params.c_g * params.delta);
    double sign = params.process == Process::anti_stokes ? -1.0 : 1.0;
    return {std::sqrt(params.g * params.g + sign * Ge * Ge / 8.0), Ge};
}

Mat2 drift_matrix(const ChannelParams& params)
{
    double cd = params.c_g * params.delta;
    Mat2 P;
    P(0, 0) = -(params.gamma + 2.0 * I * cd) / 4.0;
    P(0, 1) = -I * params.g / 2.0;
    P(1, 0) = (params.process == Process::anti_stokes ? -I : I) * params.g;
    P(1, 1) = -(2.0 * I * cd + params.Gamma) / 2.0;
    return P;
}

Propagator2 propagator_numeric(const Mat2& P, double eta)
{
    if (!(eta >= 0))
        throw ConfigError("propagator_numeric: eta must be non-negative");
    if (!all_finite(P))
        throw ConfigError("propagator_numeric: drift matrix is not finite");
    Mat2 A = P * eta;
    Mat2 G = A.exp();
    if (!all_finite(G))
        throw NumericalError("propagator_numeric: matrix exponential overflowed");
    return {G, eta, Provenance::numeric_expm};
}

Propagator2 propagator_closed_form(const ChannelParams& params, double eta)
{
    if (!(eta >= 0))
        throw ConfigError("propagator_closed_form: eta must be non-negative");
    if (params.gamma > params.Gamma / 10.0)
        throw ConfigError("closed form out of validity: requires gamma <= Gamma/10");

    // Evaluated in extended precision and rounded once, so that identities
    // such as |G~11|^2 - |G~12|^2 = 1 hold to a few ulp of the entries.
    using real = long double;
    using lcplx = std::complex<real>;
    const lcplx i(0, 1);
    const real s2 = std::sqrt(real(2));
    const real g = params.g;
    const real cd = real(params.c_g) * params.delta;
    const real Gamma = params.Gamma, gamma = params.gamma, t = eta;
    const lcplx Gp(Gamma - gamma / 2, cd);
    const lcplx E = std::exp(-(2 * Gamma + gamma + real(6) * i * cd) * t / real(8));
    const bool stokes = params.process == Process::stokes;

    lcplx ge = std::sqrt(g * g + (stokes ? real(1) : real(-1)) * Gp * Gp / real(8));
    lcplx C = stokes ? std::cosh(ge * t / s2) : std::cos(ge * t / s2);
    lcplx S = sin_over(ge, t / s2, stokes); // sin(x)/g_e or sinh(x)/g_e

    Mat2 G;
    G(0, 0) = cplx(E * (C + Gp / (2 * s2) * S));
    G(0, 1) = cplx(E * (-i * g / s2) * S);
    G(1, 0) = cplx(E * ((stokes ? i : -i) * s2 * g) * S);
    G(1, 1) = cplx(E * (C - Gp / (2 * s2) * S));
    if (!all_finite(G))
        throw NumericalError("propagator_closed_form: overflow");
    return {G, eta, Provenance::closed_form};
}

Mat2 propagator_between(const PumpEnvelope& envelope, const ChannelParams& params, double eta1, double eta2)
{
    if (!(eta2 >= eta1) || !(eta1 >= 0))
        throw ConfigError("propagator_between: need 0 <= eta1 <= eta2");
    Mat2 G = Mat2::Identity();
    for (const auto& piece : envelope.pieces(eta1, eta2))
        G = propagator_numeric(drift_matrix(with_g(params, piece.coupling)), piece.duration).entries * G;
    return G;
}

Propagator2 propagator_time_ordered(const PumpEnvelope& envelope, const ChannelParams& params, double eta)
{
    if (!(eta >= 0))
        throw ConfigError("propagator_time_ordered: eta must be non-negative");
    return {propagator_between(envelope, params, 0.0, eta), eta, Provenance::time_ordered};
}

Mat2 to_tilde(const Mat2& G)
{
    Mat2 T = G;
    T(0, 1) *= sqrt2;
    T(1, 0) /= sqrt2;
    return T;
}

Mat2 commutator_matrix(Process process)
{
    Mat2 K = Mat2::Zero();
    K(0, 0) = 0.5;
    K(1, 1) = process == Process::anti_stokes ? 1.0 : -1.0;
    return K;
}

ChannelMoments make_moments(Process process, cplx alpha, double n_a, cplx beta, double n_b)
{
    ChannelMoments m;
    m.mean(0) = alpha;
    m.mean(1) = process == Process::anti_stokes ? beta : std::conj(beta);
    m.corr = m.mean * m.mean.adjoint();
    // <a a^dag> = <a^dag a> + 1/2; <b b^dag> = <b^dag b> + 1.
    m.corr(0, 0) += n_a + 0.5;
    m.corr(1, 1) += process == Process::anti_stokes ? n_b + 1.0 : n_b;
    return m;
}

Occupancies normal_ordered(const ChannelMoments& m, Process process)
{
    Occupancies o;
    o.optical = m.corr(0, 0).real() - 0.5;
    o.phonon = process == Process::anti_stokes ? m.corr(1, 1).real() - 1.0 : m.corr(1, 1).real();
    return o;
}

Mat2 noise_diffusion(const ChannelParams& params, double n_th)
{
    Mat2 D = Mat2::Zero();
    D(0, 0) = params.gamma / 4.0;
    D(1, 1) = params.Gamma * (params.process == Process::anti_stokes ? n_th + 1.0 : n_th);
    return D;
}

namespace {

// \int_0^h E(u) D E(u)^dag du for constant drift P.
Mat2 segment_noise(const Mat2& P, const Mat2& D, double h, double rel_tol)
{
    if (max_abs(D) == 0)
        return Mat2::Zero();
    auto f = [&](double u) -> Mat2 {
        Mat2 E = propagator_numeric(P, u).entries;
        return E * D * E.adjoint();
    };
    auto norm = [](const Mat2& m) { return max_abs(m); };
    return detail::adaptive_simpson<Mat2>(f, norm, 0.0, h, rel_tol);
}

// Propagates (mean, corr) through [0, eta] with source D, piece by piece.
void propagate(Vec2& mean, Mat2& corr, const ChannelParams& params, const PumpEnvelope& envelope,
               const Mat2& D, double eta, double rel_tol)
{
    if (!(eta >= 0))
        throw ConfigError("eta must be non-negative");
    for (const auto& piece : envelope.pieces(0.0, eta)) {
        Mat2 P = drift_matrix(with_g(params, piece.coupling));
        Mat2 E = propagator_numeric(P, piece.duration).entries;
        mean = E * mean;
        corr = E * corr * E.adjoint() + segment_noise(P, D, piece.duration, rel_tol);
    }
    if (!all_finite(corr))
        throw NumericalError("moment propagation produced non-finite values");
}

} // namespace

ChannelMoments evolve_moments(const ChannelMoments& initial, const ChannelParams& params,
                              const PumpEnvelope& envelope, double n_th, double eta, double rel_tol)
{
    if (!(n_th >= 0))
        throw ConfigError("evolve_moments: n_th must be non-negative");
    ChannelMoments m = initial;
    propagate(m.mean, m.corr, params, envelope, noise_diffusion(params, n_th), eta, rel_tol);
    return m;
}

Mat2 noise_integral(const ChannelParams& params, const PumpEnvelope& envelope, const Mat2& D,
                    double eta, double rel_tol)
{
    Vec2 mean = Vec2::Zero();
    Mat2 corr = Mat2::Zero();
    propagate(mean, corr, params, envelope, D, eta, rel_tol);
    return corr;
}

Mat2 evolve_commutator(const ChannelParams& params, const PumpEnvelope& envelope, double eta, double rel_tol)
{
    Mat2 C = Mat2::Zero();
    C(0, 0) = params.gamma / 4.0;
    C(1, 1) = params.process == Process::anti_stokes ? params.Gamma : -params.Gamma;
    Vec2 mean = Vec2::Zero();
    Mat2 K = commutator_matrix(params.process);
    propagate(mean, K, params, envelope, C, eta, rel_tol);
    return K;
}

} // namespace bsbs
