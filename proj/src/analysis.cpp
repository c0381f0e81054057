#include "bsbs/analysis.hpp"

#include "bsbs/errors.hpp"
#include "bsbs/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace bsbs {

namespace {

constexpr cplx I(0.0, 1.0);
const double sqrt2 = std::sqrt(2.0);

ChannelParams with_g(ChannelParams p, double g)
{
    p.g = g;
    return p;
}

ChannelParams with_delta(ChannelParams p, double delta)
{
    p.delta = delta;
    return p;
}

Mat2 expm_route(const ChannelParams& params, double h, Route route)
{
    if (route == Route::closed_form)
        return propagator_closed_form(params, h).entries;
    return propagator_numeric(drift_matrix(params), h).entries;
}

Mat2 phonon_source(const ChannelParams& params)
{
    Mat2 D = Mat2::Zero();
    D(1, 1) = params.Gamma;
    return D;
}

void require_process(const ChannelParams& params, Process p, const char* what)
{
    if (params.process != p)
        throw ConfigError(std::string(what) + ": wrong process (" + to_string(params.process) + ")");
}

GridValues make_grid(std::size_t nd, std::size_t ne)
{
    GridValues g;
    g.n_eta = ne;
    g.data.assign(nd * ne, 0.0);
    return g;
}

TransferPoint transfer_from(const Mat2& G, const Mat2& N, double n_th, cplx beta0, ReadoutNoise noise)
{
    double nb = std::norm(beta0);
    double n_eff = noise == ReadoutNoise::half ? n_th / 2.0 : n_th;
    TransferPoint t;
    t.n_coherent = std::norm(G(0, 1)) * nb;
    t.n_noise = n_eff * N(0, 0).real();
    if (t.n_coherent > 0 && nb > 0)
        t.beta_raw = t.n_coherent * t.n_coherent / ((t.n_coherent + t.n_noise) * nb);
    t.beta_symmetrized = 2.0 * t.beta_raw;
    return t;
}

// (|r G e1|^2 + (2 n0 + 1)|r G e2|^2 + r N r^dag) / (alpha^2 + alpha^-2), r = (1/alpha, i alpha).
double duan_from(const Mat2& G, const Mat2& N, double n0, double alpha)
{
    Eigen::RowVector2cd r(1.0 / alpha, I * alpha);
    Eigen::RowVector2cd rG = r * G;
    double noise = (r * N * r.adjoint())(0, 0).real();
    double s = std::norm(rG(0)) + (2.0 * n0 + 1.0) * std::norm(rG(1)) + noise;
    // alpha^2 + alpha^-2 written as |r|^2 so that G = I, N = 0 gives exactly 1.
    return s / (std::norm(r(0)) + std::norm(r(1)));
}

// Diffusion for the Duan variance: optical vacuum with unit commutator and the
// symmetrized thermal phonon forcing.
Mat2 duan_source(const ChannelParams& params, double n_th)
{
    Mat2 D = Mat2::Zero();
    D(0, 0) = params.gamma / 2.0;
    D(1, 1) = (2.0 * n_th + 1.0) * params.Gamma;
    return D;
}

} // namespace

std::vector<double> linspace(double a, double b, int n)
{
    if (n < 1)
        throw ConfigError("grid needs at least one point");
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = a;
        return v;
    }
    for (int i = 0; i < n; ++i)
        v[i] = a + (b - a) * i / (n - 1);
    return v;
}

std::vector<double> default_eta_grid(double g, int points)
{
    if (!(g > 0))
        throw ConfigError("default eta grid needs g > 0");
    return linspace(0.0, 4.0 * constants::pi / (sqrt2 * g), points);
}

std::vector<double> default_delta_grid(double Gamma, double c_g, int points)
{
    return linspace(-20.0 * Gamma / c_g, 20.0 * Gamma / c_g, points);
}

ChannelSweep sweep_channel(const ChannelParams& params, const PumpEnvelope& envelope,
                           const std::vector<double>& eta_grid, const Mat2& D, Route route, double rel_tol)
{
    ChannelSweep out;
    out.eta = eta_grid;
    Mat2 G = Mat2::Identity();
    Mat2 N = Mat2::Zero();
    double cursor = 0;
    const bool has_noise = D.cwiseAbs().maxCoeff() > 0;
    for (double eta : eta_grid) {
        if (!(eta >= cursor))
            throw ConfigError("eta grid must be non-negative and ascending");
        for (const auto& piece : envelope.pieces(cursor, eta)) {
            ChannelParams p = with_g(params, piece.coupling);
            Mat2 E = expm_route(p, piece.duration, route);
            Mat2 J = Mat2::Zero();
            if (has_noise) {
                auto f = [&](double u) -> Mat2 {
                    Mat2 Eu = expm_route(p, u, route);
                    return Eu * D * Eu.adjoint();
                };
                auto norm = [](const Mat2& m) { return m.cwiseAbs().maxCoeff(); };
                J = detail::adaptive_simpson<Mat2>(f, norm, 0.0, piece.duration, rel_tol);
            }
            G = E * G;
            N = E * N * E.adjoint() + J;
        }
        cursor = eta;
        out.G.push_back(G);
        out.N.push_back(N);
    }
    return out;
}

TransferResult transfer_efficiency(const ChannelParams& params, const PumpEnvelope& envelope, double n_th,
                                   cplx beta0, const std::vector<double>& delta_grid,
                                   const std::vector<double>& eta_grid, ReadoutNoise noise, Route route)
{
    require_process(params, Process::anti_stokes, "transfer_efficiency");
    TransferResult r;
    r.delta = delta_grid;
    r.eta = eta_grid;
    const auto nd = delta_grid.size(), ne = eta_grid.size();
    r.beta_raw = r.beta_symmetrized = r.n_coherent = r.n_noise = make_grid(nd, ne);
    for (std::size_t i = 0; i < nd; ++i) {
        ChannelParams p = with_delta(params, delta_grid[i]);
        auto sweep = sweep_channel(p, envelope, eta_grid, phonon_source(p), route);
        for (std::size_t k = 0; k < ne; ++k) {
            auto t = transfer_from(sweep.G[k], sweep.N[k], n_th, beta0, noise);
            r.beta_raw(i, k) = t.beta_raw;
            r.beta_symmetrized(i, k) = t.beta_symmetrized;
            r.n_coherent(i, k) = t.n_coherent;
            r.n_noise(i, k) = t.n_noise;
        }
    }
    return r;
}

TransferPoint coherent_noise_split(const ChannelParams& params, const PumpEnvelope& envelope, double n_th,
                                   cplx beta0, double eta, ReadoutNoise noise)
{
    require_process(params, Process::anti_stokes, "coherent_noise_split");
    double n_eff = noise == ReadoutNoise::half ? n_th / 2.0 : n_th;
    auto init = make_moments(Process::anti_stokes, 0.0, 0.0, beta0, 0.0);
    auto m = evolve_moments(init, params, envelope, n_eff, eta);
    TransferPoint t;
    t.n_coherent = std::norm(m.mean(0));
    t.n_noise = std::max(0.0, normal_ordered(m, Process::anti_stokes).optical - t.n_coherent);
    double nb = std::norm(beta0);
    if (t.n_coherent > 0 && nb > 0)
        t.beta_raw = t.n_coherent * t.n_coherent / ((t.n_coherent + t.n_noise) * nb);
    t.beta_symmetrized = 2.0 * t.beta_raw;
    return t;
}

CoolingPoint cooling_rate(const ChannelParams& params, const PumpEnvelope& envelope, double eta)
{
    require_process(params, Process::anti_stokes, "cooling_rate");
    Mat2 G = propagator_time_ordered(envelope, params, eta).entries;
    Mat2 N = noise_integral(params, envelope, phonon_source(params), eta);
    CoolingPoint c;
    c.kappa_c = std::norm(G(1, 1));
    c.kappa_n = N(1, 1).real();
    c.kappa = c.kappa_c + c.kappa_n;
    return c;
}

CoolingResult cooling_spectrum(const ChannelParams& params, const PumpEnvelope& envelope,
                               const std::vector<double>& delta_grid, const std::vector<double>& eta_grid, Route route)
{
    require_process(params, Process::anti_stokes, "cooling_spectrum");
    CoolingResult r;
    r.delta = delta_grid;
    r.eta = eta_grid;
    const auto nd = delta_grid.size(), ne = eta_grid.size();
    r.kappa = r.kappa_c = r.kappa_n = make_grid(nd, ne);
    for (std::size_t i = 0; i < nd; ++i) {
        ChannelParams p = with_delta(params, delta_grid[i]);
        auto sweep = sweep_channel(p, envelope, eta_grid, phonon_source(p), route);
        for (std::size_t k = 0; k < ne; ++k) {
            r.kappa_c(i, k) = std::norm(sweep.G[k](1, 1));
            r.kappa_n(i, k) = sweep.N[k](1, 1).real();
            r.kappa(i, k) = r.kappa_c(i, k) + r.kappa_n(i, k);
        }
    }
    return r;
}

double cooling_closed_form(const ChannelParams& params, double eta)
{
    ChannelParams p = params;
    p.process = Process::anti_stokes;
    auto eff = effective_params(p);
    // (8 g_e^2 + Gamma_e^2)/(8 g_e^2) sin^2(x) == g^2 (sin(x)/g_e)^2, finite as g_e -> 0.
    cplx x = eff.g_e * eta / sqrt2;
    cplx sinc_term = std::abs(x) < 1e-3 ? (eta / sqrt2) * (1.0 - x * x / 6.0) : std::sin(x) / eff.g_e;
    cplx inner = std::exp(-eff.Gamma_e * eta / 2.0) * p.g * p.g * sinc_term * sinc_term;
    return 1.0 - std::abs(inner);
}

double rabi_pulse_length(double g, int n)
{
    if (!(g > 0))
        throw ConfigError("rabi_pulse_length: g must be positive");
    return (2 * n + 1) * constants::pi / (sqrt2 * g);
}

EntanglementPoint epr_variance(const ChannelParams& params, const PumpEnvelope& envelope, double n0, double n_th,
                               double eta, double alpha)
{
    require_process(params, Process::stokes, "epr_variance");
    if (!(alpha > 0))
        throw ConfigError("epr_variance: alpha must be positive");
    Mat2 G = propagator_time_ordered(envelope, params, eta).entries;
    Mat2 N = noise_integral(params, envelope, duan_source(params, n_th), eta);
    EntanglementPoint e;
    e.sigma2 = duan_from(G, N, n0, alpha);
    e.entangled = e.sigma2 < 1.0;
    return e;
}

double epr_variance_approx(const ChannelParams& params, double n0, double n_th, double eta)
{
    ChannelParams p = params;
    p.process = Process::stokes;
    auto eff = effective_params(p);
    auto Gfun = [&](double nu) {
        cplx x = eff.g_e * nu / sqrt2;
        cplx sinh_over = std::abs(x) < 1e-3 ? (nu / sqrt2) * (1.0 + x * x / 6.0) : std::sinh(x) / eff.g_e;
        return std::exp(-std::conj(eff.Gamma_e) * nu / 4.0) *
               (std::exp(-x) - eff.Gamma_e / (2.0 * sqrt2) * sinh_over);
    };
    double noise = 0;
    if (p.Gamma > 0 && eta > 0)
        noise = p.Gamma * detail::adaptive_simpson_scalar([&](double nu) { return std::norm(Gfun(nu)); }, 0.0, eta, 1e-10);
    return (1.0 + 2.0 * n0 / 3.0) * std::norm(Gfun(eta)) + (2.0 * n_th + 1.0) / 3.0 * noise;
}

EntanglementResult entanglement_spectrum(const ChannelParams& params, const PumpEnvelope& envelope, double n0,
                                         double n_th, const std::vector<double>& delta_grid,
                                         const std::vector<double>& eta_grid, double alpha, Route route)
{
    require_process(params, Process::stokes, "entanglement_spectrum");
    EntanglementResult r;
    r.delta = delta_grid;
    r.eta = eta_grid;
    r.alpha = alpha;
    const auto nd = delta_grid.size(), ne = eta_grid.size();
    r.sigma2 = r.sigma2_approx = make_grid(nd, ne);
    const bool rectangular = envelope.segments().size() == 1;
    for (std::size_t i = 0; i < nd; ++i) {
        ChannelParams p = with_delta(params, delta_grid[i]);
        auto sweep = sweep_channel(p, envelope, eta_grid, duan_source(p, n_th), route);
        for (std::size_t k = 0; k < ne; ++k) {
            r.sigma2(i, k) = duan_from(sweep.G[k], sweep.N[k], n0, alpha);
            r.sigma2_approx(i, k) = rectangular && eta_grid[k] <= envelope.total_duration()
                                        ? epr_variance_approx(with_g(p, envelope.segments()[0].coupling), n0,
                                                              n_th, eta_grid[k])
                                        : std::nan("");
        }
    }
    return r;
}

double duan_bandwidth(const ChannelParams& params, double n0, double n_th, double eta, double alpha)
{
    require_process(params, Process::stokes, "duan_bandwidth");
    auto env = PumpEnvelope::rectangular(params.g, std::max(eta, 1e-300));
    auto sigma2 = [&](double delta) {
        ChannelParams p = with_delta(params, delta);
        auto sweep = sweep_channel(p, env, {eta}, duan_source(p, n_th), Route::closed_form);
        return duan_from(sweep.G[0], sweep.N[0], n0, alpha);
    };
    if (!(sigma2(0.0) < 1.0))
        return 0.0;
    const double scale = std::max(params.g, params.Gamma) / params.c_g;
    const double step = scale / 40.0;
    auto edge = [&](double sign) {
        double inside = 0.0;
        for (int k = 1; k <= 4000; ++k) {
            double d = sign * k * step;
            if (sigma2(d) >= 1.0) {
                double lo = inside, hi = d;
                for (int it = 0; it < 60; ++it) {
                    double mid = 0.5 * (lo + hi);
                    (sigma2(mid) < 1.0 ? lo : hi) = mid;
                }
                return std::abs(0.5 * (lo + hi));
            }
            inside = d;
        }
        throw NumericalError("duan_bandwidth: no crossing found within 100 coupling widths");
    };
    return (edge(1.0) + edge(-1.0)) * params.c_g / params.Gamma;
}

StokesEstimate stokes_intensity_estimate(const WaveguideSpec& spec, double pump_power, double eta)
{
    if (!(eta >= 0))
        throw ConfigError("stokes_intensity_estimate: eta must be non-negative");
    double g = coupling_from_power(spec, pump_power);
    StokesEstimate s;
    s.intensity = std::exp(sqrt2 * g * eta) * g * constants::k_B * spec.temperature * spec.omega /
                  (2.0 * sqrt2 * constants::pi * spec.Omega);
    s.depletion_fraction = pump_power > 0 ? s.intensity / pump_power : INFINITY;
    if (g * eta < 2.0 || eta > 1.0 / spec.Gamma) {
        s.regime_ok = false;
        s.warning = "outside the strong-coupling short-pulse regime (needs g eta >= 2 and eta <= 1/Gamma)";
    }
    return s;
}

} // namespace bsbs
