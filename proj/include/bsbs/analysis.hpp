#pragma once

#include "bsbs/model.hpp"
#include "bsbs/propagator.hpp"

#include <string>
#include <vector>

namespace bsbs {

enum class Route { closed_form, numeric_expm };

// Which noise prefactor feeds the readout noise N_a,n: the module-wide
// sqrt(Gamma) xi forcing, or the alternative sqrt(Gamma n_th / 2) one.
enum class ReadoutNoise { standardized, half };

std::vector<double> linspace(double a, double b, int n);
// 400 points over [0, 4 pi/(sqrt2 g)].
std::vector<double> default_eta_grid(double g, int points = 400);
// 401 points over c_g Delta in [-20 Gamma, 20 Gamma], returned as Delta in rad/m.
std::vector<double> default_delta_grid(double Gamma, double c_g, int points = 401);

// Row-major grid: value(i_delta, i_eta).
struct GridValues {
    std::size_t n_eta = 0;
    std::vector<double> data;
    double operator()(std::size_t i_delta, std::size_t i_eta) const { return data[i_delta * n_eta + i_eta]; }
    double& operator()(std::size_t i_delta, std::size_t i_eta) { return data[i_delta * n_eta + i_eta]; }
};

// G(eta_k, 0) and N(eta_k) = \int_0^eta_k G(eta_k,nu) D G(eta_k,nu)^dag d nu
// along an ascending eta grid, for one channel and a piecewise-constant envelope.
struct ChannelSweep {
    std::vector<double> eta;
    std::vector<Mat2> G;
    std::vector<Mat2> N;
};

ChannelSweep sweep_channel(const ChannelParams& params, const PumpEnvelope& envelope,
                           const std::vector<double>& eta_grid, const Mat2& D, Route route = Route::closed_form,
                           double rel_tol = 1e-8);

struct TransferPoint {
    double beta_raw = 0;
    double beta_symmetrized = 0;
    double n_coherent = 0;
    double n_noise = 0;
};

struct TransferResult {
    std::vector<double> delta;
    std::vector<double> eta;
    GridValues beta_raw, beta_symmetrized, n_coherent, n_noise;
};

// Anti-Stokes readout of a coherent phonon beta0 into initially empty light.
// beta_raw = N_ac^2 / ((N_ac + N_an) |beta0|^2) in the (a, b) basis;
// beta_symmetrized is the same ratio in the (sqrt2 a, b) basis (= 2 beta_raw).
TransferResult transfer_efficiency(const ChannelParams& params, const PumpEnvelope& envelope, double n_th,
                                   cplx beta0, const std::vector<double>& delta_grid,
                                   const std::vector<double>& eta_grid, ReadoutNoise noise = ReadoutNoise::standardized,
                                   Route route = Route::closed_form);

// Single point from evolve_moments; N_a,n = <a^dag a> - |<a>|^2.
TransferPoint coherent_noise_split(const ChannelParams& params, const PumpEnvelope& envelope, double n_th,
                                   cplx beta0, double eta, ReadoutNoise noise = ReadoutNoise::standardized);

struct CoolingPoint {
    double kappa = 1;
    double kappa_c = 1;
    double kappa_n = 0;
};

struct CoolingResult {
    std::vector<double> delta;
    std::vector<double> eta;
    GridValues kappa, kappa_c, kappa_n;
};

// kappa = |G22|^2 + Gamma \int |G22(eta,nu)|^2 d nu (anti-Stokes).
CoolingPoint cooling_rate(const ChannelParams& params, const PumpEnvelope& envelope, double eta);
CoolingResult cooling_spectrum(const ChannelParams& params, const PumpEnvelope& envelope,
                               const std::vector<double>& delta_grid, const std::vector<double>& eta_grid,
                               Route route = Route::closed_form);

// kappa ~ 1 - |exp(-Gamma_e eta/2) (8 g_e^2 + Gamma_e^2)/(8 g_e^2) sin^2(g_e eta/sqrt2)|
// for a rectangular pulse of coupling params.g.
double cooling_closed_form(const ChannelParams& params, double eta);

// eta = (2n+1) pi / (sqrt2 g).
double rabi_pulse_length(double g, int n = 0);

inline const double default_alpha = 0.8408964152537145; // 2^(-1/4)

struct EntanglementPoint {
    double sigma2 = 1;
    bool entangled = false;
};

struct EntanglementResult {
    std::vector<double> delta;
    std::vector<double> eta;
    double alpha = default_alpha;
    GridValues sigma2;
    GridValues sigma2_approx;
};

// Duan variance (var u + var v)/(alpha^2 + alpha^-2) with
// u = X_a/alpha + alpha Y_b, v = Y_a/alpha + alpha X_b, Stokes process.
// The optical vacuum is taken with unit commutator, as in the closed-form
// expression 1/3|sqrt2 G11 + i G21|^2 + ... that this reduces to at alpha = 2^(-1/4).
EntanglementPoint epr_variance(const ChannelParams& params, const PumpEnvelope& envelope, double n0, double n_th,
                               double eta, double alpha = default_alpha);
// The small-Gamma/g approximation (1 + 2 n0/3)|G(eta)|^2 + (2 n_th + 1)/3 Gamma \int |G|^2,
// rectangular pulse of coupling params.g, alpha = 2^(-1/4).
double epr_variance_approx(const ChannelParams& params, double n0, double n_th, double eta);

EntanglementResult entanglement_spectrum(const ChannelParams& params, const PumpEnvelope& envelope, double n0,
                                         double n_th, const std::vector<double>& delta_grid,
                                         const std::vector<double>& eta_grid, double alpha = default_alpha,
                                         Route route = Route::closed_form);

// Full width in c_g Delta / Gamma units of the interval around Delta = 0 where
// sigma^2 < 1, for a rectangular pulse of coupling params.g read out at eta.
// Returns 0 when Delta = 0 itself is not entangled.
double duan_bandwidth(const ChannelParams& params, double n0, double n_th, double eta,
                      double alpha = default_alpha);

struct StokesEstimate {
    double intensity = 0;          // W
    double depletion_fraction = 0; // I_S / I_P
    bool regime_ok = true;         // g eta >= 2 and eta <= 1/Gamma
    std::string warning;
};

// I_S ~ exp(sqrt2 g eta) g k_B T omega / (2 sqrt2 pi Omega), from the peak and
// width of the thermal Stokes spectrum.
StokesEstimate stokes_intensity_estimate(const WaveguideSpec& spec, double pump_power, double eta);

} // namespace bsbs
