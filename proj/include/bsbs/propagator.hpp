#pragma once

#include "bsbs/model.hpp"

#include <Eigen/Dense>

#include <complex>

namespace bsbs {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

enum class Process { stokes, anti_stokes };

const char* to_string(Process p);

// One wavevector channel. Delta is the wavevector offset from phase matching.
// The basis is v = (a, b) for anti-Stokes and v = (a, b^dag) for Stokes.
struct ChannelParams {
    double delta = 0; // rad/m
    Process process = Process::anti_stokes;
    double g = 0;     // rad/s
    double Gamma = 0; // rad/s
    double gamma = 0; // rad/s
    double c_g = 1;   // m/s
};

struct EffectiveParams {
    cplx g_e;
    cplx Gamma_e;
};

// g_e = sqrt(g^2 -+ Gamma_e^2/8) (anti-Stokes -, Stokes +), Gamma_e = Gamma + i c_g Delta,
// principal branch.
EffectiveParams effective_params(const ChannelParams& params);

enum class Provenance { closed_form, numeric_expm, time_ordered };

struct Propagator2 {
    Mat2 entries;
    double eta = 0;
    Provenance provenance = Provenance::numeric_expm;
};

Mat2 drift_matrix(const ChannelParams& params);

Propagator2 propagator_numeric(const Mat2& P, double eta);

// Closed form in terms of g_e and Gamma_e. The optical loss is carried exactly through
// Gamma' = Gamma - gamma/2 + i c_g Delta and an extra exp(-gamma eta/4); with
// gamma = 0 this is literally the g_e, Gamma_e expression. Requires
// gamma <= Gamma/10, otherwise throws ConfigError.
Propagator2 propagator_closed_form(const ChannelParams& params, double eta);

// Ordered product of per-segment exponentials, later segments on the left.
// params.g is ignored; the envelope supplies g(eta) (zero past its end).
Propagator2 propagator_time_ordered(const PumpEnvelope& envelope, const ChannelParams& params, double eta);

// G(eta2, eta1) for the same piecewise-constant envelope.
Mat2 propagator_between(const PumpEnvelope& envelope, const ChannelParams& params, double eta1, double eta2);

// Similarity to the basis (sqrt2 a, b) or (sqrt2 a, b^dag) in which the
// lossless propagator is unitary (anti-Stokes) or symplectic (Stokes).
Mat2 to_tilde(const Mat2& G);

// First and second moments, corr = <v v^dag> (full, not centred).
struct ChannelMoments {
    Vec2 mean = Vec2::Zero();
    Mat2 corr = Mat2::Zero();
};

// [v_i, v_j^dag]: diag(1/2, 1) for anti-Stokes, diag(1/2, -1) for Stokes.
// The 1/2 on the optical entry is the commutator of the light sampled along
// an eta = const line of the counter-propagating wave.
Mat2 commutator_matrix(Process process);

// Optical field in a coherent state with mean alpha and extra incoherent
// occupancy n_a; phonon coherent mean beta plus thermal occupancy n_b.
ChannelMoments make_moments(Process process, cplx alpha, double n_a, cplx beta, double n_b);

struct Occupancies {
    double optical = 0; // <a^dag a>
    double phonon = 0;  // <b^dag b>
};

Occupancies normal_ordered(const ChannelMoments& m, Process process);

// Diffusion matrix of the Langevin forcing: diag(gamma/4, Gamma d_b) with
// d_b = n_th + 1 (anti-Stokes, <xi xi^dag>) or n_th (Stokes, <xi^dag xi>).
// The gamma/4 entry is optical vacuum noise, which keeps the commutator
// matrix invariant when gamma > 0.
Mat2 noise_diffusion(const ChannelParams& params, double n_th);

ChannelMoments evolve_moments(const ChannelMoments& initial, const ChannelParams& params,
                              const PumpEnvelope& envelope, double n_th, double eta,
                              double rel_tol = 1e-8);

// \int_0^eta G(eta,nu) D G(eta,nu)^dag d nu.
Mat2 noise_integral(const ChannelParams& params, const PumpEnvelope& envelope, const Mat2& D,
                    double eta, double rel_tol = 1e-8);

// Commutator matrix propagated with the same machinery (source term
// diag(gamma/4, +-Gamma)); stays equal to commutator_matrix() when the noise
// convention is consistent.
Mat2 evolve_commutator(const ChannelParams& params, const PumpEnvelope& envelope, double eta,
                       double rel_tol = 1e-8);

} // namespace bsbs
