#pragma once

#include "bsbs/model.hpp"
#include "bsbs/propagator.hpp"
#include "bsbs/rng.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace bsbs {

// Characteristic lattice: cell j covers [j dz, (j+1) dz], dz = c_g dt.
// Fields are envelopes in sqrt(quanta per metre). In the undepleted mode
// a_p is unused and the coupling comes from the envelope; with depletion a_p
// carries the pump and the coupling is g0 a_p.
struct FieldGrid {
    Process process = Process::anti_stokes;
    bool deplete_pump = false;
    std::size_t n_z = 0;
    double dz = 0;
    double dt = 0;
    double c_g = 0;
    std::vector<cplx> a_p, a_sc, b;

    void validate() const;
};

// N_z is odd so that the spatial Fourier grid is symmetric about Delta = 0;
// dt is the largest step <= dt_max compatible with that.
FieldGrid make_field_grid(const WaveguideSpec& spec, Process process, bool deplete_pump, double dt_max);

struct RecordSpec {
    // Copies of the grid at the start of these steps (step n starts at t = n dt;
    // n = steps gives the final state).
    std::vector<std::size_t> snapshot_steps;
    // Co-moving line k: phonon and light of cell j at the start of step k + j,
    // pump age (k - 1/2) dt at the cell centre. See line_spectrum.
    std::vector<std::size_t> comoving_lines;
    // Scattered packets leaving z = 0 and pump packets leaving z = L, per step.
    bool outflow = false;
};

// Photon-number bookkeeping, sum |field|^2 dz over injected / ejected packets.
struct FluxLedger {
    double pump_in = 0, pump_out = 0;
    double sc_in = 0, sc_out = 0;
};

struct ComovingLine {
    std::size_t index = 0;
    std::vector<cplx> a_sc, b;
};

struct ShotRecord {
    std::uint64_t shot = 0;
    FieldGrid final;
    std::vector<FieldGrid> snapshots;
    std::vector<ComovingLine> lines;
    std::vector<cplx> outflow_sc, outflow_p;
    FluxLedger flux;
};

struct SimConfig {
    WaveguideSpec spec;
    Process process = Process::anti_stokes;
    // Coupling waveform g(eta). With deplete_pump the injected pump amplitude
    // is g(eta)/g0 (see rectangular_from_power).
    PumpEnvelope envelope;
    bool deplete_pump = false;
    double n_th = 0;
    double n_0 = -1; // initial phonon occupancy; negative means n_th
    bool noise = true;
    std::uint64_t seed = 1;
    std::size_t shots = 1;
    double dt = 0;            // upper bound; the lattice may use a slightly smaller step
    std::size_t steps = 0;    // 0 means one transit, t = L/c_g
    double delta_max = 0;     // largest |Delta| of interest (rad/m), enters the dt check
    // Nonzero: evolve only cells with 0 <= n - j < comoving_band (the strip
    // behind the pump front). Cells are drawn from the stationary pre-pulse
    // state when the front reaches them, which is exact in distribution when
    // n_0 == n_th and the light ahead of the pump is vacuum.
    std::size_t comoving_band = 0;
    std::function<cplx(double t)> seed_field;            // backscattered input at z = L
    std::function<void(FieldGrid&)> initial_state;       // replaces the random initial fields
    RecordSpec record;
    unsigned threads = 0; // 0: hardware concurrency
};

// Bare coupling g0 = sqrt(G Gamma c_g^2 hbar omega / 4), so that g0 |a_p| equals
// coupling_from_power when |a_p|^2 = P / (hbar omega c_g).
double bare_coupling(const WaveguideSpec& spec);
PumpEnvelope rectangular_from_power(const WaveguideSpec& spec, double pump_power, double duration);

// Throws ConfigError if dt violates dt <= 0.05 min(1/g_max, 1/Gamma, 1/(c_g Delta_max)).
void check_resolution(const SimConfig& config, double dt);

void initialize_thermal(FieldGrid& grid, double n_th, Rng& rng);

// Mean coupling over cell j during half-step `half` of step n, with
// h = 2 (n - j) + half. The pump front crosses the centre of cell j at
// t = (j + 1/2) dt.
double cell_coupling(const PumpEnvelope& envelope, double dt, std::size_t h);

// One dt, Strang split around the exact advection: half a step of local
// reaction, advection with boundary injection, half a step of reaction. Each
// reaction half is a quarter-step exact decay and noise, implicit-midpoint
// coupling over dt/2 with cell_coupling(), and another quarter-step decay.
class Stepper {
public:
    explicit Stepper(const SimConfig& config, const FieldGrid& grid);

    // Advances from t_n to t_{n+1}.
    void step(FieldGrid& grid, std::size_t n, Rng& rng, FluxLedger& flux, cplx* out_sc, cplx* out_p);

    // cell_coupling for index h, zero outside the pulse.
    double half_slice_coupling(std::ptrdiff_t h) const;
    // Pump amplitude injected at the start of step n in the depletion mode.
    cplx pump_injection(std::size_t n) const;

private:
    void decay_quarter(FieldGrid& grid, std::size_t lo, std::size_t hi, Rng& rng);
    void couple(FieldGrid& grid, std::size_t n, int half, std::size_t lo, std::size_t hi);
    void react_half(FieldGrid& grid, std::size_t n, int half, std::size_t lo, std::size_t hi, Rng& rng);

    const SimConfig& config_;
    double dt_ = 0;
    double g0_ = 0;
    std::vector<double> half_slices_;
    double b_decay_ = 1, b_kick_ = 0;
    double a_decay_ = 1, a_kick_ = 0;
    double vacuum_sigma_ = 0;
    double thermal_sigma_ = 0;
};

ShotRecord simulate_shot(const SimConfig& config, std::uint64_t shot);

// All shots in shot order (parallel across shots).
std::vector<ShotRecord> run(const SimConfig& config);

// Applies fn to each shot in parallel and returns the results in shot order.
template <class R>
std::vector<R> map_shots(const SimConfig& config, const std::function<R(const ShotRecord&)>& fn);

// --- spatial spectra --------------------------------------------------------

// Delta_k = 2 pi k / W for k = -(n-1)/2 .. (n-1)/2, W = n dz; n must be odd.
std::vector<double> spectrum_grid(std::size_t n_window, double dz);

// x_k = (1/W) sum_j f_j dz exp(-i Delta_k z_j), z_j = (j + 1/2) dz, over all
// bins (FFT). Parseval: sum_k |x_k|^2 = (1/W) sum_j |f_j|^2 dz.
std::vector<cplx> field_spectrum(const cplx* f, std::size_t n_window, double dz);
enum class Taper { none, hann };

// Same transform restricted to |k| <= k_max (direct sums), optionally tapered.
// With a taper w_j, x_k = sum w_j f_j dz e^{-i Delta_k z_j} / sum w_j dz, so a
// uniform field keeps its amplitude; occupancies then use effective_window().
// With oversample > 1 the bins are Delta_k = 2 pi k / (oversample W), which
// samples the window transform between the natural bins.
std::vector<cplx> field_spectrum_bins(const cplx* f, std::size_t n_window, double dz, int k_max,
                                      Taper taper = Taper::none, int oversample = 1);
// (sum w dz)^2 / sum w^2 dz, equal to n dz without a taper. White noise of
// variance s/dz per cell gives effective_window * <|x_k|^2> = s.
double effective_window(std::size_t n_window, double dz, Taper taper);

// Ensemble statistics per Delta bin. Occupancies are W <|x|^2> minus the
// vacuum half quantum of the estimator.
struct SpectrumResult {
    std::vector<double> delta;
    std::size_t shots = 0;
    std::vector<cplx> mean_a, mean_b;
    std::vector<double> occupancy_a, stderr_a;
    std::vector<double> occupancy_b, stderr_b;
    std::vector<cplx> cross;              // W <a~ conj(partner)>, partner = b~ (anti-Stokes) or conj b~(-Delta) (Stokes)
    std::vector<double> stderr_cross_abs; // standard error of |cross|
};

struct ShotSpectrum {
    std::vector<cplx> a, b; // per-bin amplitudes, k = -k_max .. k_max
};

// `vac_a`, `vac_b` are the per-bin vacuum levels of the two estimators in
// W |x|^2 units.
SpectrumResult reduce_spectra(const std::vector<ShotSpectrum>& shots, const std::vector<double>& delta, double window,
                              Process process, const std::vector<double>& vac_a, const std::vector<double>& vac_b);

// Spectra at eta = k dt over cells [0, n_window). Each field is the mean of
// lines k and k+1 at the same cell, which is second order in dt; a single
// line is off by O(g dt) with a sign that alternates with k.
ShotSpectrum line_spectrum(const ShotRecord& rec, std::size_t k, std::size_t n_window, double dz, int k_max,
                           Taper taper = Taper::hann);
// Commutator between the two samples averaged by line_spectrum, relative to
// one sample. The phonon samples are one cell one step apart (close to 1);
// the light samples are distinct packets linked only through the phonon
// (O((g dt)^2)).
double line_carry(const SimConfig& config, double dt, std::size_t k, bool phonon);
// Vacuum levels of the two estimators in W |x|^2 units.
double line_light_vacuum(double carry);
double line_phonon_vacuum(double carry);

// Largest odd window for line_spectrum at line k. Light on line k + 1 at cell
// j met the pump front at cell j + (k+1)/2; past z = L the finite fiber
// differs from an infinite one.
std::size_t line_window(std::size_t n_z, std::size_t k);

// Records lines k and k+1 over enough steps, runs all shots and reduces the
// light/phonon spectra at eta = k dt for |bin| <= k_max. The default Hann
// taper keeps the flat thermal background at large |Delta| from leaking into
// the central bins through the sinc^2 sidelobes of a rectangular window.
SpectrumResult ensemble_line_spectrum(const SimConfig& config, std::size_t k, int k_max, std::size_t window_cells = 0,
                                      Taper taper = Taper::hann);

struct KappaSpectrum {
    std::vector<double> delta;
    std::vector<double> kappa, stderr;
    std::size_t shots = 0;
    std::string warning;
};

enum class KappaReadout {
    lab_snapshot, // whole fiber at t = L/c_g versus t = 0
    comoving,     // co-moving lines at eta = k dt versus eta = 0 (needs comoving_band)
};

// Ratio of post- to pre-pulse vacuum-subtracted phonon occupancy per bin.
// For the comoving readout `comoving_index` is k >= 1. `oversample` refines the
// Delta grid as in field_spectrum_bins; k_max counts refined bins.
KappaSpectrum ensemble_kappa(const SimConfig& config, KappaReadout readout, int k_max,
                             std::size_t comoving_index = 0, std::size_t window_cells = 0, int oversample = 1);

// 1 - pump_out / (pump_in exp(-gamma L / c_g)).
double pump_depletion(const ShotRecord& rec, const SimConfig& config);

// --- binary record -----------------------------------------------------------

struct RecordHeader {
    std::uint32_t version = 1;
    std::uint64_t n_z = 0;
    double dz = 0, dt = 0;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
};

// Header then, per shot, a_p, a_sc, b as interleaved little-endian float32 pairs.
void write_record(const std::string& path, const RecordHeader& header, const std::vector<ShotRecord>& shots);
RecordHeader read_record(const std::string& path, std::vector<std::vector<std::complex<float>>>* fields = nullptr);

} // namespace bsbs

#include "bsbs/dynamics_impl.hpp"
