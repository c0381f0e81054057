#include "bsbs/dynamics.hpp"

#include "bsbs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bsbs {

namespace {

constexpr cplx I(0.0, 1.0);
constexpr double overflow_guard = 1e150;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double initial_occupancy(const SimConfig& c) { return c.n_0 < 0 ? c.n_th : c.n_0; }

std::size_t total_steps(const SimConfig& c, const FieldGrid& grid) { return c.steps ? c.steps : grid.n_z; }

// \int_0^x \int_0^u g(s) ds du, exact for the piecewise-constant envelope.
double twice_integrated(const PumpEnvelope& env, double x)
{
    double total = 0, start = 0;
    for (const auto& s : env.segments()) {
        if (x <= start)
            break;
        double d = s.duration;
        double r = x - start;
        total += s.coupling * (r <= d ? r * r / 2 : d * d / 2 + d * (r - d));
        start += d;
    }
    return total;
}

} // namespace

double cell_coupling(const PumpEnvelope& envelope, double dt, std::size_t h)
{
    // eta = t - z/c_g over the cell x half-step rectangle fills a trapezoid of
    // width 3 dt/2; the mean of g over it is a second difference of the
    // twice-integrated envelope.
    auto F = [&](double x) { return twice_integrated(envelope, x * dt); };
    double x = 0.5 * static_cast<double>(h);
    return (F(x + 0.5) - F(x) - F(x - 0.5) + F(x - 1.0)) / (dt * dt / 2);
}

void FieldGrid::validate() const
{
    if (n_z == 0 || !(dz > 0) || !(dt > 0) || !(c_g > 0))
        throw ConfigError("field grid: empty or non-positive spacing");
    if (std::abs(dz - c_g * dt) > 1e-12 * dz)
        throw ConfigError("field grid: dz must equal c_g dt");
    if (a_sc.size() != n_z || b.size() != n_z || (deplete_pump && a_p.size() != n_z))
        throw ConfigError("field grid: array sizes do not match n_z");
    auto check = [](const std::vector<cplx>& v) {
        for (auto z : v)
            if (!finite(z))
                throw NumericalError("field grid: non-finite field value");
    };
    check(a_p);
    check(a_sc);
    check(b);
}

FieldGrid make_field_grid(const WaveguideSpec& spec, Process process, bool deplete_pump, double dt_max)
{
    spec.validate();
    if (!(dt_max > 0) || !std::isfinite(dt_max))
        throw ConfigError("time step must be positive");
    double cells = std::ceil(spec.length / (spec.c_g * dt_max) - 1e-9);
    if (cells > 5e8)
        throw ConfigError("time step too small: lattice would exceed 5e8 cells");
    auto n = static_cast<std::size_t>(std::max(1.0, cells));
    if (n % 2 == 0)
        ++n;
    FieldGrid g;
    g.process = process;
    g.deplete_pump = deplete_pump;
    g.n_z = n;
    g.dz = spec.length / static_cast<double>(n);
    g.c_g = spec.c_g;
    g.dt = g.dz / spec.c_g;
    g.a_sc.assign(n, 0.0);
    g.b.assign(n, 0.0);
    g.a_p.assign(deplete_pump ? n : 0, 0.0);
    return g;
}

double bare_coupling(const WaveguideSpec& spec)
{
    return std::sqrt(spec.gain * spec.Gamma * spec.c_g * spec.c_g * constants::hbar * spec.omega / 4.0);
}

PumpEnvelope rectangular_from_power(const WaveguideSpec& spec, double pump_power, double duration)
{
    return PumpEnvelope::rectangular(coupling_from_power(spec, pump_power), duration);
}

void check_resolution(const SimConfig& config, double dt)
{
    double fastest = std::max({config.envelope.max_coupling(), config.spec.Gamma,
                               config.spec.c_g * std::abs(config.delta_max)});
    if (fastest <= 0)
        return;
    double limit = 0.05 / fastest;
    if (dt > limit * (1 + 1e-9)) {
        std::ostringstream os;
        os << "time step " << dt << " s violates dt <= 0.05 min(1/g_max, 1/Gamma, 1/(c_g Delta_max)) = " << limit
           << " s";
        throw ConfigError(os.str());
    }
}

void initialize_thermal(FieldGrid& grid, double n_th, Rng& rng)
{
    if (!(n_th >= 0))
        throw ConfigError("initialize_thermal: n_th must be non-negative");
    double sigma = std::sqrt((n_th + 0.5) / grid.dz);
    for (auto& b : grid.b)
        b = sigma * rng.complex_normal();
}

Stepper::Stepper(const SimConfig& config, const FieldGrid& grid)
    : config_(config), dt_(grid.dt)
{
    const double dt = grid.dt;
    const double q = dt / 4;
    const auto& spec = config.spec;
    if (config.deplete_pump)
        g0_ = bare_coupling(spec);
    std::size_t m = static_cast<std::size_t>(std::ceil(2 * config.envelope.total_duration() / dt)) + 3;
    if (config.envelope.empty())
        m = 0;
    half_slices_.resize(m);
    for (std::size_t h = 0; h < m; ++h)
        half_slices_[h] = cell_coupling(config.envelope, dt, h);

    b_decay_ = std::exp(-spec.Gamma * q / 2);
    a_decay_ = std::exp(-spec.gamma * q / 2);
    if (config.noise) {
        b_kick_ = std::sqrt((config.n_th + 0.5) * -std::expm1(-spec.Gamma * q) / grid.dz);
        a_kick_ = std::sqrt(0.5 * -std::expm1(-spec.gamma * q) / grid.dz);
        vacuum_sigma_ = std::sqrt(0.5 / grid.dz);
        thermal_sigma_ = std::sqrt((config.n_th + 0.5) / grid.dz);
    }
}

double Stepper::half_slice_coupling(std::ptrdiff_t h) const
{
    if (h < 0 || static_cast<std::size_t>(h) >= half_slices_.size())
        return 0.0;
    return half_slices_[h];
}

cplx Stepper::pump_injection(std::size_t n) const
{
    // Packet n passes a cell centre while the pump age there runs over [(n - 1) dt, n dt].
    if (n == 0)
        return 0.0;
    double t = static_cast<double>(n) * dt_;
    return config_.envelope.area_between(t - dt_, t) / dt_ / g0_;
}

void Stepper::decay_quarter(FieldGrid& grid, std::size_t lo, std::size_t hi, Rng& rng)
{
    for (std::size_t j = lo; j < hi; ++j) {
        grid.b[j] *= b_decay_;
        if (b_kick_ > 0)
            grid.b[j] += b_kick_ * rng.complex_normal();
        grid.a_sc[j] *= a_decay_;
        if (a_kick_ > 0)
            grid.a_sc[j] += a_kick_ * rng.complex_normal();
    }
    if (grid.deplete_pump)
        for (std::size_t j = lo; j < hi; ++j)
            grid.a_p[j] *= a_decay_;
}

void Stepper::couple(FieldGrid& grid, std::size_t n, int half, std::size_t lo, std::size_t hi)
{
    const double tau = grid.dt / 2;
    const bool stokes = grid.process == Process::stokes;
    if (!grid.deplete_pump) {
        const std::size_t m = half_slices_.size();
        std::size_t back = (m + 1 - static_cast<std::size_t>(half)) / 2; // cells with h < m
        std::size_t first = n + 1 > back ? n + 1 - back : 0;
        first = std::max(first, lo);
        std::size_t last = std::min(hi, n + 1);
        for (std::size_t j = first; j < last; ++j) {
            double g = half_slices_[2 * (n - j) + static_cast<std::size_t>(half)];
            if (g == 0)
                continue;
            // Implicit midpoint for the linear 2x2 flow (Cayley transform).
            double th = g * tau / 2;
            double th2 = th * th;
            cplx a = grid.a_sc[j], b = grid.b[j];
            if (stokes) {
                double s1 = (1 + th2) / (1 - th2), s2 = 2 * th / (1 - th2);
                grid.a_sc[j] = s1 * a - I * s2 * std::conj(b);
                grid.b[j] = s1 * b - I * s2 * std::conj(a);
            } else {
                double c1 = (1 - th2) / (1 + th2), c2 = 2 * th / (1 + th2);
                grid.a_sc[j] = c1 * a - I * c2 * b;
                grid.b[j] = c1 * b - I * c2 * a;
            }
        }
        return;
    }
    // Three-wave implicit midpoint, fixed-point iteration on the midpoint state.
    const double k = g0_ * tau / 2;
    for (std::size_t j = lo; j < hi; ++j) {
        const cplx p0 = grid.a_p[j], s0 = grid.a_sc[j], b0 = grid.b[j];
        if (p0 == 0.0 && (s0 == 0.0 || b0 == 0.0))
            continue;
        cplx p = p0, s = s0, b = b0;
        double scale = std::abs(p0) + std::abs(s0) + std::abs(b0);
        for (int it = 0;; ++it) {
            cplx pn, sn, bn;
            if (stokes) {
                pn = p0 - I * k * s * b;
                sn = s0 - I * k * p * std::conj(b);
                bn = b0 - I * k * p * std::conj(s);
            } else {
                pn = p0 - I * k * s * std::conj(b);
                sn = s0 - I * k * p * b;
                bn = b0 - I * k * std::conj(p) * s;
            }
            double change = std::abs(pn - p) + std::abs(sn - s) + std::abs(bn - b);
            p = pn;
            s = sn;
            b = bn;
            if (change <= 1e-15 * scale)
                break;
            if (it > 200)
                throw NumericalError("depleted-pump midpoint iteration did not converge; reduce dt");
        }
        grid.a_p[j] = 2.0 * p - p0;
        grid.a_sc[j] = 2.0 * s - s0;
        grid.b[j] = 2.0 * b - b0;
    }
}

void Stepper::react_half(FieldGrid& grid, std::size_t n, int half, std::size_t lo, std::size_t hi, Rng& rng)
{
    decay_quarter(grid, lo, hi, rng);
    couple(grid, n, half, lo, hi);
    decay_quarter(grid, lo, hi, rng);
}

void Stepper::step(FieldGrid& grid, std::size_t n, Rng& rng, FluxLedger& flux, cplx* out_sc, cplx* out_p)
{
    const std::size_t N = grid.n_z;
    std::size_t lo = 0, hi = N;
    const std::size_t band = config_.comoving_band;
    if (band) {
        lo = n + 1 > band ? n + 1 - band : 0;
        hi = std::min(N, n + 1);
        if (lo >= hi)
            return;
    }
    // Strang splitting around the exact advection.
    react_half(grid, n, 0, lo, hi, rng);

    const double dz = grid.dz;
    // Backscattered wave moves one cell towards z = 0.
    cplx leaving = grid.a_sc[lo];
    if (lo == 0) {
        flux.sc_out += std::norm(leaving) * dz;
        if (out_sc)
            *out_sc = leaving;
    }
    std::copy(grid.a_sc.begin() + lo + 1, grid.a_sc.begin() + hi, grid.a_sc.begin() + lo);
    cplx incoming = 0.0;
    if (hi == N && config_.seed_field)
        incoming += config_.seed_field((n + 1) * grid.dt);
    if (vacuum_sigma_ > 0)
        incoming += vacuum_sigma_ * rng.complex_normal();
    grid.a_sc[hi - 1] = incoming;
    if (hi == N)
        flux.sc_in += std::norm(incoming) * dz;

    if (grid.deplete_pump) {
        cplx out = grid.a_p[N - 1];
        flux.pump_out += std::norm(out) * dz;
        if (out_p)
            *out_p = out;
        std::copy_backward(grid.a_p.begin(), grid.a_p.end() - 1, grid.a_p.end());
        grid.a_p[0] = pump_injection(n + 1);
        flux.pump_in += std::norm(grid.a_p[0]) * dz;
    }

    react_half(grid, n, 1, lo, hi, rng);
}

ShotRecord simulate_shot(const SimConfig& config, std::uint64_t shot)
{
    FieldGrid grid = make_field_grid(config.spec, config.process, config.deplete_pump, config.dt);
    check_resolution(config, grid.dt);
    if (!(config.n_th >= 0))
        throw ConfigError("n_th must be non-negative");
    const std::size_t N = grid.n_z;
    const std::size_t steps = total_steps(config, grid);
    const std::size_t band = config.comoving_band;
    if (band) {
        if (!config.noise || config.deplete_pump || config.initial_state || initial_occupancy(config) != config.n_th)
            throw ConfigError("comoving band needs noise on, no depletion, no initial-state hook and n_0 == n_th");
    }

    Rng rng(config.seed, shot);
    Stepper stepper(config, grid);
    ShotRecord rec;
    rec.shot = shot;

    if (!band && config.noise) {
        initialize_thermal(grid, initial_occupancy(config), rng);
        double sigma = std::sqrt(0.5 / grid.dz);
        for (auto& a : grid.a_sc)
            a = sigma * rng.complex_normal();
    }
    if (config.initial_state)
        config.initial_state(grid);
    if (grid.deplete_pump) {
        grid.a_p[0] = stepper.pump_injection(0);
        rec.flux.pump_in += std::norm(grid.a_p[0]) * grid.dz;
    }

    for (auto k : config.record.comoving_lines) {
        ComovingLine line;
        line.index = k;
        line.a_sc.assign(N, std::numeric_limits<double>::quiet_NaN());
        line.b.assign(N, std::numeric_limits<double>::quiet_NaN());
        rec.lines.push_back(std::move(line));
    }
    if (config.record.outflow) {
        rec.outflow_sc.assign(steps, 0.0);
        if (grid.deplete_pump)
            rec.outflow_p.assign(steps, 0.0);
    }

    const double thermal_sigma = std::sqrt((config.n_th + 0.5) / grid.dz);
    const double vacuum_sigma = std::sqrt(0.5 / grid.dz);
    auto capture = [&](std::size_t n) {
        for (auto s : config.record.snapshot_steps)
            if (s == n)
                rec.snapshots.push_back(grid);
        for (auto& line : rec.lines) {
            if (n < line.index)
                continue;
            std::size_t j = n - line.index;
            if (j < N) {
                line.b[j] = grid.b[j];
                line.a_sc[j] = grid.a_sc[j];
            }
        }
    };

    for (std::size_t n = 0; n < steps; ++n) {
        if (band && n < N) {
            grid.b[n] = thermal_sigma * rng.complex_normal();
            grid.a_sc[n] = vacuum_sigma * rng.complex_normal();
        }
        capture(n);
        cplx* out_sc = config.record.outflow ? &rec.outflow_sc[n] : nullptr;
        cplx* out_p = config.record.outflow && grid.deplete_pump ? &rec.outflow_p[n] : nullptr;
        stepper.step(grid, n, rng, rec.flux, out_sc, out_p);
        if ((n & 63) == 63 || n + 1 == steps) {
            std::size_t lo = band ? (n + 1 > band ? n + 1 - band : 0) : 0;
            std::size_t hi = band ? std::min(N, n + 1) : N;
            for (std::size_t j = lo; j < hi; ++j) {
                double m = std::max(std::abs(grid.b[j]), std::abs(grid.a_sc[j]));
                if (!(m < overflow_guard)) {
                    std::ostringstream os;
                    os << "field blow-up at step " << n << ", cell " << j << " (|field| = " << m << ")";
                    throw NumericalError(os.str());
                }
            }
        }
    }
    capture(steps);
    rec.final = std::move(grid);
    return rec;
}

std::vector<ShotRecord> run(const SimConfig& config)
{
    if (config.shots < 1)
        throw ConfigError("shots must be at least 1");
    return parallel_map<ShotRecord>(config.shots, config.threads,
                                    [&](std::size_t i) { return simulate_shot(config, i); });
}

double pump_depletion(const ShotRecord& rec, const SimConfig& config)
{
    if (!(rec.flux.pump_in > 0))
        throw ConfigError("pump_depletion: no pump was injected");
    double transmission = std::exp(-config.spec.gamma * config.spec.length / config.spec.c_g);
    return 1.0 - rec.flux.pump_out / (rec.flux.pump_in * transmission);
}

} // namespace bsbs
