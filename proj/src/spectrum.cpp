#include "bsbs/dynamics.hpp"

#include "bsbs/errors.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace bsbs {

namespace {

std::mutex fftw_planner_mutex;

void require_odd(std::size_t n)
{
    if (n == 0 || n % 2 == 0)
        throw ConfigError("spectrum window must contain an odd number of cells");
}

struct Moments {
    CompensatedSum s, s2;
    void add(double x)
    {
        s.add(x);
        s2.add(x * x);
    }
    double mean(double n) const { return s.value() / n; }
    double stderr_(double n) const
    {
        if (n < 2)
            return 0.0;
        double m = mean(n);
        double var = std::max(0.0, (s2.value() - n * m * m) / (n - 1));
        return std::sqrt(var / n);
    }
};

} // namespace

std::vector<double> spectrum_grid(std::size_t n_window, double dz)
{
    require_odd(n_window);
    const double W = n_window * dz;
    const auto K = static_cast<std::ptrdiff_t>(n_window / 2);
    std::vector<double> d;
    for (std::ptrdiff_t k = -K; k <= K; ++k)
        d.push_back(2.0 * constants::pi * static_cast<double>(k) / W);
    return d;
}

std::vector<cplx> field_spectrum(const cplx* f, std::size_t n_window, double dz)
{
    require_odd(n_window);
    const int n = static_cast<int>(n_window);
    std::vector<cplx> in(f, f + n_window), out(n_window);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex);
        plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                                reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex);
        fftw_destroy_plan(plan);
    }
    const double W = n_window * dz;
    const int K = n / 2;
    std::vector<cplx> x(n_window);
    for (int k = -K; k <= K; ++k) {
        double delta = 2.0 * constants::pi * k / W;
        // Cell centres sit at (j + 1/2) dz.
        x[k + K] = (dz / W) * std::polar(1.0, -delta * dz / 2) * out[(k + n) % n];
    }
    return x;
}

namespace {

std::vector<double> taper_weights(std::size_t n, Taper taper)
{
    std::vector<double> w(n, 1.0);
    if (taper == Taper::hann)
        for (std::size_t j = 0; j < n; ++j) {
            double s = std::sin(constants::pi * (j + 0.5) / static_cast<double>(n));
            w[j] = s * s;
        }
    return w;
}

} // namespace

std::vector<cplx> field_spectrum_bins(const cplx* f, std::size_t n_window, double dz, int k_max, Taper taper,
                                      int oversample)
{
    require_odd(n_window);
    if (oversample < 1)
        throw ConfigError("spectral oversampling must be at least 1");
    if (k_max < 0 || static_cast<std::size_t>(k_max) > oversample * (n_window / 2))
        throw ConfigError("requested spectral bins exceed the window resolution");
    const double W = oversample * n_window * dz;
    const auto w = taper_weights(n_window, taper);
    double norm = 0;
    for (double v : w)
        norm += v * dz;
    std::vector<cplx> x;
    for (int k = -k_max; k <= k_max; ++k) {
        double delta = 2.0 * constants::pi * k / W;
        cplx acc = 0.0;
        for (std::size_t j = 0; j < n_window; ++j)
            acc += w[j] * f[j] * std::polar(1.0, -delta * (j + 0.5) * dz);
        x.push_back(acc * (dz / norm));
    }
    return x;
}

double effective_window(std::size_t n_window, double dz, Taper taper)
{
    const auto w = taper_weights(n_window, taper);
    double s1 = 0, s2 = 0;
    for (double v : w) {
        s1 += v * dz;
        s2 += v * v * dz;
    }
    return s1 * s1 / s2;
}

SpectrumResult reduce_spectra(const std::vector<ShotSpectrum>& shots, const std::vector<double>& delta, double window,
                              Process process, const std::vector<double>& vac_a, const std::vector<double>& vac_b)
{
    SpectrumResult r;
    r.delta = delta;
    r.shots = shots.size();
    const std::size_t nb = delta.size();
    const double n = static_cast<double>(shots.size());
    if (shots.empty())
        throw ConfigError("reduce_spectra: no shots");
    if (vac_a.size() != nb || vac_b.size() != nb)
        throw ConfigError("reduce_spectra: vacuum levels must be given per bin");
    for (std::size_t k = 0; k < nb; ++k) {
        Moments ar, ai, br, bi, pa, pb, cr, ci;
        for (const auto& s : shots) {
            if (s.a.size() != nb || s.b.size() != nb)
                throw ConfigError("reduce_spectra: bin count mismatch");
            ar.add(s.a[k].real());
            ai.add(s.a[k].imag());
            br.add(s.b[k].real());
            bi.add(s.b[k].imag());
            pa.add(window * std::norm(s.a[k]));
            pb.add(window * std::norm(s.b[k]));
            cplx partner = process == Process::anti_stokes ? std::conj(s.b[k]) : s.b[nb - 1 - k];
            cplx c = window * s.a[k] * partner;
            cr.add(c.real());
            ci.add(c.imag());
        }
        r.mean_a.emplace_back(ar.mean(n), ai.mean(n));
        r.mean_b.emplace_back(br.mean(n), bi.mean(n));
        r.occupancy_a.push_back(pa.mean(n) - vac_a[k]);
        r.stderr_a.push_back(pa.stderr_(n));
        r.occupancy_b.push_back(pb.mean(n) - vac_b[k]);
        r.stderr_b.push_back(pb.stderr_(n));
        r.cross.emplace_back(cr.mean(n), ci.mean(n));
        r.stderr_cross_abs.push_back(std::hypot(cr.stderr_(n), ci.stderr_(n)));
    }
    return r;
}

ShotSpectrum line_spectrum(const ShotRecord& rec, std::size_t k, std::size_t n_window, double dz, int k_max,
                           Taper taper)
{
    const ComovingLine* line[2] = {nullptr, nullptr};
    for (const auto& l : rec.lines)
        if (l.index == k || l.index == k + 1)
            line[l.index - k] = &l;
    if (!line[0] || !line[1])
        throw ConfigError("line_spectrum: co-moving lines k and k+1 must be recorded");
    if (n_window > line[0]->b.size())
        throw ConfigError("line_spectrum: window longer than the line");
    std::vector<cplx> a(n_window), b(n_window);
    for (std::size_t j = 0; j < n_window; ++j) {
        a[j] = 0.5 * (line[0]->a_sc[j] + line[1]->a_sc[j]);
        b[j] = 0.5 * (line[0]->b[j] + line[1]->b[j]);
        if (!std::isfinite(a[j].real()) || !std::isfinite(b[j].real()))
            throw ConfigError("line_spectrum: line not filled over the window; run more steps");
    }
    ShotSpectrum s;
    s.b = field_spectrum_bins(b.data(), n_window, dz, k_max, taper);
    s.a = field_spectrum_bins(a.data(), n_window, dz, k_max, taper);
    return s;
}

double line_carry(const SimConfig& config, double dt, std::size_t k, bool phonon)
{
    const bool stokes = config.process == Process::stokes;
    auto th = [&](std::size_t h) { return cell_coupling(config.envelope, dt, h) * dt / 4; };
    if (phonon) {
        // Same cell one step later, half-steps 2k and 2k+1.
        auto c1 = [&](double t) { return stokes ? (1 + t * t) / (1 - t * t) : (1 - t * t) / (1 + t * t); };
        return std::exp(-config.spec.Gamma * dt / 2) * c1(th(2 * k)) * c1(th(2 * k + 1));
    }
    // The light samples are two packets that meet the same phonon cell in
    // consecutive half-steps; the later one inherits -c2 c2' (Stokes +s2 s2')
    // of the earlier one through that phonon.
    auto c2 = [&](double t) { return stokes ? 2 * t / (1 - t * t) : 2 * t / (1 + t * t); };
    double link = c2(th(2 * k)) * c2(th(2 * k + 1)) * std::exp(-(config.spec.Gamma + config.spec.gamma) * dt / 4);
    return stokes ? link : -link;
}

double line_light_vacuum(double carry) { return 0.25 * (1.0 + carry); }

double line_phonon_vacuum(double carry) { return 0.25 * (1.0 + carry); }

std::size_t line_window(std::size_t n_z, std::size_t k)
{
    std::size_t reach = (k + 1) / 2 + 2;
    if (n_z <= reach + 1)
        throw ConfigError("co-moving line too far out for this fiber length");
    std::size_t n = n_z - reach;
    return n % 2 ? n : n - 1;
}

SpectrumResult ensemble_line_spectrum(const SimConfig& config, std::size_t k, int k_max, std::size_t window_cells,
                                      Taper taper)
{
    SimConfig c = config;
    FieldGrid probe = make_field_grid(c.spec, c.process, c.deplete_pump, c.dt);
    std::size_t window = window_cells ? window_cells : line_window(probe.n_z, k);
    if (window >= probe.n_z)
        throw ConfigError("line spectrum window exceeds the fiber");
    c.record.comoving_lines = {k, k + 1};
    c.record.snapshot_steps.clear();
    // Line k + 1 is complete over cells [0, window) at the start of step k + window.
    c.steps = std::max(c.steps, k + window + 1);
    if (c.comoving_band && c.comoving_band < k + 2)
        c.comoving_band = k + 2;
    std::function<ShotSpectrum(const ShotRecord&)> fn = [&](const ShotRecord& rec) {
        return line_spectrum(rec, k, window, probe.dz, k_max, taper);
    };
    auto shots = map_shots<ShotSpectrum>(c, fn);
    auto grid = spectrum_grid(window, probe.dz);
    const std::size_t K = window / 2;
    std::vector<double> delta(grid.begin() + (K - k_max), grid.begin() + (K + k_max + 1));
    double carry_a = line_carry(c, probe.dt, k, false);
    double carry_b = line_carry(c, probe.dt, k, true);
    std::vector<double> vac_a(delta.size(), line_light_vacuum(carry_a));
    std::vector<double> vac_b(delta.size(), line_phonon_vacuum(carry_b));
    return reduce_spectra(shots, delta, effective_window(window, probe.dz, taper), c.process, vac_a, vac_b);
}

KappaSpectrum ensemble_kappa(const SimConfig& config, KappaReadout readout, int k_max, std::size_t comoving_index,
                             std::size_t window_cells, int oversample)
{
    SimConfig c = config;
    FieldGrid probe = make_field_grid(c.spec, c.process, c.deplete_pump, c.dt);
    const std::size_t N = probe.n_z;
    std::size_t window = N;
    if (readout == KappaReadout::lab_snapshot) {
        std::size_t steps = c.steps ? c.steps : N;
        c.record.snapshot_steps = {0, steps};
    } else {
        if (!c.comoving_band)
            throw ConfigError("comoving kappa readout needs comoving_band");
        if (comoving_index == 0)
            throw ConfigError("comoving kappa readout needs a positive line index");
        c.record.comoving_lines = {0, 1, comoving_index, comoving_index + 1};
        window = window_cells ? window_cells : line_window(N, comoving_index);
        if (window % 2 == 0)
            --window;
        c.steps = std::max(c.steps, comoving_index + window + 1);
        c.comoving_band = std::max(c.comoving_band, comoving_index + 2);
    }
    // Vacuum of the phonon estimator: a single snapshot holds 1/2; the
    // two-line mean of the co-moving readout holds (1 + carry)/4.
    double vac_pre = 0.5, vac_post = 0.5;
    if (readout == KappaReadout::comoving) {
        vac_pre = line_phonon_vacuum(line_carry(c, probe.dt, 0, true));
        vac_post = line_phonon_vacuum(line_carry(c, probe.dt, comoving_index, true));
    }

    struct Pair {
        std::vector<double> before, after;
    };
    std::function<Pair(const ShotRecord&)> fn = [&](const ShotRecord& rec) {
        std::vector<cplx> pre, post;
        if (readout == KappaReadout::lab_snapshot) {
            pre = rec.snapshots.at(0).b;
            post = rec.snapshots.at(1).b;
        } else {
            pre.resize(window);
            post.resize(window);
            for (std::size_t j = 0; j < window; ++j) {
                pre[j] = 0.5 * (rec.lines.at(0).b[j] + rec.lines.at(1).b[j]);
                post[j] = 0.5 * (rec.lines.at(2).b[j] + rec.lines.at(3).b[j]);
            }
        }
        auto x0 = field_spectrum_bins(pre.data(), window, probe.dz, k_max, Taper::none, oversample);
        auto x1 = field_spectrum_bins(post.data(), window, probe.dz, k_max, Taper::none, oversample);
        const double W = window * probe.dz;
        Pair p;
        for (std::size_t i = 0; i < x0.size(); ++i) {
            p.before.push_back(W * std::norm(x0[i]) - vac_pre);
            p.after.push_back(W * std::norm(x1[i]) - vac_post);
        }
        return p;
    };
    auto pairs = map_shots<Pair>(c, fn);

    KappaSpectrum out;
    out.shots = pairs.size();
    if (out.shots < 100)
        out.warning = "fewer than 100 shots: standard errors are unreliable";
    const double W = window * probe.dz;
    const double n = static_cast<double>(out.shots);
    for (int k = -k_max; k <= k_max; ++k) {
        std::size_t i = static_cast<std::size_t>(k + k_max);
        out.delta.push_back(2.0 * constants::pi * k / (oversample * W));
        CompensatedSum sx, sy, sxx, syy, sxy;
        for (const auto& p : pairs) {
            double x = p.after[i], y = p.before[i];
            sx.add(x);
            sy.add(y);
            sxx.add(x * x);
            syy.add(y * y);
            sxy.add(x * y);
        }
        double mx = sx.value() / n, my = sy.value() / n;
        double vx = (sxx.value() - n * mx * mx) / (n - 1);
        double vy = (syy.value() - n * my * my) / (n - 1);
        double cxy = (sxy.value() - n * mx * my) / (n - 1);
        double kap = mx / my;
        double var = (vx / (my * my) - 2 * mx * cxy / (my * my * my) + mx * mx * vy / (my * my * my * my)) / n;
        out.kappa.push_back(kap);
        out.stderr.push_back(std::sqrt(std::max(0.0, var)));
    }
    return out;
}

} // namespace bsbs
