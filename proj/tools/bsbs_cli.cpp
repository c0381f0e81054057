#include "bsbs/analysis.hpp"
#include "bsbs/dynamics.hpp"
#include "bsbs/errors.hpp"
#include "bsbs/model.hpp"
#include "bsbs/output.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace bsbs;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Common {
    std::string params;
    std::string out_dir = "out";
    unsigned threads = 0;
};

struct Pump {
    std::optional<double> power;
    std::optional<double> g_over_gamma;
};

struct Grids {
    std::optional<double> delta;
    std::optional<double> eta;
    std::optional<double> eta_rabi;
    int delta_points = 401;
    double delta_span = 20; // c_g Delta / Gamma in [-span, span]
    int eta_points = 400;
    double eta_max_rabi = 4; // eta in [0, eta_max_rabi pi/(sqrt2 g)]
};

std::string read_text(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw ConfigError("cannot read parameter file " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

struct Loaded {
    WaveguideSpec spec;
    std::string hash;
};

Loaded load(const Common& common)
{
    std::string text = read_text(common.params);
    return {parse_params(text, common.params), fnv1a_hex(text)};
}

double coupling(const WaveguideSpec& spec, const Pump& pump)
{
    if (pump.power && pump.g_over_gamma)
        throw ConfigError("give either --power or --g-over-gamma, not both");
    if (pump.g_over_gamma) {
        if (!(*pump.g_over_gamma >= 0))
            throw ConfigError("--g-over-gamma must be non-negative");
        return *pump.g_over_gamma * spec.Gamma;
    }
    return coupling_from_power(spec, pump.power.value_or(1.0));
}

std::vector<double> delta_grid(const WaveguideSpec& spec, const Grids& grids)
{
    if (grids.delta)
        return {*grids.delta};
    if (grids.delta_points < 1 || !(grids.delta_span > 0))
        throw ConfigError("invalid Delta grid");
    if (grids.delta_points == 1)
        return {0.0};
    std::vector<double> out;
    for (double x : linspace(-grids.delta_span, grids.delta_span, grids.delta_points))
        out.push_back(x * spec.Gamma / spec.c_g);
    return out;
}

std::vector<double> eta_grid(double g, const Grids& grids)
{
    if (grids.eta && grids.eta_rabi)
        throw ConfigError("give either --eta or --eta-pi-over-sqrt2-g, not both");
    if (grids.eta) {
        if (!(*grids.eta >= 0))
            throw ConfigError("--eta must be non-negative");
        return {*grids.eta};
    }
    if (!(g > 0))
        throw ConfigError("an eta grid needs g > 0; give --eta explicitly");
    if (grids.eta_rabi) {
        if (!(*grids.eta_rabi >= 0))
            throw ConfigError("--eta-pi-over-sqrt2-g must be non-negative");
        return {*grids.eta_rabi * rabi_pulse_length(g)};
    }
    if (grids.eta_points < 2 || !(grids.eta_max_rabi > 0))
        throw ConfigError("invalid eta grid");
    return linspace(0, grids.eta_max_rabi * rabi_pulse_length(g), grids.eta_points);
}

std::vector<double> scaled(const std::vector<double>& x, double s)
{
    std::vector<double> out;
    for (double v : x)
        out.push_back(v * s);
    return out;
}

json grids_json(const std::vector<double>& delta, const std::vector<double>& eta)
{
    return {{"delta_points", delta.size()}, {"delta_min", delta.front()}, {"delta_max", delta.back()},
            {"eta_points", eta.size()},     {"eta_min", eta.front()},     {"eta_max", eta.back()}};
}

class Run {
public:
    Run(const Common& common, const std::string& command, const Loaded& loaded)
        : start_(std::chrono::steady_clock::now())
    {
        manifest_.command = command;
        manifest_.params_file = fs::absolute(common.params).string();
        manifest_.params_hash = loaded.hash;
        dir_ = make_run_dir(common.out_dir, command, loaded.hash);
    }

    RunManifest& manifest() { return manifest_; }
    fs::path path(const std::string& name)
    {
        manifest_.outputs.push_back(name);
        return dir_ / name;
    }
    // Writes the JSON summary, which names the manifest, then the manifest.
    void finish(json summary)
    {
        summary["manifest"] = "manifest.json";
        write_json(path("summary.json"), summary);
        manifest_.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        write_json(dir_ / "manifest.json", manifest_.to_json());
        std::cout << dir_.string() << '\n';
    }

private:
    std::chrono::steady_clock::time_point start_;
    RunManifest manifest_;
    fs::path dir_;
};

// Location of the extremum of a grid row at Delta closest to zero.
std::size_t zero_row(const std::vector<double>& delta)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < delta.size(); ++i)
        if (std::abs(delta[i]) < std::abs(delta[best]))
            best = i;
    return best;
}

std::size_t arg_extremum(const GridValues& v, std::size_t row, std::size_t n_eta, bool max)
{
    std::size_t best = 0;
    for (std::size_t k = 1; k < n_eta; ++k)
        if (max ? v(row, k) > v(row, best) : v(row, k) < v(row, best))
            best = k;
    return best;
}

void add_pump_options(CLI::App* app, Pump& pump)
{
    app->add_option("--power", pump.power, "Pump power in W (default 1)");
    app->add_option("--g-over-gamma", pump.g_over_gamma, "Coupling g in units of Gamma (instead of --power)");
}

void add_grid_options(CLI::App* app, Grids& grids)
{
    app->add_option("--delta", grids.delta, "Single Delta in rad/m instead of a grid");
    app->add_option("--delta-points", grids.delta_points, "Number of Delta grid points")->capture_default_str();
    app->add_option("--delta-span", grids.delta_span, "Delta grid covers c_g Delta/Gamma in [-span, span]")
        ->capture_default_str();
    app->add_option("--eta", grids.eta, "Single eta in s instead of a grid");
    app->add_option("--eta-pi-over-sqrt2-g", grids.eta_rabi, "Single eta in units of pi/(sqrt2 g)");
    app->add_option("--eta-points", grids.eta_points, "Number of eta grid points")->capture_default_str();
    app->add_option("--eta-max", grids.eta_max_rabi, "eta grid covers [0, eta_max pi/(sqrt2 g)]")
        ->capture_default_str();
}

void record_flags(RunManifest& m, const Pump& pump, double g, double n_th)
{
    if (pump.power)
        m.flags["power"] = *pump.power;
    if (pump.g_over_gamma)
        m.flags["g_over_gamma"] = *pump.g_over_gamma;
    m.flags["g"] = g;
    m.flags["n_th"] = n_th;
}

int cmd_params(const Common& common, const std::vector<double>& powers)
{
    auto loaded = load(common);
    const auto& spec = loaded.spec;
    Run out(common, "params", loaded);
    const double n_th = thermal_occupation(spec.Omega, spec.temperature);
    std::printf("n_th = %.6g\n", n_th);
    std::printf("%12s %14s %10s %10s %10s\n", "P_W", "g_rad_per_s", "g/Gamma", "lhs", "rhs");
    std::ofstream csv(out.path("couplings.csv"));
    csv << "power_W,g_rad_per_s,g_over_Gamma,lhs_pi_pulse,rhs\r\n";
    for (double p : powers) {
        double g = coupling_from_power(spec, p);
        // lhs for the pi/2 pulse at this power, Theta/sqrt2 = pi/2.
        double lhs = g > 0 ? pulse_area(PumpEnvelope::rectangular(g, rabi_pulse_length(g))) / std::sqrt(2.0) : 0;
        double rhs = p > 0 ? undepleted_rhs(spec, p) : NAN;
        std::printf("%12.6g %14.6g %10.4f %10.4f %10.4f\n", p, g, g / spec.Gamma, lhs, rhs);
        csv << format_double(p) << ',' << format_double(g) << ',' << format_double(g / spec.Gamma) << ','
            << format_double(lhs) << ',' << format_double(rhs) << "\r\n";
    }
    if (!csv)
        throw ConfigError("cannot write couplings.csv");
    out.manifest().flags["power"] = powers;
    json summary = {{"n_th", n_th},
                    {"g_over_gamma_1w", coupling_ratio(spec, 1.0)},
                    {"rhs_1w", undepleted_rhs(spec, 1.0)},
                    {"transit_time_s", spec.length / spec.c_g}};
    std::printf("g/Gamma(1 W) = %.4f, rhs(1 W) = %.4f\n", summary["g_over_gamma_1w"].get<double>(),
                summary["rhs_1w"].get<double>());
    out.finish(summary);
    return 0;
}

ChannelParams channel(const WaveguideSpec& spec, Process process, double g)
{
    ChannelParams p;
    p.process = process;
    p.g = g;
    p.Gamma = spec.Gamma;
    p.gamma = spec.gamma;
    p.c_g = spec.c_g;
    return p;
}

int cmd_transfer(const Common& common, const Pump& pump, const Grids& grids, std::optional<double> n_th_flag,
                 double beta0)
{
    auto loaded = load(common);
    const auto& spec = loaded.spec;
    const double g = coupling(spec, pump);
    const double n_th = n_th_flag.value_or(1.0);
    auto delta = delta_grid(spec, grids);
    auto eta = eta_grid(g, grids);
    auto params = channel(spec, Process::anti_stokes, g);
    // A pulse long enough to cover the whole eta grid.
    auto env = PumpEnvelope::rectangular(g, eta.back() + 1.0 / spec.Gamma);
    auto r = transfer_efficiency(params, env, n_th, beta0, delta, eta);

    Run out(common, "transfer", loaded);
    auto& m = out.manifest();
    record_flags(m, pump, g, n_th);
    m.flags["beta0"] = beta0;
    m.grids = grids_json(delta, eta);
    auto cd = scaled(delta, spec.c_g / spec.Gamma);
    auto ge = scaled(eta, g / constants::pi);
    write_grid_csv(out.path("beta_raw.csv"), cd, ge, r.beta_raw);
    write_grid_csv(out.path("beta_symmetrized.csv"), cd, ge, r.beta_symmetrized);
    write_grid_csv(out.path("n_coherent.csv"), cd, ge, r.n_coherent);
    write_grid_csv(out.path("n_noise.csv"), cd, ge, r.n_noise);

    std::size_t row = zero_row(delta);
    std::size_t k = arg_extremum(r.beta_raw, row, eta.size(), true);
    json summary = {{"g", g},
                    {"g_over_gamma", g / spec.Gamma},
                    {"delta_at_summary", delta[row]},
                    {"argmax_eta_s", eta[k]},
                    {"argmax_eta_over_rabi", g > 0 ? eta[k] / rabi_pulse_length(g) : NAN},
                    {"beta_raw_max", r.beta_raw(row, k)},
                    {"beta_symmetrized_max", r.beta_symmetrized(row, k)},
                    {"eta_grid_step_s", eta.size() > 1 ? eta[1] - eta[0] : 0.0}};
    out.finish(summary);
    return 0;
}

int cmd_cool(const Common& common, const Pump& pump, const Grids& grids)
{
    auto loaded = load(common);
    const auto& spec = loaded.spec;
    const double g = coupling(spec, pump);
    auto delta = delta_grid(spec, grids);
    auto eta = eta_grid(g, grids);
    auto params = channel(spec, Process::anti_stokes, g);
    auto env = PumpEnvelope::rectangular(g, eta.back() + 1.0 / spec.Gamma);
    auto r = cooling_spectrum(params, env, delta, eta);

    Run out(common, "cool", loaded);
    auto& m = out.manifest();
    record_flags(m, pump, g, thermal_occupation(spec.Omega, spec.temperature));
    m.grids = grids_json(delta, eta);
    auto cd = scaled(delta, spec.c_g / spec.Gamma);
    auto ge = scaled(eta, g / constants::pi);
    write_grid_csv(out.path("kappa.csv"), cd, ge, r.kappa);
    write_grid_csv(out.path("kappa_coherent.csv"), cd, ge, r.kappa_c);
    write_grid_csv(out.path("kappa_noise.csv"), cd, ge, r.kappa_n);

    std::size_t row = zero_row(delta);
    std::size_t k = arg_extremum(r.kappa, row, eta.size(), false);
    json summary = {{"g", g},
                    {"g_over_gamma", g / spec.Gamma},
                    {"delta_at_summary", delta[row]},
                    {"argmin_eta_s", eta[k]},
                    {"argmin_eta_over_rabi", g > 0 ? eta[k] / rabi_pulse_length(g) : NAN},
                    {"kappa_min", r.kappa(row, k)},
                    {"eta_grid_step_s", eta.size() > 1 ? eta[1] - eta[0] : 0.0}};
    if (eta.size() == 1 && delta.size() == 1)
        std::printf("kappa = %.6g\n", r.kappa(0, 0));
    out.finish(summary);
    return 0;
}

int cmd_entangle(const Common& common, const Pump& pump, const Grids& grids, std::optional<double> n_th_flag,
                 double n0, double alpha)
{
    auto loaded = load(common);
    const auto& spec = loaded.spec;
    const double g = coupling(spec, pump);
    const double n_th = n_th_flag.value_or(thermal_occupation(spec.Omega, spec.temperature));
    auto delta = delta_grid(spec, grids);
    auto eta = eta_grid(g, grids);
    auto params = channel(spec, Process::stokes, g);
    auto env = PumpEnvelope::rectangular(g, eta.back() + 1.0 / spec.Gamma);
    auto r = entanglement_spectrum(params, env, n0, n_th, delta, eta, alpha);

    Run out(common, "entangle", loaded);
    auto& m = out.manifest();
    record_flags(m, pump, g, n_th);
    m.flags["n0"] = n0;
    m.flags["alpha"] = alpha;
    m.grids = grids_json(delta, eta);
    auto cd = scaled(delta, spec.c_g / spec.Gamma);
    auto ge = scaled(eta, g / constants::pi);
    write_grid_csv(out.path("sigma2.csv"), cd, ge, r.sigma2);
    write_grid_csv(out.path("sigma2_approx.csv"), cd, ge, r.sigma2_approx);

    std::size_t row = zero_row(delta);
    std::size_t k = arg_extremum(r.sigma2, row, eta.size(), false);
    // First eta on the Delta = 0 row where the Duan bound is crossed.
    double crossing = NAN;
    for (std::size_t i = 0; i < eta.size(); ++i)
        if (r.sigma2(row, i) < 1) {
            crossing = eta[i];
            break;
        }
    json summary = {{"g", g},
                    {"g_over_gamma", g / spec.Gamma},
                    {"delta_at_summary", delta[row]},
                    {"argmin_eta_s", eta[k]},
                    {"sigma2_min", r.sigma2(row, k)},
                    {"first_duan_crossing_eta_s", crossing},
                    {"duan_bandwidth_at_argmin", g > 0 ? duan_bandwidth(params, n0, n_th, eta[k], alpha) : 0.0}};
    if (eta.size() == 1 && delta.size() == 1)
        std::printf("sigma2 = %.6g\n", r.sigma2(0, 0));
    out.finish(summary);
    return 0;
}

struct SimFlags {
    std::string process = "anti-stokes";
    double pulse_rabi = 1; // pulse length in pi/(sqrt2 g)
    std::optional<double> n_th;
    std::size_t shots = 400;
    std::uint64_t seed = 1;
    std::optional<double> dt;
    std::optional<double> length;
    bool deplete = false;
    std::string readout = "lab";
    int k_max = 10;
    std::size_t line = 0;
    std::size_t band = 0;
    int oversample = 1;
    bool record = false;
};

int cmd_simulate(const Common& common, const Pump& pump, const SimFlags& f)
{
    auto loaded = load(common);
    SimConfig c;
    c.spec = loaded.spec;
    if (f.length) {
        c.spec.length = *f.length;
        c.spec.validate();
    }
    if (f.process == "anti-stokes")
        c.process = Process::anti_stokes;
    else if (f.process == "stokes")
        c.process = Process::stokes;
    else
        throw ConfigError("--process must be stokes or anti-stokes");
    const double g = coupling(c.spec, pump);
    if (!(g > 0))
        throw ConfigError("simulate needs a nonzero pump");
    if (!(f.pulse_rabi > 0))
        throw ConfigError("--pulse must be positive");
    const double duration = f.pulse_rabi * rabi_pulse_length(g);
    // Inverse of coupling_from_power when only g/Gamma was given.
    const double power = pump.power ? *pump.power : 4 * g * g / (c.spec.gain * c.spec.Gamma * c.spec.c_g);
    if (f.deplete)
        c.envelope = rectangular_from_power(c.spec, power, duration);
    else
        c.envelope = PumpEnvelope::rectangular(g, duration);
    c.deplete_pump = f.deplete;
    c.n_th = f.n_th.value_or(thermal_occupation(c.spec.Omega, c.spec.temperature));
    c.shots = f.shots;
    c.seed = f.seed;
    c.threads = common.threads;
    c.dt = f.dt.value_or(0.05 * std::min(1.0 / g, 1.0 / c.spec.Gamma));
    c.comoving_band = f.band;
    if (f.shots == 0)
        throw ConfigError("--shots must be positive");
    // Fails before any work when dt is too coarse.
    auto probe = make_field_grid(c.spec, c.process, c.deplete_pump, c.dt);
    check_resolution(c, probe.dt);

    KappaReadout readout;
    if (f.readout == "lab")
        readout = KappaReadout::lab_snapshot;
    else if (f.readout == "comoving")
        readout = KappaReadout::comoving;
    else
        throw ConfigError("--readout must be lab or comoving");
    std::size_t line = f.line ? f.line : static_cast<std::size_t>(std::lround(duration / probe.dt));
    if (readout == KappaReadout::comoving && !c.comoving_band)
        c.comoving_band = line + 2;

    Run out(common, "simulate", loaded);
    auto& m = out.manifest();
    record_flags(m, pump, g, c.n_th);
    m.seed = f.seed;
    m.flags["process"] = f.process;
    m.flags["pulse_pi_over_sqrt2_g"] = f.pulse_rabi;
    m.flags["shots"] = f.shots;
    m.flags["deplete"] = f.deplete;
    m.flags["length"] = c.spec.length;
    m.flags["readout"] = f.readout;
    m.flags["k_max"] = f.k_max;
    m.flags["oversample"] = f.oversample;
    m.grids = {{"n_z", probe.n_z}, {"dz", probe.dz}, {"dt", probe.dt}};

    auto kappa = ensemble_kappa(c, readout, f.k_max, line, 0, f.oversample);
    write_kappa_csv(out.path("kappa.csv"), kappa);
    std::size_t mid = kappa.delta.size() / 2;
    json summary = {{"g", g},
                    {"g_over_gamma", g / c.spec.Gamma},
                    {"n_z", probe.n_z},
                    {"dt", probe.dt},
                    {"shots", kappa.shots},
                    {"kappa_0", kappa.kappa[mid]},
                    {"kappa_0_stderr", kappa.stderr[mid]}};
    if (!kappa.warning.empty()) {
        summary["warning"] = kappa.warning;
        std::cerr << "warning: " << kappa.warning << '\n';
    }
    std::printf("kappa(0) = %.4f +- %.4f\n", kappa.kappa[mid], kappa.stderr[mid]);

    if (f.record || f.deplete) {
        SimConfig rc = c;
        rc.record.outflow = f.deplete;
        // Depletion compares everything injected with everything that left,
        // so run until the pulse tail is out of the fiber.
        if (f.deplete)
            rc.steps = probe.n_z + static_cast<std::size_t>(std::ceil(duration / probe.dt)) + 1;
        auto shots = bsbs::run(rc);
        if (f.record) {
            RecordHeader h;
            h.n_z = probe.n_z;
            h.dz = probe.dz;
            h.dt = probe.dt;
            h.shots = shots.size();
            h.seed = f.seed;
            write_record(out.path("fields.bpw").string(), h, shots);
        }
        if (f.deplete) {
            double sum = 0;
            for (const auto& s : shots)
                sum += pump_depletion(s, rc);
            double mean = sum / shots.size();
            summary["pump_depletion"] = mean;
            summary["depletion_flag"] = mean > 0.1;
            std::printf("pump depletion = %.4f%s\n", mean, mean > 0.1 ? " (above 10%)" : "");
        }
    }
    out.finish(summary);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Backward Brillouin scattering pulse calculations and simulations"};
    app.require_subcommand(1);
    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--params", common.params, "Waveguide parameter file")->required();
        sub->add_option("--out-dir", common.out_dir, "Output root; runs go to <root>/<command>/<stamp>-<hash>/")
            ->capture_default_str();
        sub->add_option("--threads", common.threads, "Worker threads, 0 for all cores")->capture_default_str();
    };

    auto* params = app.add_subcommand("params", "Derived quantities of a parameter file");
    add_common(params);
    std::vector<double> powers{0, 0.1, 0.5, 1, 2, 5, 10};
    params->add_option("--power", powers, "Pump powers in W for the g(P) table")->capture_default_str();

    Pump pump;
    Grids grids;
    std::optional<double> n_th;

    auto* transfer = app.add_subcommand("transfer", "Coherent phonon-to-photon transfer efficiency beta(Delta, eta)");
    add_common(transfer);
    add_pump_options(transfer, pump);
    add_grid_options(transfer, grids);
    transfer->add_option("--n-th", n_th, "Thermal occupancy (default 1)");
    double beta0 = 1;
    transfer->add_option("--beta0", beta0, "Coherent phonon amplitude |beta0|")->capture_default_str();

    auto* cool = app.add_subcommand("cool", "Cooling ratio kappa(Delta, eta)");
    add_common(cool);
    add_pump_options(cool, pump);
    add_grid_options(cool, grids);

    auto* entangle = app.add_subcommand("entangle", "EPR variance sigma^2(Delta, eta) of the Stokes pair");
    add_common(entangle);
    add_pump_options(entangle, pump);
    add_grid_options(entangle, grids);
    entangle->add_option("--n-th", n_th, "Thermal occupancy (default from the parameter file)");
    double n0 = 0, alpha = default_alpha;
    entangle->add_option("--n0", n0, "Initial phonon occupancy")->capture_default_str();
    entangle->add_option("--alpha", alpha, "Duan weight alpha")->capture_default_str();

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo field simulation and cooling spectrum");
    add_common(simulate);
    add_pump_options(simulate, pump);
    SimFlags sim;
    simulate->add_option("--process", sim.process, "stokes or anti-stokes")->capture_default_str();
    simulate->add_option("--pulse", sim.pulse_rabi, "Pulse length in pi/(sqrt2 g)")->capture_default_str();
    simulate->add_option("--n-th", sim.n_th, "Thermal occupancy (default from the parameter file)");
    simulate->add_option("--shots", sim.shots, "Number of shots")->capture_default_str();
    simulate->add_option("--seed", sim.seed, "Base seed")->capture_default_str();
    simulate->add_option("--dt", sim.dt, "Upper bound on the time step in s (default 0.05 min(1/g, 1/Gamma))");
    simulate->add_option("--length", sim.length, "Fiber length in m (overrides the parameter file)");
    simulate->add_flag("--deplete", sim.deplete, "Evolve the pump (three-wave mixing) and report depletion");
    simulate->add_option("--readout", sim.readout, "lab (snapshot at t = L/c_g) or comoving")->capture_default_str();
    simulate->add_option("--k-max", sim.k_max, "Spectrum bins |k| <= k_max")->capture_default_str();
    simulate->add_option("--oversample", sim.oversample, "Delta grid refinement of the kappa spectrum")
        ->capture_default_str();
    simulate->add_option("--line", sim.line, "Co-moving line index (default: end of the pulse)");
    simulate->add_option("--band", sim.band, "Co-moving band width in cells (0: whole fiber)");
    simulate->add_flag("--record", sim.record, "Also write the binary field record");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*params)
            return cmd_params(common, powers);
        if (*transfer)
            return cmd_transfer(common, pump, grids, n_th, beta0);
        if (*cool)
            return cmd_cool(common, pump, grids);
        if (*entangle)
            return cmd_entangle(common, pump, grids, n_th, n0, alpha);
        if (*simulate)
            return cmd_simulate(common, pump, sim);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
