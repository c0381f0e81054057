#include "bsbs/model.hpp"

#include "bsbs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace bsbs {

namespace {

void require(bool ok, const std::string& what)
{
    if (!ok)
        throw ConfigError(what);
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0; }

} // namespace

void WaveguideSpec::validate() const
{
    require(finite_positive(length), "length_m must be positive");
    require(finite_positive(c_g), "c_g_m_per_s must be positive");
    require(std::isfinite(u_g) && u_g >= 0, "u_g_m_per_s must be non-negative");
    require(c_g > u_g, "optical group velocity must exceed the acoustic one");
    require(finite_positive(Gamma), "gamma_ac_rad_per_s must be positive");
    require(std::isfinite(gamma) && gamma >= 0, "gamma_opt_rad_per_s must be non-negative");
    require(finite_positive(gain), "gain_per_W_m must be positive");
    require(finite_positive(Omega), "Omega_rad_per_s must be positive");
    require(finite_positive(omega), "omega_rad_per_s must be positive");
    require(finite_positive(temperature), "temperature_K must be positive");
}

PumpEnvelope::PumpEnvelope(std::vector<PulseSegment> segments)
    : segments_(std::move(segments))
{
    for (const auto& s : segments_) {
        require(std::isfinite(s.duration) && s.duration > 0, "pulse segment durations must be positive");
        require(std::isfinite(s.coupling) && s.coupling >= 0, "pulse segment couplings must be non-negative");
    }
}

PumpEnvelope PumpEnvelope::rectangular(double coupling, double duration)
{
    return PumpEnvelope({{duration, coupling}});
}

double PumpEnvelope::total_duration() const
{
    double t = 0;
    for (const auto& s : segments_)
        t += s.duration;
    return t;
}

double PumpEnvelope::max_coupling() const
{
    double g = 0;
    for (const auto& s : segments_)
        g = std::max(g, s.coupling);
    return g;
}

double PumpEnvelope::coupling_at(double eta) const
{
    if (eta < 0)
        return 0;
    double start = 0;
    for (const auto& s : segments_) {
        if (eta < start + s.duration)
            return s.coupling;
        start += s.duration;
    }
    return 0;
}

double PumpEnvelope::area_between(double a, double b) const
{
    if (b <= a)
        return 0;
    double area = 0;
    double start = 0;
    for (const auto& s : segments_) {
        double lo = std::max(a, start);
        double hi = std::min(b, start + s.duration);
        if (hi > lo)
            area += (hi - lo) * s.coupling;
        start += s.duration;
        if (start >= b)
            break;
    }
    return area;
}

std::vector<double> PumpEnvelope::breakpoints() const
{
    std::vector<double> out;
    double start = 0;
    for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
        start += segments_[i].duration;
        out.push_back(start);
    }
    return out;
}

std::vector<PulseSegment> PumpEnvelope::pieces(double a, double b) const
{
    std::vector<PulseSegment> out;
    double start = 0;
    double cursor = a;
    for (const auto& s : segments_) {
        double end = start + s.duration;
        double lo = std::max(cursor, start);
        double hi = std::min(b, end);
        if (hi > lo) {
            out.push_back({hi - lo, s.coupling});
            cursor = hi;
        }
        start = end;
        if (cursor >= b)
            return out;
    }
    if (b > cursor)
        out.push_back({b - cursor, 0.0});
    return out;
}

PumpEnvelope PumpEnvelope::then(const PumpEnvelope& next) const
{
    auto segs = segments_;
    segs.insert(segs.end(), next.segments_.begin(), next.segments_.end());
    return PumpEnvelope(std::move(segs));
}

double thermal_occupation(double Omega, double temperature)
{
    if (!std::isfinite(Omega) || !std::isfinite(temperature))
        throw ConfigError("thermal_occupation: non-finite input");
    require(Omega > 0, "thermal_occupation: frequency must be positive");
    require(temperature >= 0, "thermal_occupation: temperature must be non-negative");
    if (temperature == 0)
        return 0;
    double x = constants::hbar * Omega / (constants::k_B * temperature);
    return 1.0 / std::expm1(x);
}

double coupling_from_power(const WaveguideSpec& spec, double pump_power)
{
    require(std::isfinite(pump_power) && pump_power >= 0, "pump power must be non-negative");
    return std::sqrt(spec.gain * pump_power * spec.Gamma * spec.c_g / 4.0);
}

double coupling_ratio(const WaveguideSpec& spec, double pump_power)
{
    return coupling_from_power(spec, pump_power) / spec.Gamma;
}

double pulse_area(const PumpEnvelope& envelope)
{
    double area = 0;
    for (const auto& s : envelope.segments())
        area += s.duration * s.coupling;
    return area;
}

double undepleted_rhs(const WaveguideSpec& spec, double pump_power)
{
    require(std::isfinite(pump_power) && pump_power > 0, "undepleted_rhs: pump power must be positive");
    const double pi = constants::pi;
    double kT = constants::k_B * spec.temperature;
    double num = 32.0 * pi * pi * pump_power * spec.Omega * spec.Omega;
    double den = spec.gain * spec.Gamma * spec.c_g * kT * kT * spec.omega * spec.omega;
    return 0.25 * std::log(num / den);
}

UndepletedMargin undepleted_margin(const WaveguideSpec& spec, double pump_power,
                                   const PumpEnvelope& envelope, double margin_factor)
{
    UndepletedMargin m;
    m.lhs = pulse_area(envelope) / std::sqrt(2.0);
    m.rhs = undepleted_rhs(spec, pump_power);
    if (!(m.rhs > 0)) {
        std::ostringstream os;
        os << "no undepleted window: depletion bound rhs = " << m.rhs << " is not positive";
        throw ConfigError(os.str());
    }
    m.satisfied = m.lhs < margin_factor * m.rhs;
    return m;
}

WaveguideSpec parse_params(const std::string& text, const std::string& source)
{
    static const char* const keys[] = {
        "length_m", "c_g_m_per_s", "u_g_m_per_s", "gamma_ac_rad_per_s", "gamma_opt_rad_per_s",
        "gain_per_W_m", "Omega_rad_per_s", "omega_rad_per_s", "temperature_K",
    };
    std::map<std::string, double> values;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw ConfigError(source + ":" + std::to_string(lineno) + ": " + msg);
    };
    auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t\r");
        auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            fail("expected `name = value`");
        std::string name = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (std::find(std::begin(keys), std::end(keys), name) == std::end(keys))
            fail("unknown key `" + name + "`");
        if (values.count(name))
            fail("duplicate key `" + name + "`");
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(value, &used);
        } catch (const std::exception&) {
            fail("value of `" + name + "` is not a number");
        }
        if (used != value.size() || !std::isfinite(v))
            fail("value of `" + name + "` is not a finite number");
        values[name] = v;
    }
    for (const char* k : keys)
        if (!values.count(k))
            throw ConfigError(source + ": missing key `" + std::string(k) + "`");

    WaveguideSpec spec;
    spec.length = values["length_m"];
    spec.c_g = values["c_g_m_per_s"];
    spec.u_g = values["u_g_m_per_s"];
    spec.Gamma = values["gamma_ac_rad_per_s"];
    spec.gamma = values["gamma_opt_rad_per_s"];
    spec.gain = values["gain_per_W_m"];
    spec.Omega = values["Omega_rad_per_s"];
    spec.omega = values["omega_rad_per_s"];
    spec.temperature = values["temperature_K"];
    try {
        spec.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(source + ": " + e.what());
    }
    return spec;
}

WaveguideSpec read_params_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read parameter file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_params(ss.str(), path);
}

} // namespace bsbs
