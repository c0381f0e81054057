#pragma once

#include <string>
#include <vector>

namespace bsbs {

namespace constants {
inline constexpr double hbar = 1.054571817e-34; // J s
inline constexpr double k_B = 1.380649e-23;     // J/K
inline constexpr double pi = 3.14159265358979323846;
} // namespace constants

// Phase-matched parameters of one waveguide platform, SI units.
//
// Gamma is the energy decay rate of the phonon envelope: at zero coupling
// <b^dag b> relaxes as exp(-Gamma t). The amplitude equations carry -Gamma/2.
struct WaveguideSpec {
    double length = 0;      // m
    double c_g = 0;         // optical group velocity, m/s
    double u_g = 0;         // acoustic group velocity, m/s
    double Gamma = 0;       // acoustic dissipation, rad/s
    double gamma = 0;       // optical dissipation, rad/s
    double gain = 0;        // Brillouin gain G, 1/(W m)
    double Omega = 0;       // phonon angular frequency, rad/s
    double omega = 0;       // optical angular frequency, rad/s
    double temperature = 0; // K

    // Throws ConfigError when an invariant is broken.
    void validate() const;
};

struct PulseSegment {
    double duration; // s
    double coupling; // rad/s
};

// Piecewise-constant effective coupling g(eta), eta = t - z/c_g.
// g is zero outside [0, total_duration()].
class PumpEnvelope {
public:
    PumpEnvelope() = default;
    explicit PumpEnvelope(std::vector<PulseSegment> segments);

    static PumpEnvelope rectangular(double coupling, double duration);

    const std::vector<PulseSegment>& segments() const { return segments_; }
    bool empty() const { return segments_.empty(); }
    double total_duration() const;
    double max_coupling() const;

    // g(eta); at a breakpoint the later segment wins.
    double coupling_at(double eta) const;
    // \int_a^b g(eta) d eta, exact for the piecewise-constant waveform.
    double area_between(double a, double b) const;
    // Segment boundaries inside (0, total_duration()).
    std::vector<double> breakpoints() const;
    // Constant-coupling pieces covering [a, b], including the g = 0 tail past
    // the end of the pulse.
    std::vector<PulseSegment> pieces(double a, double b) const;

    PumpEnvelope then(const PumpEnvelope& next) const;

private:
    std::vector<PulseSegment> segments_;
};

struct ThermalEnvironment {
    double n_th = 0;
    double n_0 = 0;
};

double thermal_occupation(double Omega, double temperature);

double coupling_from_power(const WaveguideSpec& spec, double pump_power);
double coupling_ratio(const WaveguideSpec& spec, double pump_power);
double pulse_area(const PumpEnvelope& envelope);

// Right-hand side of the undepleted-pump condition,
// (1/4) ln(32 pi^2 P Omega^2 / (G Gamma c_g k_B^2 T^2 omega^2)).
double undepleted_rhs(const WaveguideSpec& spec, double pump_power);

struct UndepletedMargin {
    double lhs = 0; // Theta / sqrt(2), equal to (sqrt2/2) g T for a rectangular pulse
    double rhs = 0;
    bool satisfied = false;
};

// Throws ConfigError("no undepleted window ...") when rhs <= 0.
UndepletedMargin undepleted_margin(const WaveguideSpec& spec, double pump_power,
                                   const PumpEnvelope& envelope, double margin_factor = 0.5);

// Flat `name = value` parameter file with `#` comments.
WaveguideSpec parse_params(const std::string& text, const std::string& source = "<string>");
WaveguideSpec read_params_file(const std::string& path);

} // namespace bsbs
