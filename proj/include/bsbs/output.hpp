#pragma once

#include "bsbs/analysis.hpp"
#include "bsbs/dynamics.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace bsbs {

inline constexpr const char* tool_version = "0.1.0";

std::string fnv1a_hex(const std::string& bytes);

// %.17g, so values survive a text round trip.
std::string format_double(double x);

struct RunManifest {
    std::string command;
    std::string params_file;
    std::string params_hash;
    std::uint64_t seed = 0;
    nlohmann::json grids = nlohmann::json::object();
    nlohmann::json flags = nlohmann::json::object();
    double wall_clock_s = 0;
    std::vector<std::string> outputs;

    nlohmann::json to_json() const;
};

// Creates out_root/<command>/<UTC timestamp>-<hash>/, adding a numeric suffix
// instead of reusing an existing directory.
std::filesystem::path make_run_dir(const std::filesystem::path& out_root, const std::string& command,
                                   const std::string& hash);

// RFC 4180 CSV: c_g_delta_over_Gamma, g_eta_over_pi, value.
void write_grid_csv(const std::filesystem::path& path, const std::vector<double>& cd_over_gamma,
                    const std::vector<double>& g_eta_over_pi, const GridValues& values);

// delta_rad_per_m, re, im, abs2, stderr. re/im are the ensemble-mean amplitude
// scaled by sqrt(W); abs2 is the vacuum-subtracted occupancy.
void write_spectrum_csv(const std::filesystem::path& path, const std::vector<double>& delta,
                        const std::vector<cplx>& mean, const std::vector<double>& abs2,
                        const std::vector<double>& stderr, double window);

void write_kappa_csv(const std::filesystem::path& path, const KappaSpectrum& kappa);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

} // namespace bsbs
