#include "bsbs/output.hpp"

#include "bsbs/errors.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>

namespace bsbs {

namespace fs = std::filesystem;

std::string fnv1a_hex(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_double(double x)
{
    if (std::isnan(x))
        return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

nlohmann::json RunManifest::to_json() const
{
    return {
        {"command", command},   {"params_file", params_file}, {"params_hash", params_hash},
        {"seed", seed},         {"grids", grids},             {"flags", flags},
        {"tool_version", tool_version}, {"wall_clock_s", wall_clock_s}, {"outputs", outputs},
    };
}

fs::path make_run_dir(const fs::path& out_root, const std::string& command, const std::string& hash)
{
    std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y%m%dT%H%M%SZ", &utc);
    fs::path base = out_root / command / (std::string(stamp) + "-" + hash.substr(0, 12));
    fs::path dir = base;
    for (int i = 1; fs::exists(dir); ++i)
        dir = base.string() + "-" + std::to_string(i);
    fs::create_directories(dir);
    return dir;
}

namespace {

std::ofstream open_out(const fs::path& path)
{
    std::ofstream os(path);
    if (!os)
        throw ConfigError("cannot write " + path.string());
    return os;
}

} // namespace

void write_grid_csv(const fs::path& path, const std::vector<double>& cd_over_gamma,
                    const std::vector<double>& g_eta_over_pi, const GridValues& values)
{
    auto os = open_out(path);
    os << "c_g_delta_over_Gamma,g_eta_over_pi,value\r\n";
    for (std::size_t i = 0; i < cd_over_gamma.size(); ++i)
        for (std::size_t k = 0; k < g_eta_over_pi.size(); ++k)
            os << format_double(cd_over_gamma[i]) << ',' << format_double(g_eta_over_pi[k]) << ','
               << format_double(values(i, k)) << "\r\n";
}

void write_spectrum_csv(const fs::path& path, const std::vector<double>& delta, const std::vector<cplx>& mean,
                        const std::vector<double>& abs2, const std::vector<double>& stderr, double window)
{
    auto os = open_out(path);
    os << "delta_rad_per_m,re,im,abs2,stderr\r\n";
    const double s = std::sqrt(window);
    for (std::size_t i = 0; i < delta.size(); ++i)
        os << format_double(delta[i]) << ',' << format_double(s * mean[i].real()) << ','
           << format_double(s * mean[i].imag()) << ',' << format_double(abs2[i]) << ',' << format_double(stderr[i])
           << "\r\n";
}

void write_kappa_csv(const fs::path& path, const KappaSpectrum& kappa)
{
    auto os = open_out(path);
    os << "delta_rad_per_m,kappa,stderr,lower_3sigma,upper_3sigma\r\n";
    for (std::size_t i = 0; i < kappa.delta.size(); ++i)
        os << format_double(kappa.delta[i]) << ',' << format_double(kappa.kappa[i]) << ','
           << format_double(kappa.stderr[i]) << ',' << format_double(kappa.kappa[i] - 3 * kappa.stderr[i]) << ','
           << format_double(kappa.kappa[i] + 3 * kappa.stderr[i]) << "\r\n";
}

void write_json(const fs::path& path, const nlohmann::json& j)
{
    auto os = open_out(path);
    os << j.dump(2) << '\n';
}

} // namespace bsbs
