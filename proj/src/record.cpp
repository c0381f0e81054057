#include "bsbs/dynamics.hpp"

#include "bsbs/errors.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace bsbs {

namespace {

template <class T>
void put(std::ostream& os, T v)
{
    static_assert(std::endian::native == std::endian::little, "record writer assumes a little-endian host");
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& is)
{
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is)
        throw ConfigError("record: truncated file");
    return v;
}

void put_field(std::ostream& os, const std::vector<cplx>& f, std::size_t n)
{
    for (std::size_t j = 0; j < n; ++j) {
        cplx z = j < f.size() ? f[j] : cplx(0.0);
        put(os, static_cast<float>(z.real()));
        put(os, static_cast<float>(z.imag()));
    }
}

} // namespace

void write_record(const std::string& path, const RecordHeader& header, const std::vector<ShotRecord>& shots)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw ConfigError("cannot write record " + path);
    os.write("BPW1", 4);
    put(os, header.version);
    put(os, header.n_z);
    put(os, header.dz);
    put(os, header.dt);
    put(os, static_cast<std::uint64_t>(shots.size()));
    put(os, header.seed);
    for (const auto& s : shots) {
        put_field(os, s.final.a_p, header.n_z);
        put_field(os, s.final.a_sc, header.n_z);
        put_field(os, s.final.b, header.n_z);
    }
    if (!os)
        throw ConfigError("failed writing record " + path);
}

RecordHeader read_record(const std::string& path, std::vector<std::vector<std::complex<float>>>* fields)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw ConfigError("cannot read record " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "BPW1", 4) != 0)
        throw ConfigError("record: bad magic");
    RecordHeader h;
    h.version = get<std::uint32_t>(is);
    h.n_z = get<std::uint64_t>(is);
    h.dz = get<double>(is);
    h.dt = get<double>(is);
    h.shots = get<std::uint64_t>(is);
    h.seed = get<std::uint64_t>(is);
    if (fields) {
        fields->clear();
        for (std::uint64_t s = 0; s < h.shots * 3; ++s) {
            std::vector<std::complex<float>> f(h.n_z);
            for (auto& z : f) {
                float re = get<float>(is), im = get<float>(is);
                z = {re, im};
            }
            fields->push_back(std::move(f));
        }
    }
    return h;
}

} // namespace bsbs
