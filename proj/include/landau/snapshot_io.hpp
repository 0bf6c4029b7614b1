#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "landau/errors.hpp"
#include "landau/grid.hpp"

namespace landau {

// Snapshot format (little-endian):
//   magic "LNDF" | version u32=1 | n_per_axis u32 | half_extent f64 |
//   time f64 | n^3 f64 values, index ix + n*(iy + n*iz), ix fastest.
namespace snapshot {

constexpr char kMagic[4] = {'L', 'N', 'D', 'F'};
constexpr std::uint32_t kVersion = 1;

static_assert(sizeof(double) == 8, "format assumes 8-byte doubles");

inline void append_bytes(std::vector<std::uint8_t>& buf, const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    buf.insert(buf.end(), b, b + n);
}

inline std::vector<std::uint8_t> encode(const DistributionField& f) {
    std::vector<std::uint8_t> buf;
    buf.reserve(28 + 8 * f.values.size());
    append_bytes(buf, kMagic, 4);
    std::uint32_t version = kVersion;
    std::uint32_t n = static_cast<std::uint32_t>(f.grid.n);
    append_bytes(buf, &version, 4);
    append_bytes(buf, &n, 4);
    append_bytes(buf, &f.grid.L, 8);
    append_bytes(buf, &f.time, 8);
    append_bytes(buf, f.values.data(), 8 * f.values.size());
    return buf;
}

inline DistributionField decode(const std::uint8_t* data, std::size_t size) {
    if (size < 28) throw format_error("snapshot: truncated header");
    if (std::memcmp(data, kMagic, 4) != 0) throw format_error("snapshot: bad magic");
    std::uint32_t version, n;
    std::memcpy(&version, data + 4, 4);
    std::memcpy(&n, data + 8, 4);
    if (version != kVersion)
        throw format_error("snapshot: unsupported version " + std::to_string(version));
    double L, time;
    std::memcpy(&L, data + 12, 8);
    std::memcpy(&time, data + 20, 8);
    const std::size_t count = static_cast<std::size_t>(n) * n * n;
    if (size != 28 + 8 * count) throw format_error("snapshot: truncated payload");
    DistributionField f(VelocityGrid(static_cast<int>(n), L), time);
    std::memcpy(f.values.data(), data + 28, 8 * count);
    return f;
}

inline DistributionField decode(const std::vector<std::uint8_t>& buf) {
    return decode(buf.data(), buf.size());
}

inline void write_file(const DistributionField& f, const std::string& path) {
    auto buf = encode(f);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw format_error("snapshot: cannot open for writing: " + path);
    os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

inline DistributionField read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw format_error("snapshot: cannot open: " + path);
    std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(is)),
                                  std::istreambuf_iterator<char>());
    return decode(buf);
}

} // namespace snapshot
} // namespace landau
