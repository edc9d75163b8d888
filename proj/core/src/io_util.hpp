// Private little-endian binary primitives shared by the snapshot and
// checkpoint writers. Any short read throws CorruptSnapshot.
#pragma once

#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <zlib.h>

#include "nsch/errors.hpp"
#include "nsch/snapshot.hpp"

namespace nsch::detail {

inline void put_bytes(std::ostream& os, const void* p, std::size_t n) {
    os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

inline void get_bytes(std::istream& is, void* p, std::size_t n) {
    is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(is.gcount()) != n)
        throw CorruptSnapshot("unexpected end of file");
}

inline void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v),
                          static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    put_bytes(os, b, 4);
}

inline std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    get_bytes(is, b, 4);
    return static_cast<std::uint32_t>(b[0]) |
           (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
}

inline void put_u64(std::ostream& os, std::uint64_t v) {
    put_u32(os, static_cast<std::uint32_t>(v));
    put_u32(os, static_cast<std::uint32_t>(v >> 32));
}

inline std::uint64_t get_u64(std::istream& is) {
    const std::uint64_t lo = get_u32(is);
    const std::uint64_t hi = get_u32(is);
    return lo | (hi << 32);
}

inline void put_f64(std::ostream& os, double x) {
    std::uint64_t u;
    std::memcpy(&u, &x, 8);
    put_u64(os, u);
}

inline double get_f64(std::istream& is) {
    const std::uint64_t u = get_u64(is);
    double x;
    std::memcpy(&x, &u, 8);
    return x;
}

inline std::vector<unsigned char> payload_bytes(
    const std::vector<double>& data) {
    std::vector<unsigned char> b(data.size() * 8);
    for (std::size_t k = 0; k < data.size(); ++k) {
        std::uint64_t u;
        std::memcpy(&u, &data[k], 8);
        for (int i = 0; i < 8; ++i)
            b[k * 8 + i] = static_cast<unsigned char>(u >> (8 * i));
    }
    return b;
}

inline std::uint32_t crc_bytes(const unsigned char* p, std::size_t n) {
    return static_cast<std::uint32_t>(
        ::crc32(0L, reinterpret_cast<const Bytef*>(p),
                static_cast<uInt>(n)));
}

inline void put_field(std::ostream& os, const SnapField& f) {
    unsigned char kind = f.kind;
    put_bytes(os, &kind, 1);
    char name[16] = {0};
    std::memcpy(name, f.name.data(),
                f.name.size() < 16 ? f.name.size() : 16);
    put_bytes(os, name, 16);
    const std::vector<unsigned char> b = payload_bytes(f.data);
    put_bytes(os, b.data(), b.size());
    put_u32(os, crc_bytes(b.data(), b.size()));
}

inline SnapField get_field(std::istream& is, int nx, int ny) {
    SnapField f;
    unsigned char kind;
    get_bytes(is, &kind, 1);
    if (kind > 2) throw CorruptSnapshot("bad field kind");
    f.kind = kind;
    char name[16];
    get_bytes(is, name, 16);
    std::size_t len = 0;
    while (len < 16 && name[len] != '\0') ++len;
    f.name.assign(name, len);
    const std::size_t n = field_len(f.kind, nx, ny);
    std::vector<unsigned char> b(n * 8);
    get_bytes(is, b.data(), b.size());
    const std::uint32_t stored = get_u32(is);
    if (stored != crc_bytes(b.data(), b.size()))
        throw CorruptSnapshot("checksum mismatch in field '" + f.name + "'");
    f.data.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::uint64_t u = 0;
        for (int i = 0; i < 8; ++i)
            u |= static_cast<std::uint64_t>(b[k * 8 + i]) << (8 * i);
        std::memcpy(&f.data[k], &u, 8);
    }
    return f;
}

}  // namespace nsch::detail
