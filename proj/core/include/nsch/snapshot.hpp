#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nsch {

// One field record of the .snap container.
struct SnapField {
    std::uint8_t kind = 0;  // 0 cell scalar, 1 x-face, 2 y-face
    std::string name;       // at most 16 ASCII characters
    std::vector<double> data;
};

struct SnapContents {
    int nx = 0, ny = 0;
    std::vector<SnapField> fields;
};

// Expected payload length for a field kind on an nx x ny grid.
std::size_t field_len(std::uint8_t kind, int nx, int ny);

// Container layout: magic "NSCHF1\0", little-endian u32 nx, ny, field
// count, then per field: u8 kind, 16-byte zero-padded name, row-major f64
// payload, u32 CRC32 of the payload bytes.
void write_snap(const std::string& path, int nx, int ny,
                const std::vector<SnapField>& fields);

// Validates magic, sizes and checksums; throws CorruptSnapshot on any
// mismatch or truncation.
SnapContents read_snap(const std::string& path);

}  // namespace nsch
