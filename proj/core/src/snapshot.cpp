#include "nsch/snapshot.hpp"

#include <fstream>

#include "io_util.hpp"
#include "nsch/errors.hpp"

namespace nsch {

namespace {
constexpr char kMagic[7] = {'N', 'S', 'C', 'H', 'F', '1', '\0'};
}

std::size_t field_len(std::uint8_t kind, int nx, int ny) {
    switch (kind) {
        case 0: return static_cast<std::size_t>(nx) * ny;
        case 1: return static_cast<std::size_t>(nx + 1) * ny;
        case 2: return static_cast<std::size_t>(nx) * (ny + 1);
        default: throw CorruptSnapshot("bad field kind");
    }
}

void write_snap(const std::string& path, int nx, int ny,
                const std::vector<SnapField>& fields) {
    for (const SnapField& f : fields)
        if (f.data.size() != field_len(f.kind, nx, ny))
            throw ConfigError("snapshot field '" + f.name +
                              "' has the wrong length");
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw ConfigError("cannot open '" + path + "' for writing");
    detail::put_bytes(os, kMagic, sizeof kMagic);
    detail::put_u32(os, static_cast<std::uint32_t>(nx));
    detail::put_u32(os, static_cast<std::uint32_t>(ny));
    detail::put_u32(os, static_cast<std::uint32_t>(fields.size()));
    for (const SnapField& f : fields) detail::put_field(os, f);
    os.flush();
    if (!os) throw ConfigError("write to '" + path + "' failed");
}

SnapContents read_snap(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw CorruptSnapshot("cannot open '" + path + "'");
    char magic[sizeof kMagic];
    detail::get_bytes(is, magic, sizeof magic);
    for (std::size_t i = 0; i < sizeof kMagic; ++i)
        if (magic[i] != kMagic[i])
            throw CorruptSnapshot("'" + path + "' is not a snapshot file");
    SnapContents c;
    c.nx = static_cast<int>(detail::get_u32(is));
    c.ny = static_cast<int>(detail::get_u32(is));
    if (c.nx < 1 || c.ny < 1 || c.nx > (1 << 20) || c.ny > (1 << 20))
        throw CorruptSnapshot("implausible grid size in '" + path + "'");
    const std::uint32_t count = detail::get_u32(is);
    if (count > 1024) throw CorruptSnapshot("implausible field count");
    c.fields.reserve(count);
    for (std::uint32_t k = 0; k < count; ++k)
        c.fields.push_back(detail::get_field(is, c.nx, c.ny));
    return c;
}

}  // namespace nsch
