#include "mawarith/archive.hpp"

#include <zlib.h>

#include <cstdint>
#include <fstream>
#include <iterator>
#include <limits>
#include <set>

#include "mawarith/error.hpp"

namespace mawarith {

namespace {

constexpr std::uint32_t kLocalSig = 0x04034b50;
constexpr std::uint32_t kCentralSig = 0x02014b50;
constexpr std::uint32_t kEndSig = 0x06054b50;
constexpr std::uint16_t kVersion = 20;
constexpr std::uint16_t kUtf8Flag = 0x0800;
constexpr std::uint16_t kDosTime = 0;
constexpr std::uint16_t kDosDate = (0 << 9) | (1 << 5) | 1;  // 1980-01-01

void put16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>(v >> 8));
}

void put32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t crc_of(std::string_view data) {
    uLong crc = crc32(0L, Z_NULL, 0);
    // crc32 takes a uInt length; feed large members in pieces.
    std::size_t pos = 0;
    while (pos < data.size()) {
        const std::size_t n = std::min<std::size_t>(data.size() - pos, 1u << 30);
        crc = crc32(crc, reinterpret_cast<const Bytef*>(data.data() + pos), static_cast<uInt>(n));
        pos += n;
    }
    return static_cast<std::uint32_t>(crc);
}

class Reader {
public:
    explicit Reader(std::string_view bytes) : b_(bytes) {}

    std::uint16_t u16(std::size_t at) const {
        need(at, 2);
        return static_cast<std::uint16_t>(byte(at) | (byte(at + 1) << 8));
    }
    std::uint32_t u32(std::size_t at) const {
        need(at, 4);
        return static_cast<std::uint32_t>(byte(at)) | (static_cast<std::uint32_t>(byte(at + 1)) << 8) |
               (static_cast<std::uint32_t>(byte(at + 2)) << 16) | (static_cast<std::uint32_t>(byte(at + 3)) << 24);
    }
    std::string_view slice(std::size_t at, std::size_t n) const {
        need(at, n);
        return b_.substr(at, n);
    }
    std::size_t size() const { return b_.size(); }

private:
    unsigned byte(std::size_t at) const { return static_cast<unsigned char>(b_[at]); }
    void need(std::size_t at, std::size_t n) const {
        if (at > b_.size() || n > b_.size() - at) throw FormatError("archive truncated");
    }
    std::string_view b_;
};

}  // namespace

std::string make_zip(std::span<const ArchiveMember> members) {
    std::string out;
    std::string central;
    std::set<std::string> seen;
    for (const ArchiveMember& m : members) {
        if (!seen.insert(m.name).second) throw InputError("duplicate archive member " + m.name);
        if (m.data.size() >= std::numeric_limits<std::uint32_t>::max() || m.name.size() > 0xffff) {
            throw InputError("archive member too large: " + m.name);
        }
        if (out.size() >= std::numeric_limits<std::uint32_t>::max()) throw InputError("archive too large");
        const auto offset = static_cast<std::uint32_t>(out.size());
        const std::uint32_t crc = crc_of(m.data);
        const auto size = static_cast<std::uint32_t>(m.data.size());
        const auto name_len = static_cast<std::uint16_t>(m.name.size());

        put32(out, kLocalSig);
        put16(out, kVersion);
        put16(out, kUtf8Flag);
        put16(out, 0);  // stored
        put16(out, kDosTime);
        put16(out, kDosDate);
        put32(out, crc);
        put32(out, size);
        put32(out, size);
        put16(out, name_len);
        put16(out, 0);
        out += m.name;
        out += m.data;

        put32(central, kCentralSig);
        put16(central, kVersion);
        put16(central, kVersion);
        put16(central, kUtf8Flag);
        put16(central, 0);
        put16(central, kDosTime);
        put16(central, kDosDate);
        put32(central, crc);
        put32(central, size);
        put32(central, size);
        put16(central, name_len);
        put16(central, 0);  // extra
        put16(central, 0);  // comment
        put16(central, 0);  // disk
        put16(central, 0);  // internal attributes
        put32(central, 0);  // external attributes
        put32(central, offset);
        central += m.name;
    }
    if (members.size() > 0xffff) throw InputError("too many archive members");
    const auto cd_offset = static_cast<std::uint32_t>(out.size());
    out += central;
    put32(out, kEndSig);
    put16(out, 0);
    put16(out, 0);
    put16(out, static_cast<std::uint16_t>(members.size()));
    put16(out, static_cast<std::uint16_t>(members.size()));
    put32(out, static_cast<std::uint32_t>(central.size()));
    put32(out, cd_offset);
    put16(out, 0);
    return out;
}

std::vector<ArchiveMember> read_zip(std::string_view bytes) {
    const Reader r(bytes);
    if (r.size() < 22) throw FormatError("archive too short");
    // The end record sits in the last 22 + 65535 bytes, after any comment.
    std::size_t end = std::string_view::npos;
    const std::size_t lowest = r.size() > 22 + 0xffff ? r.size() - 22 - 0xffff : 0;
    for (std::size_t at = r.size() - 22 + 1; at-- > lowest;) {
        if (r.u32(at) == kEndSig && at + 22 + r.u16(at + 20) == r.size()) {
            end = at;
            break;
        }
    }
    if (end == std::string_view::npos) throw FormatError("no end-of-central-directory record");
    const std::uint16_t count = r.u16(end + 10);
    std::size_t at = r.u32(end + 16);
    std::vector<ArchiveMember> out;
    for (std::uint16_t i = 0; i < count; ++i) {
        if (r.u32(at) != kCentralSig) throw FormatError("bad central directory entry");
        const std::uint16_t method = r.u16(at + 10);
        const std::uint32_t crc = r.u32(at + 16);
        const std::uint32_t csize = r.u32(at + 20);
        const std::uint32_t usize = r.u32(at + 24);
        const std::uint16_t name_len = r.u16(at + 28);
        const std::uint16_t extra_len = r.u16(at + 30);
        const std::uint16_t comment_len = r.u16(at + 32);
        const std::uint32_t local = r.u32(at + 42);
        std::string name(r.slice(at + 46, name_len));
        at += 46 + std::size_t{name_len} + extra_len + comment_len;

        if (method != 0) throw FormatError("member " + name + " is compressed; only stored members are read");
        if (csize != usize) throw FormatError("member " + name + " has inconsistent sizes");
        if (r.u32(local) != kLocalSig) throw FormatError("bad local header for " + name);
        const std::size_t data_at = local + 30 + std::size_t{r.u16(local + 26)} + r.u16(local + 28);
        std::string data(r.slice(data_at, usize));
        if (crc_of(data) != crc) throw FormatError("CRC mismatch in " + name);
        out.push_back({std::move(name), std::move(data)});
    }
    return out;
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw InputError("write failed: " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace mawarith
