#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace mawarith {

struct ArchiveMember {
    std::string name;
    std::string data;
    friend bool operator==(const ArchiveMember&, const ArchiveMember&) = default;
};

/// ZIP archive with stored (uncompressed) members, in the given order. Every
/// timestamp is 1980-01-01 00:00 so equal inputs give equal bytes. Throws
/// InputError on duplicate names or a member over 4 GiB.
std::string make_zip(std::span<const ArchiveMember> members);

/// Reads an archive written by make_zip or any ZIP whose members are stored.
/// Checks signatures, sizes and CRC-32. Throws FormatError otherwise.
std::vector<ArchiveMember> read_zip(std::string_view bytes);

void write_file(const std::filesystem::path& path, std::string_view bytes);
/// Throws InputError when the file cannot be read.
std::string read_file(const std::filesystem::path& path);

}  // namespace mawarith
