#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ellink {

// FNV-1a 64-bit. Used to fingerprint resource files in reports.
std::uint64_t fnv1a(std::string_view data);

// Hex digest of a file's bytes. Throws IoError if unreadable.
std::string file_checksum(const std::string& path);

std::string to_hex(std::uint64_t value);

}  // namespace ellink
