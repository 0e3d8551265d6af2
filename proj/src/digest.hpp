#pragma once

#include <cstdint>
#include <string>

namespace supanova::detail {

// Hex-encoded SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

std::uint32_t crc32_of(const std::string& bytes);

void append_double_bits(std::string& out, double value);
void append_u64(std::string& out, std::uint64_t value);

}  // namespace supanova::detail
