#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace powbench {

std::string to_hex(std::span<const std::uint8_t> data);

// Throws InvalidParam on odd length or non-hex characters.
std::vector<std::uint8_t> from_hex(const std::string& hex);

}  // namespace powbench
