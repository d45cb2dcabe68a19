#pragma once

// Host files: raw little-endian int32 (.i32) or one decimal integer per
// line (.txt).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "permsteg/core.hpp"

namespace permsteg {

enum class HostFormat { i32, txt };

class IoError : public Error {
 public:
  using Error::Error;
};

// From the file extension; throws IoError for anything else.
HostFormat format_from_path(const std::string& path);
HostFormat parse_host_format(const std::string& text);

std::vector<Sample> read_host(const std::string& path, std::optional<HostFormat> format = std::nullopt);
void write_host(const std::string& path, const std::vector<Sample>& samples,
                std::optional<HostFormat> format = std::nullopt);

std::vector<std::uint8_t> read_bytes(const std::string& path);
void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes);

}  // namespace permsteg
