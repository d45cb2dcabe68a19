#include "permsteg/host_io.hpp"

#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>

namespace permsteg {
namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

HostFormat format_from_path(const std::string& path) {
  if (ends_with(path, ".i32")) return HostFormat::i32;
  if (ends_with(path, ".txt")) return HostFormat::txt;
  throw IoError("cannot infer host format from " + path + " (expected .i32 or .txt)");
}

HostFormat parse_host_format(const std::string& text) {
  if (text == "i32") return HostFormat::i32;
  if (text == "txt") return HostFormat::txt;
  throw IoError("unknown host format: " + text);
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path);
  return bytes;
}

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path);
}

std::vector<Sample> read_host(const std::string& path, std::optional<HostFormat> format) {
  const HostFormat f = format.value_or(format_from_path(path));
  const auto bytes = read_bytes(path);
  std::vector<Sample> samples;
  if (f == HostFormat::i32) {
    if (bytes.size() % 4 != 0) throw IoError("malformed .i32 file: size not a multiple of 4");
    samples.reserve(bytes.size() / 4);
    for (std::size_t i = 0; i < bytes.size(); i += 4) {
      const std::uint32_t u = std::uint32_t{bytes[i]} | std::uint32_t{bytes[i + 1]} << 8 |
                              std::uint32_t{bytes[i + 2]} << 16 | std::uint32_t{bytes[i + 3]} << 24;
      samples.push_back(static_cast<Sample>(u));
    }
  } else {
    std::istringstream in(std::string(bytes.begin(), bytes.end()));
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string t = trim(line);
      if (t.empty()) continue;
      Sample v = 0;
      const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw IoError("malformed sample on line " + std::to_string(lineno) + " of " + path);
      }
      samples.push_back(v);
    }
  }
  return samples;
}

void write_host(const std::string& path, const std::vector<Sample>& samples,
                std::optional<HostFormat> format) {
  const HostFormat f = format.value_or(format_from_path(path));
  std::vector<std::uint8_t> bytes;
  if (f == HostFormat::i32) {
    bytes.reserve(samples.size() * 4);
    for (Sample v : samples) {
      const auto u = static_cast<std::uint32_t>(v);
      for (int b = 0; b < 4; ++b) bytes.push_back(static_cast<std::uint8_t>(u >> (8 * b)));
    }
  } else {
    std::string text;
    for (Sample v : samples) {
      text += std::to_string(v);
      text += '\n';
    }
    bytes.assign(text.begin(), text.end());
  }
  write_bytes(path, bytes);
}

}  // namespace permsteg
