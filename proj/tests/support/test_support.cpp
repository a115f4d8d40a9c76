#include "test_support.hpp"

#include <atomic>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include "dadprune/ddt1.hpp"

namespace dadprune::testing {

std::string to_hex(const std::vector<std::uint8_t>& bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out += kDigits[b >> 4];
    out += kDigits[b & 0xf];
  }
  return out;
}

std::string to_hex(std::string_view text) {
  return to_hex(std::vector<std::uint8_t>(text.begin(), text.end()));
}

std::string read_golden_hex(const std::string& name) {
  const std::filesystem::path path = std::filesystem::path(DADPRUNE_GOLDEN_DIR) / name;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing golden file " + path.string());
  std::string out, line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    for (char c : line) {
      if (!std::isspace(static_cast<unsigned char>(c))) out += static_cast<char>(std::tolower(c));
    }
  }
  return out;
}

std::string xml_wellformed_error(std::string_view doc) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  bool saw_root = false;
  auto is_name = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':'; };
  while (i < doc.size()) {
    if (doc[i] == '&') {
      const auto semi = doc.find(';', i);
      if (semi == std::string_view::npos) return "unterminated entity";
      const auto ent = doc.substr(i, semi - i + 1);
      if (ent != "&amp;" && ent != "&lt;" && ent != "&gt;" && ent != "&quot;" && ent != "&apos;") {
        return "unknown entity " + std::string(ent);
      }
      i = semi + 1;
      continue;
    }
    if (doc[i] != '<') {
      if (stack.empty() && !std::isspace(static_cast<unsigned char>(doc[i]))) return "text outside the root element";
      ++i;
      continue;
    }
    const auto close = doc.find('>', i);
    if (close == std::string_view::npos) return "unterminated tag";
    std::string_view tag = doc.substr(i + 1, close - i - 1);
    i = close + 1;
    if (tag.starts_with('?')) continue;
    if (tag.starts_with('/')) {
      const std::string name(tag.substr(1));
      if (stack.empty() || stack.back() != name) return "mismatched closing tag </" + name + ">";
      stack.pop_back();
      continue;
    }
    const bool self_closing = tag.ends_with('/');
    if (self_closing) tag.remove_suffix(1);
    std::size_t j = 0;
    while (j < tag.size() && is_name(tag[j])) ++j;
    if (j == 0) return "empty tag name";
    const std::string name(tag.substr(0, j));
    // attributes: name="value"
    while (j < tag.size()) {
      while (j < tag.size() && std::isspace(static_cast<unsigned char>(tag[j]))) ++j;
      if (j >= tag.size()) break;
      const std::size_t a = j;
      while (j < tag.size() && is_name(tag[j])) ++j;
      if (j == a || j >= tag.size() || tag[j] != '=') return "bad attribute in <" + name + ">";
      ++j;
      if (j >= tag.size() || tag[j] != '"') return "unquoted attribute in <" + name + ">";
      const auto end = tag.find('"', j + 1);
      if (end == std::string_view::npos) return "unterminated attribute in <" + name + ">";
      if (tag.substr(j + 1, end - j - 1).find('<') != std::string_view::npos) return "'<' inside attribute";
      j = end + 1;
    }
    if (stack.empty() && saw_root) return "more than one root element";
    if (stack.empty()) saw_root = true;
    if (!self_closing) stack.push_back(name);
  }
  if (!stack.empty()) return "unclosed <" + stack.back() + ">";
  if (!saw_root) return "no root element";
  return {};
}

std::size_t count_occurrences(std::string_view haystack, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string_view::npos; pos = haystack.find(needle, pos + 1)) ++n;
  return n;
}

std::vector<CorruptionCase> ddt1_corruption_cases() {
  const MaskVolume mask(Dims{2, 2, 2, 3}, std::vector<std::uint8_t>(8, 1));
  const ProbabilityVolume probs(Dims{2, 2, 1, 2}, {0.0f, 0.25f, 0.5f, 1.0f});
  const auto m = encode_volume(mask);   // 18-byte header + 8 bytes
  const auto f = encode_volume(probs);  // 14-byte header + 16 bytes

  auto edit = [](std::vector<std::uint8_t> b, std::size_t at, std::vector<std::uint8_t> patch) {
    std::copy(patch.begin(), patch.end(), b.begin() + static_cast<std::ptrdiff_t>(at));
    return b;
  };
  auto cut = [](std::vector<std::uint8_t> b, std::size_t n) {
    b.resize(n);
    return b;
  };
  auto grow = [](std::vector<std::uint8_t> b) {
    b.push_back(0);
    return b;
  };

  std::vector<CorruptionCase> out;
  out.push_back({"bad magic", edit(m, 0, {'D', 'D', 'T', '2'}), Errc::bad_magic, 0});
  out.push_back({"unknown dtype", edit(m, 4, {7}), Errc::bad_dtype, 4});
  out.push_back({"ndim 4", edit(m, 5, {4}), Errc::bad_ndim, 5});
  out.push_back({"shorter than prefix", cut(m, 3), Errc::truncated_header, 3});
  out.push_back({"dims cut short", cut(m, 10), Errc::truncated_header, 10});
  out.push_back({"zero dim", edit(m, 10, {0, 0, 0, 0}), Errc::zero_dim, 10});
  out.push_back({"dims overflow",
                 edit(m, 6, {0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff}),
                 Errc::dims_overflow, 14});
  out.push_back({"truncated payload", cut(m, 23), Errc::truncated_payload, 23});
  out.push_back({"trailing bytes", grow(m), Errc::trailing_bytes, 26});
  out.push_back({"mask byte 2", edit(m, 21, {2}), Errc::bad_mask_byte, 21});
  out.push_back({"NaN probability", edit(f, 18, {0x00, 0x00, 0xc0, 0x7f}), Errc::bad_float_value, 18});
  out.push_back({"probability above 1", edit(f, 26, {0x00, 0x00, 0x00, 0x40}), Errc::bad_float_value, 26});
  return out;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("dadprune_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace dadprune::testing
