#include "lawsim/common.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

namespace lawsim {

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char byte : data) {
    hash ^= byte;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string to_hex64(std::uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[value & 0xF];
    value >>= 4;
  }
  return out;
}

std::uint64_t hash_file(const std::filesystem::path& path) {
  return fnv1a64(read_file(path));
}

std::uint64_t DetRng::next_u64() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double DetRng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t DetRng::below(std::uint64_t bound) {
  if (bound == 0) return 0;
  // rejection sampling to stay unbiased
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t draw;
  do {
    draw = next_u64();
  } while (draw >= limit);
  return draw % bound;
}

double DetRng::gauss() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller; u1 kept strictly positive so log() is finite.
  double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  double radius = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  auto mix = [](std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
    return h ^ (h >> 27);
  };
  return mix(mix(a, b), c);
}

Codepoint decode_utf8(std::string_view text, std::size_t offset) {
  if (offset >= text.size()) return {0, 0};
  unsigned char lead = static_cast<unsigned char>(text[offset]);
  auto cont = [&](std::size_t i) -> int {
    if (offset + i >= text.size()) return -1;
    unsigned char b = static_cast<unsigned char>(text[offset + i]);
    return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
  };
  if (lead < 0x80) return {lead, 1};
  if ((lead & 0xE0) == 0xC0) {
    int c1 = cont(1);
    if (c1 < 0) return {0xFFFD, 1};
    return {static_cast<char32_t>(((lead & 0x1F) << 6) | c1), 2};
  }
  if ((lead & 0xF0) == 0xE0) {
    int c1 = cont(1), c2 = cont(2);
    if (c1 < 0 || c2 < 0) return {0xFFFD, 1};
    return {static_cast<char32_t>(((lead & 0x0F) << 12) | (c1 << 6) | c2), 3};
  }
  if ((lead & 0xF8) == 0xF0) {
    int c1 = cont(1), c2 = cont(2), c3 = cont(3);
    if (c1 < 0 || c2 < 0 || c3 < 0) return {0xFFFD, 1};
    return {static_cast<char32_t>(((lead & 0x07) << 18) | (c1 << 12) | (c2 << 6) | c3), 4};
  }
  return {0xFFFD, 1};
}

std::string encode_utf8(char32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
  return out;
}

bool is_han(char32_t cp) {
  return (cp >= 0x4E00 && cp <= 0x9FFF) || (cp >= 0x3400 && cp <= 0x4DBF) ||
         (cp >= 0xF900 && cp <= 0xFAFF);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write file: " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
  }
  std::filesystem::rename(tmp, path);
}

void append_line(const std::filesystem::path& path, std::string_view line) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw DataError("cannot append to file: " + path.string());
  out.write(line.data(), static_cast<std::streamsize>(line.size()));
  out.put('\n');
  out.flush();
}

std::vector<json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path.string());
  std::vector<json> records;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    records.push_back(json::parse(line));
  }
  return records;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<json>& records) {
  std::string body;
  for (const auto& record : records) {
    body += record.dump();
    body += '\n';
  }
  write_file(path, body);
}

void put_u16le(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void put_u32le(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64le(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  put_u64le(out, bits);
}

std::uint16_t get_u16le(std::string_view in, std::size_t offset) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(in[offset]) |
                                    (static_cast<unsigned char>(in[offset + 1]) << 8));
}

std::uint32_t get_u32le(std::string_view in, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(in[offset + i]);
  return v;
}

std::uint64_t get_u64le(std::string_view in, std::size_t offset) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(in[offset + i]);
  return v;
}

double get_f64le(std::string_view in, std::size_t offset) {
  std::uint64_t bits = get_u64le(in, offset);
  double v;
  std::memcpy(&v, &bits, sizeof(v));
  return v;
}

std::uint8_t round_to_grey(double value) {
  long long rounded = std::llround(value);
  if (rounded < 0) return 0;
  if (rounded > 255) return 255;
  return static_cast<std::uint8_t>(rounded);
}

std::string trim(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  auto is_space = [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
  };
  while (begin < end && is_space(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && is_space(static_cast<unsigned char>(text[end - 1]))) --end;
  return std::string(text.substr(begin, end - begin));
}

}  // namespace lawsim
