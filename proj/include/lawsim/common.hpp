#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace lawsim {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Error hierarchy. Stage drivers map these to process exit codes:
// ConfigError -> 2, MissingArtifactError -> 3, DataError (and subclasses) -> 4.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct DataError : Error {
  using Error::Error;
};

struct MissingArtifactError : Error {
  std::string stage;
  explicit MissingArtifactError(std::string stage_name)
      : Error("missing artifact; run stage first: " + stage_name),
        stage(std::move(stage_name)) {}
};

// ---------------------------------------------------------------------------
// Hashing (FNV-1a 64). Used for content-addressed caches and manifests.
// ---------------------------------------------------------------------------

std::uint64_t fnv1a64(std::string_view data);
std::string to_hex64(std::uint64_t value);
std::uint64_t hash_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Deterministic RNG. All randomness in the project flows through DetRng so
// results are bit-identical across platforms and standard libraries.
// ---------------------------------------------------------------------------

class DetRng {
 public:
  explicit DetRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();          // splitmix64
  double uniform01();                // [0, 1), 53-bit resolution
  std::uint64_t below(std::uint64_t bound);  // uniform in [0, bound)
  double gauss();                    // standard normal, Box-Muller

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t state_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0);

// ---------------------------------------------------------------------------
// UTF-8 helpers. Parsing works on byte offsets; these decode one codepoint
// at a time so scanners can walk Chinese text safely.
// ---------------------------------------------------------------------------

struct Codepoint {
  char32_t value = 0;
  int length = 1;  // bytes consumed
};

Codepoint decode_utf8(std::string_view text, std::size_t offset);
std::string encode_utf8(char32_t cp);
bool is_han(char32_t cp);

// ---------------------------------------------------------------------------
// Small dense matrix of doubles (row-major).
// ---------------------------------------------------------------------------

class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), cells_(static_cast<std::size_t>(rows) * cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& at(int r, int c) { return cells_[static_cast<std::size_t>(r) * cols_ + c]; }
  double at(int r, int c) const { return cells_[static_cast<std::size_t>(r) * cols_ + c]; }
  const std::vector<double>& cells() const { return cells_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> cells_;
};

// ---------------------------------------------------------------------------
// File and JSONL I/O.
// ---------------------------------------------------------------------------

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);
void append_line(const std::filesystem::path& path, std::string_view line);

std::vector<json> read_jsonl(const std::filesystem::path& path);
void write_jsonl(const std::filesystem::path& path, const std::vector<json>& records);

// Little-endian scalar I/O for binary stores.
void put_u16le(std::string& out, std::uint16_t v);
void put_u32le(std::string& out, std::uint32_t v);
void put_u64le(std::string& out, std::uint64_t v);
void put_f64le(std::string& out, double v);
std::uint16_t get_u16le(std::string_view in, std::size_t offset);
std::uint32_t get_u32le(std::string_view in, std::size_t offset);
std::uint64_t get_u64le(std::string_view in, std::size_t offset);
double get_f64le(std::string_view in, std::size_t offset);

// round half away from zero, clamp to [0, 255]
std::uint8_t round_to_grey(double value);

std::string trim(std::string_view text);

}  // namespace lawsim
