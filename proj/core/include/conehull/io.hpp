#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "conehull/matrix.hpp"

namespace conehull::io {

enum class MatrixFormat { Text, Binary };

// Text: first line "rows cols", then rows lines of cols decimals.
// Binary: magic "CONEMAT1", two little-endian u64 dims, row-major f64 data.
// Format on read is detected from the magic. All writes are atomic
// (temp file + rename).
void write_matrix(const std::filesystem::path& path, const DenseMatrix& m,
                  MatrixFormat format = MatrixFormat::Text);
DenseMatrix read_matrix(const std::filesystem::path& path);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::filesystem::path& path, std::size_t line,
             const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_ = 0;
};

// Flat key=value run configuration, written next to every command's outputs.
struct RunConfig {
  std::map<std::string, std::string> values;

  void set(const std::string& key, const std::string& value) { values[key] = value; }
  void set_int(const std::string& key, std::int64_t v);
  void set_double(const std::string& key, double v);
  std::string serialize() const;  // deterministic key order
  static RunConfig parse(const std::string& text);
};

void write_text_atomic(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace conehull::io
