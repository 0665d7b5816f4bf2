#include "conehull/io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace conehull::io {

namespace {

constexpr char kMagic[8] = {'C', 'O', 'N', 'E', 'M', 'A', 'T', '1'};

static_assert(std::endian::native == std::endian::little,
              "binary matrix format assumes a little-endian host");

std::filesystem::path temp_sibling(const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp";
  return tmp;
}

}  // namespace

ParseError::ParseError(const std::filesystem::path& path, std::size_t line,
                       const std::string& what)
    : std::runtime_error(path.string() + ":" + std::to_string(line) + ": " + what),
      line_(line) {}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  const auto tmp = temp_sibling(path);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_matrix(const std::filesystem::path& path, const DenseMatrix& m,
                  MatrixFormat format) {
  const auto tmp = temp_sibling(path);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    if (format == MatrixFormat::Binary) {
      out.write(kMagic, sizeof(kMagic));
      const std::uint64_t dims[2] = {static_cast<std::uint64_t>(m.rows()),
                                     static_cast<std::uint64_t>(m.cols())};
      out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
      // row-major storage matches the on-disk layout
      out.write(reinterpret_cast<const char*>(m.data()),
                static_cast<std::streamsize>(sizeof(double) * m.size()));
    } else {
      out << m.rows() << ' ' << m.cols() << '\n';
      out << std::setprecision(17);
      for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
          if (j) out << ' ';
          out << m(i, j);
        }
        out << '\n';
      }
    }
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

DenseMatrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, "cannot open file");

  std::array<char, 8> head{};
  in.read(head.data(), head.size());
  const bool binary =
      in.gcount() == 8 && std::memcmp(head.data(), kMagic, 8) == 0;
  if (binary) {
    std::uint64_t dims[2];
    in.read(reinterpret_cast<char*>(dims), sizeof(dims));
    if (!in) throw ParseError(path, 0, "truncated binary header");
    if (dims[0] > (1ull << 32) || dims[1] > (1ull << 32)) {
      throw ParseError(path, 0, "implausible dimensions");
    }
    DenseMatrix m(static_cast<Index>(dims[0]), static_cast<Index>(dims[1]));
    in.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(sizeof(double) * m.size()));
    if (in.gcount() != static_cast<std::streamsize>(sizeof(double) * m.size())) {
      throw ParseError(path, 0, "truncated binary payload");
    }
    return m;
  }

  in.clear();
  in.seekg(0);
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(path, 1, "missing header line");
  ++line_no;
  std::istringstream header(line);
  long long rows = -1, cols = -1;
  if (!(header >> rows >> cols) || rows < 0 || cols < 0) {
    throw ParseError(path, line_no, "header must be 'rows cols'");
  }
  std::string extra;
  if (header >> extra) {
    throw ParseError(path, line_no, "trailing tokens after 'rows cols'");
  }
  DenseMatrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (long long i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) {
      throw ParseError(path, line_no + 1, "unexpected end of file");
    }
    ++line_no;
    std::istringstream row(line);
    for (long long j = 0; j < cols; ++j) {
      double v;
      if (!(row >> v)) {
        throw ParseError(path, line_no,
                         "expected " + std::to_string(cols) + " values");
      }
      m(static_cast<Index>(i), static_cast<Index>(j)) = v;
    }
    if (row >> extra) {
      throw ParseError(path, line_no, "trailing tokens on data row");
    }
  }
  return m;
}

void RunConfig::set_int(const std::string& key, std::int64_t v) {
  values[key] = std::to_string(v);
}

void RunConfig::set_double(const std::string& key, double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  values[key] = os.str();
}

std::string RunConfig::serialize() const {
  std::ostringstream os;
  for (const auto& [k, v] : values) os << k << '=' << v << '\n';
  return os.str();
}

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    cfg.values[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return cfg;
}

}  // namespace conehull::io
