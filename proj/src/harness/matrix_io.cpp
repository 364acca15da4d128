#include "camp/config.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

namespace camp::io {
namespace {

constexpr std::array<char, 8> kMagic = {'C', 'A', 'M', 'P', 'M', 'A', 'T', '1'};
// 2^31 values (16 GiB) is far beyond anything this tool handles.
constexpr std::uint64_t kMaxEntries = std::uint64_t{1} << 31;

void put_u64(std::ostream & out, std::uint64_t value)
{
  std::array<unsigned char, 8> bytes{};
  for (std::size_t i = 0; i < 8; ++i) { bytes[i] = static_cast<unsigned char>(value >> (8 * i)); }
  out.write(reinterpret_cast<const char *>(bytes.data()), 8);
}

std::uint64_t get_u64(std::istream & in)
{
  std::array<unsigned char, 8> bytes{};
  in.read(reinterpret_cast<char *>(bytes.data()), 8);
  if (!in) { throw ConfigError("matrix container: truncated header"); }
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < 8; ++i) { value |= std::uint64_t{bytes[i]} << (8 * i); }
  return value;
}

}  // namespace

void write_matrix(std::ostream & out, const Matrix & m)
{
  out.write(kMagic.data(), kMagic.size());
  put_u64(out, static_cast<std::uint64_t>(m.rows()));
  put_u64(out, static_cast<std::uint64_t>(m.cols()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) { put_u64(out, std::bit_cast<std::uint64_t>(m(i, j))); }
  }
  if (!out) { throw std::runtime_error("matrix container: write failed"); }
}

Matrix read_matrix(std::istream & in)
{
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) { throw ConfigError("matrix container: bad magic"); }
  const std::uint64_t rows = get_u64(in);
  const std::uint64_t cols = get_u64(in);
  if (rows > kMaxEntries || cols > kMaxEntries || (rows && cols > kMaxEntries / rows)) {
    throw ConfigError("matrix container: implausible dimensions");
  }
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      try {
        m(i, j) = std::bit_cast<double>(get_u64(in));
      } catch (const ConfigError &) {
        throw ConfigError("matrix container: truncated data");
      }
    }
  }
  return m;
}

void write_matrix(const std::filesystem::path & path, const Matrix & m)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) { throw std::runtime_error("cannot open " + path.string() + " for writing"); }
  write_matrix(out, m);
}

Matrix read_matrix(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) { throw ConfigError("cannot open matrix file " + path.string()); }
  return read_matrix(in);
}

}  // namespace camp::io
