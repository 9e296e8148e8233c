#include "mccsr/dictionary_io.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace mccsr {

static_assert(std::endian::native == std::endian::little,
              "dictionary format is little-endian");

namespace {

constexpr char kMagic[4] = {'M', 'C', 'S', 'R'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint32_t read_u32(std::istream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) throw std::runtime_error("dictionary file truncated");
  return v;
}

void write_block(std::ostream& out, const Matrix& m) {
  write_u32(out, static_cast<std::uint32_t>(m.rows()));
  write_u32(out, static_cast<std::uint32_t>(m.cols()));
  std::vector<double> row_major(static_cast<size_t>(m.size()));
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c)
      row_major[static_cast<size_t>(r * m.cols() + c)] = m(r, c);
  out.write(reinterpret_cast<const char*>(row_major.data()),
            static_cast<std::streamsize>(row_major.size() * sizeof(double)));
}

Matrix read_block(std::istream& in) {
  const std::uint32_t rows = read_u32(in);
  const std::uint32_t cols = read_u32(in);
  if (rows == 0 || cols == 0 || static_cast<std::uint64_t>(rows) * cols > (1u << 28))
    throw std::runtime_error("dictionary block has implausible dimensions");
  std::vector<double> row_major(static_cast<size_t>(rows) * cols);
  in.read(reinterpret_cast<char*>(row_major.data()),
          static_cast<std::streamsize>(row_major.size() * sizeof(double)));
  if (!in) throw std::runtime_error("dictionary file truncated");
  Matrix m(rows, cols);
  for (std::uint32_t r = 0; r < rows; ++r)
    for (std::uint32_t c = 0; c < cols; ++c)
      m(r, c) = row_major[static_cast<size_t>(r) * cols + c];
  return m;
}

}  // namespace

void write_dictionary(std::ostream& out, const DictionaryPair& dict) {
  out.write(kMagic, 4);
  write_u32(out, kVersion);
  for (const BlockDiagonalDictionary* d : {&dict.lr, &dict.hr})
    for (int c = 0; c < 3; ++c) write_block(out, d->channel(c));
  write_u32(out, static_cast<std::uint32_t>(dict.patch_side));
  write_u32(out, static_cast<std::uint32_t>(dict.scale));
  write_u32(out, static_cast<std::uint32_t>(dict.feature_count));
  if (!out) throw std::runtime_error("failed to write dictionary stream");
}

void write_dictionary(const std::string& path, const DictionaryPair& dict) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot create dictionary file: " + path);
  write_dictionary(out, dict);
  if (!out) throw std::runtime_error("failed to write dictionary file: " + path);
}

DictionaryPair read_dictionary(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || magic[0] != kMagic[0] || magic[1] != kMagic[1] ||
      magic[2] != kMagic[2] || magic[3] != kMagic[3])
    throw std::runtime_error("not a dictionary file (bad magic)");
  const std::uint32_t version = read_u32(in);
  if (version != kVersion)
    throw std::runtime_error("unsupported dictionary version");

  DictionaryPair dict;
  for (BlockDiagonalDictionary* d : {&dict.lr, &dict.hr})
    for (int c = 0; c < 3; ++c) d->channel(c) = read_block(in);
  dict.patch_side = static_cast<int>(read_u32(in));
  dict.scale = static_cast<int>(read_u32(in));
  dict.feature_count = static_cast<int>(read_u32(in));

  validate(dict.lr, "LR dictionary");
  validate(dict.hr, "HR dictionary");
  const Index plen = static_cast<Index>(dict.patch_side) * dict.patch_side;
  if (dict.lr.atoms() != dict.hr.atoms() || dict.hr.rows() != plen ||
      dict.lr.rows() != dict.feature_count * plen || dict.scale < 1)
    throw std::runtime_error("dictionary metadata is inconsistent");
  return dict;
}

DictionaryPair read_dictionary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dictionary file: " + path);
  return read_dictionary(in);
}

}  // namespace mccsr
