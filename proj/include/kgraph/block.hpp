#pragma once

#include "errors.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace kgraph {

/// Row-major bits of a d x d binary block, first cell in the most significant
/// used bit. Blocks up to 8 x 8 fit.
using BlockCode = std::uint64_t;

inline constexpr unsigned max_block_size = 8;

inline void check_block_size(unsigned d)
{
  if (d < 1 || d > max_block_size)
    throw domain_error("block size must lie in [1," + std::to_string(max_block_size) + "]");
}

/// Rectangular 0/1 matrix (machine outputs, hand-built blocks).
struct BinaryMatrix
{
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<std::uint8_t> cells; // row-major

  BinaryMatrix() = default;
  BinaryMatrix(std::uint32_t r, std::uint32_t c)
    : rows(r)
    , cols(c)
    , cells(static_cast<std::size_t>(r) * c, 0)
  {
  }

  std::uint8_t at(std::uint32_t r, std::uint32_t c) const { return cells[static_cast<std::size_t>(r) * cols + c]; }
  std::uint8_t& at(std::uint32_t r, std::uint32_t c) { return cells[static_cast<std::size_t>(r) * cols + c]; }

  /// d x d window anchored at (r0, c0); cells beyond the matrix read as 0.
  BlockCode window(std::uint32_t r0, std::uint32_t c0, unsigned d) const
  {
    BlockCode code = 0;
    for (unsigned i = 0; i < d; ++i)
      for (unsigned j = 0; j < d; ++j) {
        const std::uint32_t r = r0 + i, c = c0 + j;
        code = (code << 1) | ((r < rows && c < cols) ? at(r, c) : 0u);
      }
    return code;
  }

  bool operator==(const BinaryMatrix&) const = default;
};

inline BlockCode block_code(const BinaryMatrix& m)
{
  if (m.rows != m.cols)
    throw domain_error("block must be square");
  check_block_size(m.rows);
  return m.window(0, 0, m.rows);
}

inline BinaryMatrix block_matrix(BlockCode code, unsigned d)
{
  BinaryMatrix m(d, d);
  for (unsigned k = 0; k < d * d; ++k)
    m.cells[k] = static_cast<std::uint8_t>((code >> (d * d - 1 - k)) & 1u);
  return m;
}

/// Bit (i, j) of a d x d code.
inline unsigned block_bit(BlockCode code, unsigned d, unsigned i, unsigned j)
{
  return static_cast<unsigned>((code >> (d * d - 1 - (i * d + j))) & 1u);
}

inline BlockCode all_ones(unsigned d)
{
  return d * d == 64 ? ~BlockCode{ 0 } : ((BlockCode{ 1 } << (d * d)) - 1);
}

/// Hex digits needed for a d x d block.
inline unsigned hex_width(unsigned d)
{
  return (d * d + 3) / 4;
}

inline std::string block_to_hex(BlockCode code, unsigned d)
{
  static constexpr char digits[] = "0123456789abcdef";
  std::string s(hex_width(d), '0');
  for (std::size_t i = s.size(); i-- > 0; code >>= 4)
    s[i] = digits[code & 0xf];
  return s;
}

/// Inverse of block_to_hex; returns false on bad width, digit or padding.
inline bool hex_to_block(std::string_view hex, unsigned d, BlockCode& out)
{
  if (hex.size() != hex_width(d))
    return false;
  BlockCode code = 0;
  for (char c : hex) {
    unsigned v;
    if (c >= '0' && c <= '9')
      v = static_cast<unsigned>(c - '0');
    else if (c >= 'a' && c <= 'f')
      v = static_cast<unsigned>(c - 'a' + 10);
    else if (c >= 'A' && c <= 'F')
      v = static_cast<unsigned>(c - 'A' + 10);
    else
      return false;
    code = (code << 4) | v;
  }
  if (d * d < 64 && (code >> (d * d)) != 0)
    return false;
  out = code;
  return true;
}

} // namespace kgraph
