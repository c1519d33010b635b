#pragma once

#include "block.hpp"
#include "errors.hpp"
#include "turing2d.hpp"

#include <boost/crc.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace kgraph {

/**
 * What lookup() returns for a block the enumeration never produced.
 *
 * pessimistic_max: max stored value + 1.
 * decompose:       max stored value + 1 + BDM of the block over the sub-table
 *                  (blocks of the largest proper divisor of d), so unseen
 *                  blocks stay above every seen one but are still ranked by
 *                  their internal structure.
 */
enum class FallbackPolicy
{
  pessimistic_max,
  decompose
};

inline std::string to_string(FallbackPolicy p)
{
  return p == FallbackPolicy::decompose ? "decompose" : "pessimistic-max";
}

inline FallbackPolicy fallback_from_string(const std::string& s)
{
  if (s == "pessimistic-max")
    return FallbackPolicy::pessimistic_max;
  if (s == "decompose")
    return FallbackPolicy::decompose;
  throw domain_error("unknown fallback policy '" + s + "'");
}

/// Block size of the sub-table used by the decompose fallback.
inline unsigned sub_block_size(unsigned d)
{
  for (unsigned s = d / 2; s >= 1; --s)
    if (d % s == 0)
      return s;
  return 0;
}

/// Value as stored in table files: 12 significant digits.
inline std::string format_ctm_value(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline double canonical_ctm_value(double v)
{
  return std::strtod(format_ctm_value(v).c_str(), nullptr);
}

inline std::uint32_t crc32(std::string_view bytes)
{
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

struct CtmMeta
{
  std::string space = "custom";
  std::uint64_t step_bound = 0;
  std::uint64_t halting = 0; ///< halting machines in the enumeration

  bool operator==(const CtmMeta&) const = default;
};

/// Blocks of size d with a complexity estimate in bits, plus a total lookup.
class CtmTable
{
public:
  CtmTable(unsigned d,
           std::map<BlockCode, double> entries,
           CtmMeta meta = {},
           FallbackPolicy fallback = FallbackPolicy::pessimistic_max,
           std::shared_ptr<const CtmTable> sub = nullptr)
    : d_(d)
    , entries_(std::move(entries))
    , meta_(std::move(meta))
    , fallback_(fallback)
    , sub_(std::move(sub))
  {
    check_block_size(d);
    if (entries_.empty())
      throw no_data_error("CTM table has no entries");
    for (const auto& [code, v] : entries_) {
      if (d * d < 64 && (code >> (d * d)) != 0)
        throw domain_error("block code wider than d*d bits");
      if (!std::isfinite(v) || v < 0)
        throw domain_error("CTM values must be finite and non-negative");
    }
    if (fallback_ == FallbackPolicy::decompose) {
      if (!sub_ || sub_->d() != sub_block_size(d) || sub_block_size(d) == 0)
        throw domain_error("decompose fallback needs a sub-table with block size " +
                           std::to_string(sub_block_size(d)));
    } else {
      sub_.reset();
    }

    min_ = std::numeric_limits<double>::infinity();
    max_ = -min_;
    for (const auto& [code, v] : entries_) {
      min_ = std::min(min_, v);
      max_ = std::max(max_, v);
    }

    if (d_ <= 4) {
      dense_.resize(std::size_t{ 1 } << (d_ * d_));
      for (std::size_t code = 0; code < dense_.size(); ++code)
        dense_[code] = compute(code);
    }

    char crc[16];
    std::snprintf(crc, sizeof crc, "%08x", crc32(body()));
    identity_ = crc;
  }

  /// Header and rows of this table and its sub-table chain, without trailer.
  std::string body() const
  {
    std::string out;
    for (const CtmTable* t = this; t; t = t->sub_table()) {
      out += "CTMTABLE v1 d=" + std::to_string(t->d()) + " space=" + t->meta().space +
             " steps=" + std::to_string(t->meta().step_bound) + " total=" + std::to_string(t->meta().halting) +
             " fallback=" + to_string(t->fallback()) + "\n";
      for (const auto& [code, v] : t->entries())
        out += block_to_hex(code, t->d()) + " " + format_ctm_value(v) + "\n";
    }
    return out;
  }

  /// CRC32 of the serialized table, 8 hex digits.
  const std::string& identity() const noexcept { return identity_; }

  unsigned d() const noexcept { return d_; }
  const std::map<BlockCode, double>& entries() const noexcept { return entries_; }
  const CtmMeta& meta() const noexcept { return meta_; }
  FallbackPolicy fallback() const noexcept { return fallback_; }
  const CtmTable* sub_table() const noexcept { return sub_.get(); }
  std::size_t size() const noexcept { return entries_.size(); }

  double min_value() const noexcept { return min_; }
  double max_value() const noexcept { return max_; }

  bool contains(BlockCode code) const { return entries_.count(code) != 0; }

  /// Total: stored value, else the fallback estimate.
  double lookup(BlockCode code) const
  {
    if (!dense_.empty())
      return dense_[code];
    return compute(code);
  }

  double lookup(const BinaryMatrix& block) const
  {
    if (block.rows != d_ || block.cols != d_)
      throw domain_error("block is " + std::to_string(block.rows) + "x" + std::to_string(block.cols) +
                         ", table expects " + std::to_string(d_) + "x" + std::to_string(d_));
    return lookup(block.window(0, 0, d_));
  }

  /// Number of d x d blocks in the alphabet; 0 when it does not fit in 64 bits.
  std::uint64_t alphabet_size() const noexcept { return d_ * d_ >= 64 ? 0 : std::uint64_t{ 1 } << (d_ * d_); }

  bool operator==(const CtmTable& other) const
  {
    if (d_ != other.d_ || entries_ != other.entries_ || meta_ != other.meta_ || fallback_ != other.fallback_)
      return false;
    if (!sub_ || !other.sub_)
      return !sub_ && !other.sub_;
    return *sub_ == *other.sub_;
  }

private:
  double compute(BlockCode code) const
  {
    if (auto it = entries_.find(code); it != entries_.end())
      return it->second;
    if (fallback_ == FallbackPolicy::pessimistic_max)
      return max_ + 1.0;

    const unsigned s = sub_->d();
    const BinaryMatrix m = block_matrix(code, d_);
    std::map<BlockCode, unsigned> counts;
    for (unsigned r = 0; r < d_; r += s)
      for (unsigned c = 0; c < d_; c += s)
        ++counts[m.window(r, c, s)];
    double bits = max_ + 1.0;
    for (const auto& [sub_code, n] : counts)
      bits += std::log2(static_cast<double>(n)) + sub_->lookup(sub_code);
    return bits;
  }

  unsigned d_;
  std::map<BlockCode, double> entries_;
  CtmMeta meta_;
  FallbackPolicy fallback_;
  std::shared_ptr<const CtmTable> sub_;
  double min_ = 0, max_ = 0;
  std::vector<double> dense_;
  std::string identity_;
};

// Building -------------------------------------------------------------------

struct CtmBuildOptions
{
  std::uint32_t states = 2;
  std::uint64_t step_bound = 100;
  unsigned d = 4;
  FallbackPolicy fallback = FallbackPolicy::decompose;
  std::uint32_t max_states = 2; ///< refuse larger spaces unless raised
  unsigned workers = 1;
  /// Pool each block's count over its orbit under the 8 rotations/reflections
  /// of the square and 0/1 complementation.
  bool symmetric = true;
};

/// Block counts of one enumeration slice, for every block size requested.
struct BlockCounts
{
  std::uint64_t machines = 0;
  std::uint64_t halting = 0;
  std::map<unsigned, std::map<BlockCode, std::uint64_t>> by_size;

  void merge(const BlockCounts& o)
  {
    machines += o.machines;
    halting += o.halting;
    for (const auto& [d, counts] : o.by_size)
      for (const auto& [code, n] : counts)
        by_size[d][code] += n;
  }
};

/**
 * Adds an output's blocks: the bounding box is covered by ceil(H/d) x ceil(W/d)
 * non-overlapping windows anchored at its top-left corner; window cells past
 * the box are blank tape (0).
 */
inline void count_output_blocks(const BinaryMatrix& out, unsigned d, std::map<BlockCode, std::uint64_t>& counts)
{
  for (std::uint32_t r = 0; r < out.rows; r += d)
    for (std::uint32_t c = 0; c < out.cols; c += d)
      ++counts[out.window(r, c, d)];
}

inline std::string machine_space_label(std::uint32_t states)
{
  return "tm2d-s" + std::to_string(states) + "-k2";
}

/// Runs machines [begin, end) of the space and counts blocks of each size.
inline BlockCounts enumerate_blocks(std::uint32_t states,
                                    std::uint64_t step_bound,
                                    const std::vector<unsigned>& sizes,
                                    std::uint64_t begin,
                                    std::uint64_t end)
{
  BlockCounts counts;
  for (unsigned d : sizes)
    counts.by_size[d];
  MachineRunner runner(step_bound);
  for (std::uint64_t id = begin; id < end; ++id) {
    const RunResult r = runner.run(TuringMachine2D::from_index(states, id));
    ++counts.machines;
    if (!r.halted)
      continue;
    ++counts.halting;
    for (unsigned d : sizes)
      count_output_blocks(r.output, d, counts.by_size[d]);
  }
  return counts;
}

/// The block sizes a table of size d needs under a fallback policy (d first).
inline std::vector<unsigned> table_chain(unsigned d, FallbackPolicy fallback)
{
  std::vector<unsigned> chain{ d };
  if (fallback == FallbackPolicy::decompose)
    while (sub_block_size(chain.back()) != 0)
      chain.push_back(sub_block_size(chain.back()));
  return chain;
}

/// The 16 images of a block under the dihedral group of the square and
/// complementation (with repetitions for symmetric blocks).
inline std::array<BlockCode, 16> block_orbit(BlockCode code, unsigned d)
{
  std::array<BlockCode, 16> out{};
  auto bit = [&](unsigned i, unsigned j) { return block_bit(code, d, i, j); };
  for (unsigned t = 0; t < 8; ++t) {
    BlockCode img = 0;
    for (unsigned i = 0; i < d; ++i)
      for (unsigned j = 0; j < d; ++j) {
        // Source cell for target (i, j): transpose when t & 1, flip rows when t & 2, flip cols when t & 4.
        unsigned r = (t & 1) ? j : i, c = (t & 1) ? i : j;
        if (t & 2)
          r = d - 1 - r;
        if (t & 4)
          c = d - 1 - c;
        img = (img << 1) | bit(r, c);
      }
    out[t] = img;
    out[t + 8] = img ^ all_ones(d);
  }
  return out;
}

/// Replaces every count by the sum of counts over the block's orbit. The
/// orbit-mates of every produced block become entries too.
inline std::map<BlockCode, std::uint64_t> symmetric_completion(const std::map<BlockCode, std::uint64_t>& counts,
                                                               unsigned d)
{
  std::map<BlockCode, std::uint64_t> out;
  for (const auto& [code, n] : counts)
    for (BlockCode img : block_orbit(code, d))
      out[img] += n;
  return out;
}

/// −log2 of empirical frequencies, rounded to the file precision.
inline std::map<BlockCode, double> ctm_values(const std::map<BlockCode, std::uint64_t>& counts)
{
  std::uint64_t total = 0;
  for (const auto& [code, n] : counts)
    total += n;
  std::map<BlockCode, double> values;
  for (const auto& [code, n] : counts)
    values[code] = canonical_ctm_value(-std::log2(static_cast<double>(n) / static_cast<double>(total)));
  return values;
}

/// Assembles tables (innermost first) from merged counts.
inline CtmTable make_ctm_table(const BlockCounts& counts, const CtmBuildOptions& opt)
{
  const auto chain = table_chain(opt.d, opt.fallback);
  const CtmMeta meta{ machine_space_label(opt.states), opt.step_bound, counts.halting };
  if (counts.halting == 0)
    throw no_data_error("no machine halted within " + std::to_string(opt.step_bound) + " steps");

  std::shared_ptr<const CtmTable> inner;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    const auto c = opt.symmetric ? symmetric_completion(counts.by_size.at(*it), *it) : counts.by_size.at(*it);
    if (c.empty())
      throw no_data_error("enumeration produced no blocks of size " + std::to_string(*it));
    const FallbackPolicy policy = inner ? FallbackPolicy::decompose : FallbackPolicy::pessimistic_max;
    inner = std::make_shared<const CtmTable>(*it, ctm_values(c), meta, policy, inner);
  }
  return *inner;
}

/**
 * Enumerates the whole (states, 2) space. The index range is split into
 * `workers` contiguous slices; slice counts are merged by addition, so the
 * result does not depend on the split. With d = 1 there is nothing to
 * decompose into and the table falls back to pessimistic-max.
 */
inline CtmTable build_ctm_table(const CtmBuildOptions& opt, BlockCounts* stats = nullptr)
{
  if (opt.states < 1 || opt.states > opt.max_states)
    throw domain_error("states must lie in [1," + std::to_string(opt.max_states) + "]");
  check_block_size(opt.d);

  const std::uint64_t total = machine_space_size(opt.states);
  const auto sizes = table_chain(opt.d, opt.fallback);
  const unsigned workers = std::max(1u, opt.workers);

  std::vector<BlockCounts> parts(workers);
  {
    std::vector<std::jthread> threads;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t begin = total * w / workers, end = total * (w + 1) / workers;
      if (workers == 1)
        parts[w] = enumerate_blocks(opt.states, opt.step_bound, sizes, begin, end);
      else
        threads.emplace_back(
          [&, w, begin, end] { parts[w] = enumerate_blocks(opt.states, opt.step_bound, sizes, begin, end); });
    }
  }
  BlockCounts merged;
  for (unsigned d : sizes)
    merged.by_size[d];
  for (const auto& p : parts)
    merged.merge(p);
  if (stats)
    *stats = merged;
  return make_ctm_table(merged, opt);
}

// File format -----------------------------------------------------------------
//
//   CTMTABLE v1 d=<d> space=<label> steps=<bound> total=<halting> [fallback=<policy>]
//   <hex block> <value, 12 significant digits>
//   ...
//   [further sections for the decompose chain, same layout]
//   CRC32 <8 hex digits over every preceding byte>

inline std::string serialize_table(const CtmTable& table)
{
  return table.body() + "CRC32 " + table.identity() + "\n";
}

inline const std::string& table_identity(const CtmTable& table)
{
  return table.identity();
}

namespace detail {

struct TableSection
{
  unsigned d = 0;
  CtmMeta meta;
  FallbackPolicy fallback = FallbackPolicy::pessimistic_max;
  std::map<BlockCode, double> entries;
};

inline bool split_key(const std::string& token, const std::string& key, std::string& value)
{
  if (token.rfind(key + "=", 0) != 0)
    return false;
  value = token.substr(key.size() + 1);
  return true;
}

inline TableSection parse_table_header(const std::string& line, std::size_t lineno)
{
  std::istringstream in(line);
  std::string magic, version;
  in >> magic >> version;
  if (magic != "CTMTABLE")
    throw malformed_row_error("expected CTMTABLE header", lineno);
  if (version != "v1")
    throw version_error("unsupported CTM table version '" + version + "'");

  TableSection sec;
  bool have_d = false;
  std::string token, value;
  while (in >> token) {
    try {
      if (split_key(token, "d", value)) {
        sec.d = static_cast<unsigned>(std::stoul(value));
        have_d = true;
      } else if (split_key(token, "space", value))
        sec.meta.space = value;
      else if (split_key(token, "steps", value))
        sec.meta.step_bound = std::stoull(value);
      else if (split_key(token, "total", value))
        sec.meta.halting = std::stoull(value);
      else if (split_key(token, "fallback", value))
        sec.fallback = fallback_from_string(value);
      else
        throw malformed_row_error("unknown header field '" + token + "'", lineno);
    } catch (const std::logic_error&) {
      throw malformed_row_error("bad header field '" + token + "'", lineno);
    } catch (const domain_error& e) {
      throw malformed_row_error(e.what(), lineno);
    }
  }
  if (!have_d || sec.d < 1 || sec.d > max_block_size)
    throw malformed_row_error("header needs d in [1,8]", lineno);
  return sec;
}

} // namespace detail

inline CtmTable parse_table(const std::string& text)
{
  const std::size_t crc_pos = text.rfind("CRC32 ");
  std::vector<detail::TableSection> sections;
  std::size_t lineno = 0, pos = 0;
  const std::size_t body_end = crc_pos == std::string::npos ? text.size() : crc_pos;

  while (pos < body_end) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos || eol >= body_end)
      throw malformed_row_error("unterminated row", lineno + 1);
    const std::string line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++lineno;

    if (line.rfind("CTMTABLE", 0) == 0) {
      sections.push_back(detail::parse_table_header(line, lineno));
      continue;
    }
    if (sections.empty())
      throw malformed_row_error("expected CTMTABLE header", lineno);
    auto& sec = sections.back();
    const auto sp = line.find(' ');
    BlockCode code = 0;
    if (sp == std::string::npos || !hex_to_block(line.substr(0, sp), sec.d, code))
      throw malformed_row_error("bad block in row '" + line + "'", lineno);
    const std::string num = line.substr(sp + 1);
    char* end = nullptr;
    const double v = std::strtod(num.c_str(), &end);
    if (num.empty() || end != num.c_str() + num.size() || !std::isfinite(v) || v < 0)
      throw malformed_row_error("bad value in row '" + line + "'", lineno);
    if (!sec.entries.emplace(code, v).second)
      throw malformed_row_error("duplicate block in row '" + line + "'", lineno);
  }

  if (sections.empty())
    throw malformed_row_error("missing CTMTABLE header", 1);
  if (crc_pos == std::string::npos)
    throw malformed_row_error("missing CRC32 trailer", lineno + 1);

  std::string crc_line = text.substr(crc_pos + 6);
  while (!crc_line.empty() && (crc_line.back() == '\n' || crc_line.back() == '\r'))
    crc_line.pop_back();
  if (crc_line.size() != 8 || crc_line.find_first_not_of("0123456789abcdefABCDEF") != std::string::npos)
    throw malformed_row_error("bad CRC32 trailer", lineno + 1);
  if (static_cast<std::uint32_t>(std::stoul(crc_line, nullptr, 16)) != crc32(std::string_view(text).substr(0, crc_pos)))
    throw checksum_error("CRC32 mismatch");

  for (std::size_t i = 0; i + 1 < sections.size(); ++i)
    if (sections[i].fallback != FallbackPolicy::decompose)
      throw malformed_row_error("only a decompose table may be followed by a sub-table", lineno);

  std::shared_ptr<const CtmTable> inner;
  for (auto it = sections.rbegin(); it != sections.rend(); ++it) {
    if (it->entries.empty())
      throw malformed_row_error("table section with d=" + std::to_string(it->d) + " has no rows", lineno);
    try {
      inner = std::make_shared<const CtmTable>(it->d, it->entries, it->meta, it->fallback,
                                               it->fallback == FallbackPolicy::decompose ? inner : nullptr);
    } catch (const domain_error& e) {
      throw malformed_row_error(e.what(), lineno);
    }
  }
  return *inner;
}

inline void save_table(const CtmTable& table, const std::string& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw error("cannot open '" + path + "' for writing");
  out << serialize_table(table);
  if (!out)
    throw error("failed writing '" + path + "'");
}

inline CtmTable load_table(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw not_found_error("cannot open CTM table '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_table(buf.str());
}

} // namespace kgraph
