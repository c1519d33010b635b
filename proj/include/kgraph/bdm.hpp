#pragma once

#include "block.hpp"
#include "ctm.hpp"
#include "errors.hpp"
#include "graph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace kgraph {

/// Code of the d x d adjacency block whose top-left entry is (row0, col0).
inline BlockCode adjacency_block(const Graph& g, Node row0, Node col0, unsigned d)
{
  BlockCode code = 0;
  for (unsigned i = 0; i < d; ++i)
    for (unsigned j = 0; j < d; ++j)
      code = (code << 1) | g.at(row0 + i, col0 + j);
  return code;
}

/// Multiset of the non-overlapping d x d blocks of the adjacency matrix,
/// anchored top-left; the n mod d remainder strip is dropped.
inline std::map<BlockCode, std::uint64_t> block_histogram(const Graph& g, unsigned d)
{
  check_block_size(d);
  std::map<BlockCode, std::uint64_t> hist;
  const Node k = g.node_count() / d;
  for (Node bi = 0; bi < k; ++bi)
    for (Node bj = 0; bj < k; ++bj)
      ++hist[adjacency_block(g, bi * d, bj * d, d)];
  return hist;
}

/// Sum over distinct blocks of log2(multiplicity) + CTM, in block-code order.
inline double bdm_from_histogram(const std::map<BlockCode, std::uint64_t>& hist, const CtmTable& table)
{
  double total = 0;
  for (const auto& [code, n] : hist)
    total += std::log2(static_cast<double>(n)) + table.lookup(code);
  return total;
}

struct BdmValue
{
  double raw = 0;
  unsigned d = 0;
  std::string partition = "nonoverlapping-topleft-discard";
  std::string table_id;
  std::size_t distinct_blocks = 0;
  std::size_t blocks = 0;
  double discarded_fraction = 0; ///< share of matrix entries in the dropped strip
};

inline void check_table(const CtmTable& table, unsigned d)
{
  if (table.d() != d)
    throw domain_error("table has block size " + std::to_string(table.d()) + ", requested d=" + std::to_string(d));
}

inline BdmValue bdm(const Graph& g, unsigned d, const CtmTable& table)
{
  check_table(table, d);
  if (g.node_count() < 1)
    throw domain_error("BDM needs at least one node");
  const auto hist = block_histogram(g, d);
  BdmValue v;
  v.raw = bdm_from_histogram(hist, table);
  v.d = d;
  v.table_id = table_identity(table);
  v.distinct_blocks = hist.size();
  for (const auto& [code, n] : hist)
    v.blocks += n;
  const double n = g.node_count(), kept = static_cast<double>(g.node_count() / d * d);
  v.discarded_fraction = 1.0 - (kept * kept) / (n * n);
  return v;
}

/**
 * Block multiset of a mutable adjacency matrix with O(1) edge-toggle deltas.
 *
 * Toggling (u, v) flips two entries; they fall in at most two blocks (one when
 * both are in the same diagonal block). Entries in the dropped remainder strip
 * touch no block at all.
 */
class BlockHistogram
{
public:
  BlockHistogram(const Graph& g, unsigned d, const CtmTable& table)
    : n_(g.node_count())
    , d_(d)
    , k_(g.node_count() / d)
    , table_(&table)
    , codes_(static_cast<std::size_t>(k_) * k_, 0)
  {
    check_table(table, d);
    for (Node bi = 0; bi < k_; ++bi)
      for (Node bj = 0; bj < k_; ++bj) {
        const BlockCode c = adjacency_block(g, bi * d, bj * d, d);
        codes_[bi * k_ + bj] = c;
        ++counts_[c];
      }
  }

  /// BDM of the current matrix, summed in block-code order.
  double value() const
  {
    std::map<BlockCode, std::uint64_t> sorted(counts_.begin(), counts_.end());
    return bdm_from_histogram(sorted, *table_);
  }

  /// Change in BDM if edge (u, v) were toggled.
  double toggle_delta(Edge e) const
  {
    Change ch[2];
    const unsigned k = changes(e, ch);
    if (k == 0)
      return 0.0;

    // Affected codes with their count before/after; at most four codes.
    std::array<std::pair<BlockCode, std::int64_t>, 4> adj{};
    unsigned used = 0;
    auto bump = [&](BlockCode c, std::int64_t by) {
      for (unsigned i = 0; i < used; ++i)
        if (adj[i].first == c) {
          adj[i].second += by;
          return;
        }
      adj[used++] = { c, by };
    };
    for (unsigned i = 0; i < k; ++i) {
      bump(ch[i].before, -1);
      bump(ch[i].after, +1);
    }
    double delta = 0;
    for (unsigned i = 0; i < used; ++i) {
      const auto [code, by] = adj[i];
      if (by == 0)
        continue;
      const auto it = counts_.find(code);
      const std::int64_t before = it == counts_.end() ? 0 : static_cast<std::int64_t>(it->second);
      delta += term(code, before + by) - term(code, before);
    }
    return delta;
  }

  void toggle(Edge e)
  {
    Change ch[2];
    const unsigned k = changes(e, ch);
    for (unsigned i = 0; i < k; ++i) {
      if (--counts_[ch[i].before] == 0)
        counts_.erase(ch[i].before);
      ++counts_[ch[i].after];
      codes_[ch[i].slot] = ch[i].after;
    }
  }

  std::size_t distinct() const noexcept { return counts_.size(); }

private:
  struct Change
  {
    std::size_t slot;
    BlockCode before;
    BlockCode after;
  };

  double term(BlockCode code, std::int64_t count) const
  {
    return count <= 0 ? 0.0 : std::log2(static_cast<double>(count)) + table_->lookup(code);
  }

  BlockCode mask(Node row, Node col) const
  {
    const unsigned i = row % d_, j = col % d_;
    return BlockCode{ 1 } << (d_ * d_ - 1 - (i * d_ + j));
  }

  unsigned changes(Edge e, Change (&out)[2]) const
  {
    if (e.u == e.v || e.v >= n_)
      throw domain_error("invalid edge for histogram");
    const Node limit = k_ * d_;
    if (e.u >= limit || e.v >= limit)
      return 0;
    const std::size_t s1 = (e.u / d_) * k_ + e.v / d_;
    const std::size_t s2 = (e.v / d_) * k_ + e.u / d_;
    if (s1 == s2) {
      const BlockCode c = codes_[s1];
      out[0] = { s1, c, c ^ mask(e.u, e.v) ^ mask(e.v, e.u) };
      return 1;
    }
    out[0] = { s1, codes_[s1], codes_[s1] ^ mask(e.u, e.v) };
    out[1] = { s2, codes_[s2], codes_[s2] ^ mask(e.v, e.u) };
    return 2;
  }

  std::uint32_t n_;
  unsigned d_;
  Node k_;
  const CtmTable* table_;
  std::vector<BlockCode> codes_;
  std::unordered_map<BlockCode, std::uint64_t> counts_;
};

// Bounds and normalization ------------------------------------------------------

/// Floor(n/d) + smallest stored value.
inline double min_bdm(std::uint32_t n, unsigned d, const CtmTable& table)
{
  check_table(table, d);
  if (n < d)
    throw domain_error("min_bdm needs n >= d");
  if (table.size() == 0)
    throw no_data_error("empty CTM table");
  return static_cast<double>(n / d) + table.min_value();
}

/// BDM of a matrix made of floor(n/d)^2 copies of the least complex block.
/// Diagnostic companion to min_bdm.
inline double uniform_matrix_bdm(std::uint32_t n, unsigned d, const CtmTable& table)
{
  const double slots = static_cast<double>(n / d) * static_cast<double>(n / d);
  return std::log2(slots) + table.min_value();
}

/// Which blocks the maximal composition may draw from.
enum class MaxBdmUniverse
{
  full_alphabet, ///< every d x d block, valued through lookup() (fallback included)
  table_only     ///< stored entries only
};

struct CompositionEntry
{
  BlockCode code = 0;
  double ctm = 0;
  std::uint64_t multiplicity = 0;
};

struct MaxComposition
{
  std::vector<CompositionEntry> used; ///< blocks with multiplicity > 0, most complex first
  std::uint64_t slots = 0;
  std::uint64_t universe_size = 0;
  double min_used_ctm = 0;             ///< smallest value among blocks given a slot
  double max_unused_ctm = -1;          ///< largest value among blocks given none (-1 if none)
  double value = 0;
};

namespace detail {

/// (value, code, copies) groups in descending value order; copies > 1 only for
/// the unseen-block group of a pessimistic table.
struct ValueGroup
{
  double value;
  BlockCode code;
  std::uint64_t copies;
};

inline std::vector<ValueGroup> ranked_universe(const CtmTable& table, MaxBdmUniverse universe)
{
  std::vector<ValueGroup> groups;
  if (universe == MaxBdmUniverse::table_only) {
    for (const auto& [code, v] : table.entries())
      groups.push_back({ v, code, 1 });
  } else if (table.fallback() == FallbackPolicy::pessimistic_max || table.alphabet_size() == 0 ||
             table.d() > 4) {
    if (table.fallback() != FallbackPolicy::pessimistic_max)
      throw domain_error("full-alphabet MaxBDM with a decompose table needs d <= 4");
    for (const auto& [code, v] : table.entries())
      groups.push_back({ v, code, 1 });
    const std::uint64_t unseen = table.alphabet_size() == 0 ? UINT64_MAX : table.alphabet_size() - table.size();
    if (unseen > 0) {
      BlockCode first = 0;
      while (table.contains(first))
        ++first;
      groups.push_back({ table.max_value() + 1.0, first, unseen });
    }
  } else {
    for (BlockCode code = 0; code < table.alphabet_size(); ++code)
      groups.push_back({ table.lookup(code), code, 1 });
  }
  std::stable_sort(groups.begin(), groups.end(), [](const ValueGroup& a, const ValueGroup& b) {
    if (a.value != b.value)
      return a.value > b.value;
    return a.code < b.code;
  });
  return groups;
}

} // namespace detail

/**
 * Greedy maximal composition of floor(n/d)^2 block slots. Slots are dealt one
 * at a time, round-robin, over the blocks in descending CTM order, so the
 * total equals the slot count, multiplicities differ by at most one, and a
 * more complex block never gets fewer copies than a less complex one.
 */
inline MaxComposition max_composition(std::uint32_t n,
                                      unsigned d,
                                      const CtmTable& table,
                                      MaxBdmUniverse universe = MaxBdmUniverse::full_alphabet)
{
  check_table(table, d);
  if (n < d)
    throw domain_error("max_bdm needs n >= d");
  if (table.size() == 0)
    throw no_data_error("empty CTM table");

  const auto groups = detail::ranked_universe(table, universe);
  std::uint64_t universe_size = 0;
  for (const auto& g : groups)
    universe_size = g.copies == UINT64_MAX ? UINT64_MAX : universe_size + g.copies;

  MaxComposition out;
  out.slots = static_cast<std::uint64_t>(n / d) * (n / d);
  out.universe_size = universe_size;

  const std::uint64_t base = universe_size >= out.slots ? 0 : out.slots / universe_size;
  std::uint64_t extra = universe_size >= out.slots ? out.slots : out.slots % universe_size;

  for (const auto& g : groups) {
    // A multi-copy group stands for unseen blocks: walk their codes in order.
    BlockCode code = g.code;
    for (std::uint64_t left = g.copies; left > 0; --left) {
      const std::uint64_t mult = base + (extra > 0 ? 1 : 0);
      if (mult == 0) {
        out.max_unused_ctm = std::max(out.max_unused_ctm, g.value);
        break;
      }
      if (extra > 0)
        --extra;
      out.used.push_back({ code, g.value, mult });
      if (g.copies > 1)
        do
          ++code;
        while (table.contains(code));
    }
  }

  out.min_used_ctm = out.used.empty() ? 0 : out.used.back().ctm;
  for (const auto& e : out.used)
    out.value += std::log2(static_cast<double>(e.multiplicity)) + e.ctm;
  return out;
}

inline double max_bdm(std::uint32_t n,
                      unsigned d,
                      const CtmTable& table,
                      MaxBdmUniverse universe = MaxBdmUniverse::full_alphabet)
{
  return max_composition(n, d, table, universe).value;
}

struct NbdmValue
{
  double normalized = 0;
  double raw = 0;
  double min_bound = 0;
  double max_bound = 0;
  bool clamped = false;
  MaxBdmUniverse universe = MaxBdmUniverse::full_alphabet;
};

inline NbdmValue nbdm_from_raw(double raw,
                               std::uint32_t n,
                               unsigned d,
                               const CtmTable& table,
                               MaxBdmUniverse universe = MaxBdmUniverse::full_alphabet)
{
  NbdmValue v;
  v.raw = raw;
  v.universe = universe;
  v.min_bound = min_bdm(n, d, table);
  v.max_bound = max_bdm(n, d, table, universe);
  if (!(v.max_bound > v.min_bound))
    throw domain_error("degenerate BDM bounds (max <= min)");
  const double x = (raw - v.min_bound) / (v.max_bound - v.min_bound);
  v.normalized = std::clamp(x, 0.0, 1.0);
  v.clamped = v.normalized != x;
  return v;
}

/// (BDM - MinBDM) / (MaxBDM - MinBDM), clamped to [0,1] with a flag.
inline NbdmValue nbdm(const Graph& g,
                      unsigned d,
                      const CtmTable& table,
                      MaxBdmUniverse universe = MaxBdmUniverse::full_alphabet)
{
  return nbdm_from_raw(bdm(g, d, table).raw, g.node_count(), d, table, universe);
}

/// Caches the n-dependent bounds for repeated normalization at fixed (d, table).
class NbdmNormalizer
{
public:
  NbdmNormalizer(unsigned d, const CtmTable& table, MaxBdmUniverse universe = MaxBdmUniverse::full_alphabet)
    : d_(d)
    , table_(&table)
    , universe_(universe)
  {
    check_table(table, d);
  }

  NbdmValue operator()(double raw, std::uint32_t n)
  {
    auto it = bounds_.find(n);
    if (it == bounds_.end())
      it = bounds_.emplace(n, std::pair{ min_bdm(n, d_, *table_), max_bdm(n, d_, *table_, universe_) }).first;
    NbdmValue v;
    v.raw = raw;
    v.universe = universe_;
    std::tie(v.min_bound, v.max_bound) = it->second;
    if (!(v.max_bound > v.min_bound))
      throw domain_error("degenerate BDM bounds (max <= min)");
    const double x = (raw - v.min_bound) / (v.max_bound - v.min_bound);
    v.normalized = std::clamp(x, 0.0, 1.0);
    v.clamped = v.normalized != x;
    return v;
  }

  NbdmValue operator()(const Graph& g) { return (*this)(bdm(g, d_, *table_).raw, g.node_count()); }

private:
  unsigned d_;
  const CtmTable* table_;
  MaxBdmUniverse universe_;
  std::map<std::uint32_t, std::pair<double, double>> bounds_;
};

} // namespace kgraph
