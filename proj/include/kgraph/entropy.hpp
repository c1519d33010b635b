#pragma once

#include "bdm.hpp"
#include "graph.hpp"
#include "random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

namespace kgraph {

/// Shannon entropy (bits) of an empirical distribution given by counts.
template<typename Counts>
double shannon_entropy(const Counts& counts)
{
  double total = 0;
  for (const auto& [key, n] : counts)
    total += static_cast<double>(n);
  if (total <= 0)
    return 0.0;
  double h = 0;
  for (const auto& [key, n] : counts) {
    if (n == 0)
      continue;
    const double p = static_cast<double>(n) / total;
    h -= p * std::log2(p);
  }
  return h == 0.0 ? 0.0 : h; // no -0
}

/// Binary entropy of a Bernoulli(p).
inline double binary_entropy(double p)
{
  if (p <= 0.0 || p >= 1.0)
    return 0.0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

/**
 * Entropy of the 0/1 frequencies over the off-diagonal adjacency entries.
 * The diagonal is left out: it is always 0 in a simple graph.
 * Depends only on n and m.
 */
inline double adjacency_entropy(const Graph& g)
{
  const std::size_t pairs = Graph::max_edges(g.node_count());
  if (pairs == 0)
    return 0.0;
  return binary_entropy(static_cast<double>(g.edge_count()) / static_cast<double>(pairs));
}

/// Entropy of the degree multiset.
inline double degree_entropy(const Graph& g)
{
  std::map<std::uint32_t, std::uint64_t> counts;
  for (auto deg : g.degrees())
    ++counts[deg];
  return shannon_entropy(counts);
}

struct BlockEntropyResult
{
  double bits = 0;
  std::uint32_t labellings = 0; ///< sampled permutations, identity not counted
  std::uint64_t seed = 0;
  std::uint32_t best_labelling = 0; ///< 0 = identity, i = i-th sample
};

/**
 * Minimum, over the identity and `labellings` sampled relabellings, of the
 * Shannon entropy of the d x d block-type distribution (BDM partition).
 *
 * Samples are drawn in sequence from Rng(seed), so the set for k labellings
 * is a prefix of the set for k+1 and the result never increases with k.
 * An upper bound on the minimum over all labellings.
 */
inline BlockEntropyResult block_entropy(const Graph& g, unsigned d, std::uint32_t labellings, std::uint64_t seed)
{
  check_block_size(d);
  if (labellings < 1)
    throw domain_error("block entropy needs at least one labelling");
  BlockEntropyResult r;
  r.labellings = labellings;
  r.seed = seed;
  r.bits = shannon_entropy(block_histogram(g, d));
  Rng rng(seed);
  for (std::uint32_t i = 1; i <= labellings; ++i) {
    const double h = shannon_entropy(block_histogram(g.permuted(rng.permutation(g.node_count())), d));
    if (h < r.bits) {
      r.bits = h;
      r.best_labelling = i;
    }
  }
  return r;
}

struct EntropyReport
{
  double adjacency = 0;
  double degree = 0;
  BlockEntropyResult block;
};

inline EntropyReport entropy_report(const Graph& g, unsigned d, std::uint32_t labellings, std::uint64_t seed)
{
  return { adjacency_entropy(g), degree_entropy(g), block_entropy(g, d, labellings, seed) };
}

} // namespace kgraph
