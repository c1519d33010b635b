#pragma once

#include "bdm.hpp"
#include "graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace kgraph {

/// BDM(G) - BDM(G \ e). Positive: e carries information (removal simplifies G).
/// Negative: removing e makes G more random.
inline double contribution(const Graph& g, const GraphElement& e, unsigned d, const CtmTable& table)
{
  if (!g.contains(e))
    throw not_found_error(e.kind == ElementKind::node ? "node not in graph" : "edge not in graph");
  if (e.kind == ElementKind::edge) {
    const BlockHistogram hist(g, d, table);
    return -hist.toggle_delta(e.edge());
  }
  const Graph smaller = delete_element(g, e);
  if (smaller.node_count() == 0)
    return bdm(g, d, table).raw;
  return bdm(g, d, table).raw - bdm(smaller, d, table).raw;
}

struct SignatureEntry
{
  GraphElement element;
  double bits = 0;
};

enum class SignatureKind
{
  edges,
  nodes,
  both
};

struct Signature
{
  std::vector<SignatureEntry> entries; ///< most positive first, ties by element order
  unsigned d = 0;
  std::string table_id;

  std::size_t size() const noexcept { return entries.size(); }
  std::vector<double> values() const
  {
    std::vector<double> v;
    v.reserve(entries.size());
    for (const auto& e : entries)
      v.push_back(e.bits);
    return v;
  }
};

inline void sort_signature(std::vector<SignatureEntry>& entries)
{
  std::stable_sort(entries.begin(), entries.end(), [](const SignatureEntry& a, const SignatureEntry& b) {
    if (a.bits != b.bits)
      return a.bits > b.bits;
    return a.element < b.element;
  });
}

/**
 * Contribution of every element of the requested kind. Edge contributions
 * come from one block histogram (two block lookups per edge); node
 * contributions recompute BDM of G minus the node.
 */
inline Signature signature(const Graph& g, SignatureKind kind, unsigned d, const CtmTable& table)
{
  Signature sig;
  sig.d = d;
  sig.table_id = table_identity(table);
  check_table(table, d);
  if (g.node_count() == 0)
    return sig;

  if (kind != SignatureKind::nodes) {
    const BlockHistogram hist(g, d, table);
    for (const Edge& e : g.edges())
      sig.entries.push_back({ GraphElement::of_edge(e), -hist.toggle_delta(e) });
  }
  if (kind != SignatureKind::edges) {
    const double whole = bdm(g, d, table).raw;
    for (Node x = 0; x < g.node_count(); ++x) {
      const Graph smaller = delete_element(g, GraphElement::of_node(x));
      const double rest = smaller.node_count() == 0 ? 0.0 : bdm(smaller, d, table).raw;
      sig.entries.push_back({ GraphElement::of_node(x), whole - rest });
    }
  }
  sort_signature(sig.entries);
  return sig;
}

struct ElementClassification
{
  std::vector<GraphElement> negative; ///< N(G): removal moves G toward randomness
  std::vector<GraphElement> positive; ///< P(G): removal moves G away from randomness
  std::vector<GraphElement> neutral;
  double threshold = 0;
};

/// Threshold log2(n_nodes) + slack. Strictly beyond it on either side is N or P.
inline ElementClassification classify(const Signature& sig, std::uint32_t n_nodes, double slack = 1.0)
{
  if (n_nodes < 1)
    throw domain_error("classification needs at least one node");
  if (slack < 0)
    throw domain_error("slack must be non-negative");
  ElementClassification out;
  out.threshold = std::log2(static_cast<double>(n_nodes)) + slack;
  for (const auto& e : sig.entries) {
    if (e.bits < -out.threshold)
      out.negative.push_back(e.element);
    else if (e.bits > out.threshold)
      out.positive.push_back(e.element);
    else
      out.neutral.push_back(e.element);
  }
  return out;
}

namespace detail {

inline double median(std::vector<double> v)
{
  if (v.empty())
    return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

} // namespace detail

/// Median absolute deviation around the median.
inline double median_absolute_deviation(const std::vector<double>& values)
{
  const double med = detail::median(values);
  std::vector<double> dev;
  dev.reserve(values.size());
  for (double x : values)
    dev.push_back(std::fabs(x - med));
  return detail::median(std::move(dev));
}

/// Denominator of the relative index.
enum class ProgrammabilityScale
{
  max_magnitude, ///< largest |contribution|
  cardinality    ///< number of entries
};

/// MAD of the contributions over the scale; 0 when the scale is 0.
inline double relative_programmability(const Signature& sig,
                                       ProgrammabilityScale scale = ProgrammabilityScale::max_magnitude)
{
  const auto v = sig.values();
  double n = 0;
  if (scale == ProgrammabilityScale::cardinality)
    n = static_cast<double>(v.size());
  else
    for (double x : v)
      n = std::max(n, std::fabs(x));
  if (n == 0)
    return 0.0;
  return std::min(1.0, median_absolute_deviation(v) / n);
}

/**
 * Area under the piecewise-linear curve through (rank, |value|), values
 * sorted by decreasing magnitude and ranks 1..k. A single point counts as a
 * unit-width bar, so its area is its own value.
 */
inline double signature_area(std::vector<double> magnitudes)
{
  if (magnitudes.empty())
    return 0.0;
  for (double& x : magnitudes)
    x = std::fabs(x);
  std::sort(magnitudes.begin(), magnitudes.end(), std::greater<>());
  if (magnitudes.size() == 1)
    return magnitudes[0];
  double area = 0;
  for (std::size_t i = 1; i < magnitudes.size(); ++i)
    area += 0.5 * (magnitudes[i - 1] + magnitudes[i]);
  return area;
}

/// |S(positive part) - S(negative part)| / max of the two; 0 when both vanish.
inline double absolute_programmability(const Signature& sig)
{
  std::vector<double> pos, neg;
  for (const auto& e : sig.entries) {
    if (e.bits > 0)
      pos.push_back(e.bits);
    else if (e.bits < 0)
      neg.push_back(e.bits);
  }
  const double sp = signature_area(pos), sn = signature_area(neg);
  const double m = std::max(sp, sn);
  if (m == 0)
    return 0.0;
  return std::fabs(sp - sn) / m;
}

} // namespace kgraph
