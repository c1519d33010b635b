#pragma once

#include "errors.hpp"
#include "random.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace kgraph {

using Node = std::uint32_t;

/// Unordered node pair, stored normalized with u < v.
struct Edge
{
  Node u = 0;
  Node v = 0;

  Edge() = default;
  Edge(Node a, Node b)
    : u(std::min(a, b))
    , v(std::max(a, b))
  {
  }

  auto operator<=>(const Edge&) const = default;
};

enum class ElementKind : std::uint8_t
{
  edge = 0,
  node = 1
};

/// An edge or a node of a graph. Orders edges before nodes, then by indices.
struct GraphElement
{
  ElementKind kind = ElementKind::edge;
  Node u = 0;
  Node v = 0; // unused for nodes, kept 0

  static GraphElement of_edge(Edge e) { return { ElementKind::edge, e.u, e.v }; }
  static GraphElement of_node(Node x) { return { ElementKind::node, x, 0 }; }

  Edge edge() const { return { u, v }; }

  auto operator<=>(const GraphElement&) const = default;
};

/**
 * Undirected simple graph on nodes 0..n-1.
 *
 * Stored as a dense symmetric adjacency matrix with zero diagonal; the edge
 * list view is derived from it. Values are immutable: edits return new graphs.
 */
class Graph
{
public:
  Graph() = default;

  explicit Graph(std::uint32_t node_count)
    : n_(node_count)
    , adj_(static_cast<std::size_t>(node_count) * node_count, 0)
  {
  }

  /// Throws domain_error on self-loops, out-of-range endpoints or duplicates.
  Graph(std::uint32_t node_count, const std::vector<Edge>& edges)
    : Graph(node_count)
  {
    for (const Edge& e : edges) {
      if (e.u == e.v)
        throw domain_error("self-loop on node " + std::to_string(e.u));
      if (e.v >= n_)
        throw domain_error("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                           ") out of range for " + std::to_string(n_) + " nodes");
      if (has_edge(e.u, e.v))
        throw domain_error("duplicate edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
      set(e.u, e.v, true);
    }
  }

  std::uint32_t node_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return m_; }

  static std::size_t max_edges(std::uint32_t n) noexcept
  {
    return static_cast<std::size_t>(n) * (n == 0 ? 0 : n - 1) / 2;
  }

  bool has_edge(Node u, Node v) const noexcept
  {
    return u < n_ && v < n_ && adj_[index(u, v)] != 0;
  }

  /// Adjacency matrix entry; i == j is always 0.
  std::uint8_t at(Node i, Node j) const noexcept { return adj_[index(i, j)]; }

  bool contains(const GraphElement& e) const noexcept
  {
    return e.kind == ElementKind::node ? e.u < n_ : (e.u != e.v && has_edge(e.u, e.v));
  }

  /// Edges sorted lexicographically.
  std::vector<Edge> edges() const
  {
    std::vector<Edge> out;
    out.reserve(m_);
    for (Node u = 0; u < n_; ++u)
      for (Node v = u + 1; v < n_; ++v)
        if (adj_[index(u, v)])
          out.emplace_back(u, v);
    return out;
  }

  /// Node pairs that are not edges, sorted lexicographically.
  std::vector<Edge> non_edges() const
  {
    std::vector<Edge> out;
    out.reserve(max_edges(n_) - m_);
    for (Node u = 0; u < n_; ++u)
      for (Node v = u + 1; v < n_; ++v)
        if (!adj_[index(u, v)])
          out.emplace_back(u, v);
    return out;
  }

  std::vector<std::uint32_t> degrees() const
  {
    std::vector<std::uint32_t> deg(n_, 0);
    for (Node u = 0; u < n_; ++u)
      for (Node v = 0; v < n_; ++v)
        deg[u] += adj_[index(u, v)];
    return deg;
  }

  std::vector<Node> neighbours(Node u) const
  {
    std::vector<Node> out;
    for (Node v = 0; v < n_; ++v)
      if (adj_[index(u, v)])
        out.push_back(v);
    return out;
  }

  Graph with_edge(Edge e) const
  {
    if (e.u == e.v || e.v >= n_)
      throw domain_error("invalid edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
    Graph g = *this;
    g.set(e.u, e.v, true);
    return g;
  }

  Graph without_edge(Edge e) const
  {
    if (!has_edge(e.u, e.v))
      throw not_found_error("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") not in graph");
    Graph g = *this;
    g.set(e.u, e.v, false);
    return g;
  }

  /// Relabels by an old->new permutation.
  Graph permuted(const std::vector<Node>& perm) const
  {
    Graph g(n_);
    for (Node u = 0; u < n_; ++u)
      for (Node v = u + 1; v < n_; ++v)
        if (adj_[index(u, v)])
          g.set(perm[u], perm[v], true);
    return g;
  }

  /// Subgraph induced on nodes 0..k-1.
  Graph prefix(std::uint32_t k) const
  {
    Graph g(std::min(k, n_));
    for (Node u = 0; u < g.n_; ++u)
      for (Node v = u + 1; v < g.n_; ++v)
        if (adj_[index(u, v)])
          g.set(u, v, true);
    return g;
  }

  bool operator==(const Graph&) const = default;

private:
  std::size_t index(Node i, Node j) const noexcept { return static_cast<std::size_t>(i) * n_ + j; }

  void set(Node u, Node v, bool present)
  {
    const std::uint8_t bit = present ? 1 : 0;
    if (adj_[index(u, v)] == bit)
      return;
    adj_[index(u, v)] = bit;
    adj_[index(v, u)] = bit;
    m_ = present ? m_ + 1 : m_ - 1;
  }

  std::uint32_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<std::uint8_t> adj_;
};

// Generators ----------------------------------------------------------------

inline Graph generate_empty(std::uint32_t n)
{
  return Graph(n);
}

inline Graph generate_complete(std::uint32_t n)
{
  std::vector<Edge> edges;
  for (Node u = 0; u < n; ++u)
    for (Node v = u + 1; v < n; ++v)
      edges.emplace_back(u, v);
  return Graph(n, edges);
}

inline Graph generate_cycle(std::uint32_t n)
{
  if (n < 3)
    throw domain_error("cycle needs at least 3 nodes");
  std::vector<Edge> edges;
  for (Node u = 0; u < n; ++u)
    edges.emplace_back(u, (u + 1) % n);
  return Graph(n, edges);
}

/// Star with centre 0.
inline Graph generate_star(std::uint32_t n)
{
  std::vector<Edge> edges;
  for (Node v = 1; v < n; ++v)
    edges.emplace_back(0, v);
  return Graph(n, edges);
}

/**
 * G(n, p). Pairs are visited in lexicographic order (u < v) and each draws one
 * uniform01() from Rng(seed); the edge is kept when the draw is < p.
 */
inline Graph generate_er(std::uint32_t n, double p, std::uint64_t seed)
{
  if (!(p >= 0.0 && p <= 1.0))
    throw domain_error("edge probability must lie in [0,1]");
  Rng rng(seed);
  std::vector<Edge> edges;
  for (Node u = 0; u < n; ++u)
    for (Node v = u + 1; v < n; ++v)
      if (rng.uniform01() < p)
        edges.emplace_back(u, v);
  return Graph(n, edges);
}

/// G(n, m): m distinct pairs drawn uniformly (prefix of a seeded shuffle).
inline Graph generate_gnm(std::uint32_t n, std::size_t m, std::uint64_t seed)
{
  std::vector<Edge> all = generate_complete(n).edges();
  if (m > all.size())
    throw domain_error("too many edges for " + std::to_string(n) + " nodes");
  Rng rng(seed);
  for (std::size_t i = 0; i < m; ++i)
    std::swap(all[i], all[i + rng.below(all.size() - i)]);
  all.resize(m);
  return Graph(n, all);
}

/// BIT-predicate graph: x < y adjacent iff bit x of y is set.
inline Graph generate_rado(std::uint32_t n)
{
  if (n < 1)
    throw domain_error("rado graph needs at least 1 node");
  std::vector<Edge> edges;
  for (Node y = 1; y < n; ++y)
    for (Node x = 0; x < y && x < 32; ++x)
      if ((y >> x) & 1u)
        edges.emplace_back(x, y);
  return Graph(n, edges);
}

// Element edits --------------------------------------------------------------

/**
 * G minus one element. Deleting node x drops its incident edges and shifts
 * every label above x down by one.
 */
inline Graph delete_element(const Graph& g, const GraphElement& e)
{
  if (e.kind == ElementKind::edge)
    return g.without_edge(e.edge());

  if (e.u >= g.node_count())
    throw not_found_error("node " + std::to_string(e.u) + " not in graph");
  std::vector<Edge> kept;
  for (const Edge& ed : g.edges()) {
    if (ed.u == e.u || ed.v == e.u)
      continue;
    kept.emplace_back(ed.u > e.u ? ed.u - 1 : ed.u, ed.v > e.u ? ed.v - 1 : ed.v);
  }
  return Graph(g.node_count() - 1, kept);
}

// Edge-list text format -------------------------------------------------------

/// First line node count, then one "u v" line per edge (u < v, sorted), LF endings.
inline std::string serialize(const Graph& g)
{
  std::string out = std::to_string(g.node_count()) + "\n";
  for (const Edge& e : g.edges()) {
    out += std::to_string(e.u);
    out += ' ';
    out += std::to_string(e.v);
    out += '\n';
  }
  return out;
}

namespace detail {

inline bool parse_uint(std::string_view s, std::uint64_t& out)
{
  if (s.empty() || s.size() > 19)
    return false;
  std::uint64_t x = 0;
  for (char c : s) {
    if (c < '0' || c > '9')
      return false;
    x = x * 10 + static_cast<std::uint64_t>(c - '0');
  }
  out = x;
  return true;
}

inline std::vector<std::string_view> split_lines(std::string_view text)
{
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos)
      end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

} // namespace detail

/**
 * Parses the edge-list format. Accepts any edge order and either endpoint
 * order; rejects out-of-range nodes, self-loops and duplicates.
 */
inline Graph deserialize(std::string_view text)
{
  const auto lines = detail::split_lines(text);
  if (lines.empty())
    throw parse_error("missing node count", 1);

  std::uint64_t n = 0;
  if (!detail::parse_uint(lines[0], n) || n > UINT32_MAX)
    throw parse_error("invalid node count '" + std::string(lines[0]) + "'", 1);

  std::vector<Edge> edges;
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(n) * n, 0);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    if (line.empty())
      continue;
    const std::size_t sp = line.find(' ');
    std::uint64_t a = 0, b = 0;
    if (sp == std::string_view::npos || !detail::parse_uint(line.substr(0, sp), a) ||
        !detail::parse_uint(line.substr(sp + 1), b))
      throw parse_error("expected 'u v', got '" + std::string(line) + "'", i + 1);
    if (a >= n || b >= n)
      throw parse_error("node out of range in '" + std::string(line) + "'", i + 1);
    if (a == b)
      throw parse_error("self-loop in '" + std::string(line) + "'", i + 1);
    const Edge e(static_cast<Node>(a), static_cast<Node>(b));
    std::uint8_t& mark = seen[static_cast<std::size_t>(e.u) * n + e.v];
    if (mark)
      throw parse_error("duplicate edge '" + std::string(line) + "'", i + 1);
    mark = 1;
    edges.push_back(e);
  }
  return Graph(static_cast<std::uint32_t>(n), edges);
}

} // namespace kgraph
