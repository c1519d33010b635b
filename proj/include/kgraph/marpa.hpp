#pragma once

#include "bdm.hpp"
#include "graph.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kgraph {

/// Complexities closer than this are ties.
inline constexpr double complexity_tie_eps = 1e-9;

enum class StepMode
{
  add,
  remove
};

enum class MarMode
{
  bottomup, ///< from the empty graph, adding edges
  topdown   ///< from the complete graph, deleting edges
};

inline std::string to_string(MarMode m)
{
  return m == MarMode::bottomup ? "bottomup" : "topdown";
}

enum class StopReason
{
  target_size,
  complexity_decrease
};

inline std::string to_string(StopReason r)
{
  return r == StopReason::target_size ? "target-size" : "complexity-decrease";
}

struct StepResult
{
  bool improved = false; ///< best candidate >= current complexity (ties count)
  Edge edge;             ///< best candidate, set either way
  double complexity = 0; ///< BDM after applying `edge`
  double gain = 0;       ///< complexity - current
};

namespace detail {

/// Best toggle over `candidates`, scanned from `rotation` (mod size) onward so
/// that ties go to the earliest candidate in the rotated order.
inline StepResult best_toggle(const BlockHistogram& hist,
                              double current,
                              const std::vector<Edge>& candidates,
                              std::size_t rotation)
{
  if (candidates.empty())
    throw domain_error("no candidate perturbation");
  StepResult best;
  bool have = false;
  const std::size_t m = candidates.size();
  for (std::size_t k = 0; k < m; ++k) {
    const Edge& e = candidates[(k + rotation) % m];
    const double score = current + hist.toggle_delta(e);
    if (!have || score > best.complexity + complexity_tie_eps) {
      best.edge = e;
      best.complexity = score;
      have = true;
    }
  }
  best.gain = best.complexity - current;
  best.improved = best.gain >= -complexity_tie_eps;
  return best;
}

} // namespace detail

/**
 * One greedy move: the single edge addition (or deletion) with the largest
 * resulting BDM, lexicographically smallest edge on ties.
 */
inline StepResult marpa_step(const Graph& g, StepMode mode, unsigned d, const CtmTable& table, std::size_t rotation = 0)
{
  const auto candidates = mode == StepMode::add ? g.non_edges() : g.edges();
  if (candidates.empty())
    throw domain_error(mode == StepMode::add ? "graph is already complete" : "graph has no edges");
  const BlockHistogram hist(g, d, table);
  return detail::best_toggle(hist, hist.value(), candidates, rotation);
}

struct MarConfig
{
  std::uint32_t nodes = 8;
  /// Constrained run: walk to exactly this many edges, through decreases.
  /// Unset: stop at the first step whose best candidate lowers BDM.
  std::optional<std::size_t> target_edges;
  unsigned d = 4;
  const CtmTable* table = nullptr;
  std::string tie_break = "lexicographic-rotated";
  std::uint64_t seed = 0;    ///< provenance only; the search is deterministic
  std::size_t rotation = 0;  ///< tie-break order offset (ensemble member index)
};

struct MarStep
{
  Edge edge;
  double complexity = 0;
  std::size_t edge_count = 0;
};

struct MarTrajectory
{
  MarConfig config;
  MarMode mode = MarMode::bottomup;
  double initial_complexity = 0;
  std::vector<MarStep> steps;
  StopReason stop = StopReason::target_size;
  Graph final;
  std::size_t best_index = 0; ///< state with maximal BDM: 0 = start, i = after step i
  double best_complexity = 0;
  Graph best;

  const Graph& result() const noexcept { return mode == MarMode::topdown && !config.target_edges ? best : final; }
  double result_complexity() const noexcept
  {
    return mode == MarMode::topdown && !config.target_edges ? best_complexity
                                                            : (steps.empty() ? initial_complexity : steps.back().complexity);
  }
};

inline void check_config(const MarConfig& cfg)
{
  if (cfg.nodes < 1)
    throw domain_error("MAR target needs at least one node");
  if (!cfg.table)
    throw domain_error("MAR config has no CTM table");
  check_table(*cfg.table, cfg.d);
  if (cfg.target_edges && *cfg.target_edges > Graph::max_edges(cfg.nodes))
    throw domain_error("target edge count exceeds n(n-1)/2");
}

/**
 * Greedy MAR search. Bottom-up starts from the empty graph and adds edges;
 * top-down starts from the complete graph and deletes them. A free run stops
 * when the best candidate strictly lowers BDM (or no candidate is left); a
 * constrained run stops on the target edge count.
 *
 * result(): for a free top-down run the highest-BDM state of the trajectory,
 * otherwise the final state.
 */
inline MarTrajectory marpa_run(const MarConfig& cfg, MarMode mode)
{
  check_config(cfg);
  MarTrajectory traj;
  traj.config = cfg;
  traj.mode = mode;

  Graph g = mode == MarMode::bottomup ? generate_empty(cfg.nodes) : generate_complete(cfg.nodes);
  const std::size_t target =
    cfg.target_edges ? *cfg.target_edges : (mode == MarMode::bottomup ? Graph::max_edges(cfg.nodes) : 0);
  const bool adding = mode == MarMode::bottomup;
  if (cfg.target_edges && (adding ? target < g.edge_count() : target > g.edge_count()))
    throw domain_error("target edge count unreachable in " + to_string(mode) + " mode");

  BlockHistogram hist(g, cfg.d, *cfg.table);
  double current = hist.value();
  traj.initial_complexity = current;
  traj.best_complexity = current;
  traj.best = g;
  traj.stop = StopReason::target_size;

  while (g.edge_count() != target) {
    const auto candidates = adding ? g.non_edges() : g.edges();
    const StepResult step = detail::best_toggle(hist, current, candidates, cfg.rotation);
    if (!step.improved && !cfg.target_edges) {
      traj.stop = StopReason::complexity_decrease;
      break;
    }
    hist.toggle(step.edge);
    g = adding ? g.with_edge(step.edge) : g.without_edge(step.edge);
    current = hist.value();
    traj.steps.push_back({ step.edge, current, g.edge_count() });
    if (current >= traj.best_complexity - complexity_tie_eps) {
      traj.best_complexity = std::max(traj.best_complexity, current);
      traj.best_index = traj.steps.size();
      traj.best = g;
    }
  }
  traj.final = g;
  return traj;
}

struct EnsembleMember
{
  Graph graph;
  double complexity = 0;
  std::size_t rotation = 0;
};

/// `count` runs, member i breaking ties in lexicographic order rotated by i.
inline std::vector<EnsembleMember> mar_ensemble(const MarConfig& cfg, std::size_t count, MarMode mode)
{
  if (count < 1)
    throw domain_error("ensemble needs at least one member");
  std::vector<EnsembleMember> out;
  for (std::size_t i = 0; i < count; ++i) {
    MarConfig c = cfg;
    c.rotation = cfg.rotation + i;
    const auto traj = marpa_run(c, mode);
    out.push_back({ traj.result(), traj.result_complexity(), c.rotation });
  }
  return out;
}

struct Deficiency
{
  double bits = 0;
  double raw = 0;      ///< before clamping
  bool clamped = false;
  double reference_bdm = 0;
  double graph_bdm = 0;
  Graph reference;
};

/// BDM of a MAR reference with the same node and edge counts, minus BDM(G),
/// clamped below at 0.
inline Deficiency randomness_deficiency(const Graph& g, unsigned d, const CtmTable& table, MarMode mode = MarMode::bottomup)
{
  if (g.node_count() < 1)
    throw domain_error("deficiency needs a non-empty graph");
  MarConfig cfg;
  cfg.nodes = g.node_count();
  cfg.target_edges = g.edge_count();
  cfg.d = d;
  cfg.table = &table;
  const auto traj = marpa_run(cfg, mode);

  Deficiency out;
  out.reference = traj.final;
  out.reference_bdm = bdm(traj.final, d, table).raw;
  out.graph_bdm = bdm(g, d, table).raw;
  out.raw = out.reference_bdm - out.graph_bdm;
  out.bits = std::max(0.0, out.raw);
  out.clamped = out.raw < 0;
  return out;
}

} // namespace kgraph
