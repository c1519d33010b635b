#pragma once

#include "bdm.hpp"
#include "dynamics.hpp"
#include "entropy.hpp"
#include "graph.hpp"
#include "marpa.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace kgraph {

// Generator specs -------------------------------------------------------------

/// Parsed "KIND:ARGS" generator spec.
struct GeneratorSpec
{
  std::string kind;
  std::uint32_t n = 0;
  double p = 0;          // er
  std::size_t m = 0;     // gnm
  std::uint64_t seed = 0;
  std::string label;     // the spec as written
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep)
{
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    out.push_back(cur);
  if (!s.empty() && s.back() == sep)
    out.emplace_back();
  return out;
}

inline std::uint64_t to_u64(const std::string& s, const std::string& what)
{
  std::uint64_t v = 0;
  if (!parse_uint(s, v))
    throw domain_error("bad " + what + " '" + s + "'");
  return v;
}

} // namespace detail

/**
 * complete:N  empty:N  cycle:N  star:N  rado:N
 * er:N:P[:SEED]  gnm:N:M[:SEED]   (SEED defaults to `default_seed`)
 */
inline GeneratorSpec parse_generator(const std::string& spec, std::uint64_t default_seed = 0)
{
  const auto parts = detail::split(spec, ':');
  if (parts.size() < 2)
    throw domain_error("generator spec '" + spec + "' is not KIND:ARGS");
  GeneratorSpec g;
  g.kind = parts[0];
  g.label = spec;
  g.seed = default_seed;
  const auto n = detail::to_u64(parts[1], "node count");
  if (n > 4096)
    throw domain_error("node count too large");
  g.n = static_cast<std::uint32_t>(n);

  if (g.kind == "complete" || g.kind == "empty" || g.kind == "cycle" || g.kind == "star" || g.kind == "rado") {
    if (parts.size() != 2)
      throw domain_error("generator '" + g.kind + "' takes one argument");
  } else if (g.kind == "er") {
    if (parts.size() < 3 || parts.size() > 4)
      throw domain_error("er takes N:P[:SEED]");
    char* end = nullptr;
    g.p = std::strtod(parts[2].c_str(), &end);
    if (parts[2].empty() || *end != '\0')
      throw domain_error("bad probability '" + parts[2] + "'");
    if (parts.size() == 4)
      g.seed = detail::to_u64(parts[3], "seed");
  } else if (g.kind == "gnm") {
    if (parts.size() < 3 || parts.size() > 4)
      throw domain_error("gnm takes N:M[:SEED]");
    g.m = detail::to_u64(parts[2], "edge count");
    if (parts.size() == 4)
      g.seed = detail::to_u64(parts[3], "seed");
  } else {
    throw domain_error("unknown generator '" + g.kind + "'");
  }
  return g;
}

inline Graph generate(const GeneratorSpec& g)
{
  if (g.kind == "complete")
    return generate_complete(g.n);
  if (g.kind == "empty")
    return generate_empty(g.n);
  if (g.kind == "cycle")
    return generate_cycle(g.n);
  if (g.kind == "star")
    return generate_star(g.n);
  if (g.kind == "rado")
    return generate_rado(g.n);
  if (g.kind == "er")
    return generate_er(g.n, g.p, g.seed);
  if (g.kind == "gnm")
    return generate_gnm(g.n, g.m, g.seed);
  throw domain_error("unknown generator '" + g.kind + "'");
}

// Experiment records ------------------------------------------------------------

inline constexpr int record_schema_version = 1;

inline const std::vector<std::string>& record_columns()
{
  static const std::vector<std::string> cols{ "graph_id",          "generator",      "seed", "n",   "m",
                                              "adjacency_entropy", "degree_entropy", "block_entropy",
                                              "bdm",               "nbdm",           "p_r",  "p_a", "deficiency" };
  return cols;
}

struct ExperimentRecord
{
  std::string graph_id;
  std::string generator;
  std::uint64_t seed = 0;
  std::uint32_t n = 0;
  std::size_t m = 0;
  double adjacency_entropy = 0;
  double degree_entropy = 0;
  double block_entropy = 0;
  double bdm = 0;
  double nbdm = 0;
  double p_r = 0;
  double p_a = 0;
  std::optional<double> deficiency;
};

struct MeasureOptions
{
  unsigned d = 4;
  std::uint32_t labellings = 10;
  std::uint64_t seed = 0; ///< labelling sampler seed
  bool deficiency = false;
};

/// Entropies, BDM, NBDM and the two indices over the edge signature.
inline ExperimentRecord measure(const Graph& g,
                                const std::string& id,
                                const std::string& generator,
                                std::uint64_t seed,
                                const CtmTable& table,
                                const MeasureOptions& opt)
{
  ExperimentRecord r;
  r.graph_id = id;
  r.generator = generator;
  r.seed = seed;
  r.n = g.node_count();
  r.m = g.edge_count();
  r.adjacency_entropy = adjacency_entropy(g);
  r.degree_entropy = degree_entropy(g);
  r.block_entropy = block_entropy(g, opt.d, opt.labellings, opt.seed).bits;
  r.bdm = bdm(g, opt.d, table).raw;
  r.nbdm = nbdm_from_raw(r.bdm, g.node_count(), opt.d, table).normalized;
  const auto sig = signature(g, SignatureKind::edges, opt.d, table);
  r.p_r = relative_programmability(sig);
  r.p_a = absolute_programmability(sig);
  if (opt.deficiency)
    r.deficiency = randomness_deficiency(g, opt.d, table).bits;
  return r;
}

/// Shortest decimal form that round-trips (%.17g is exact but noisy).
inline std::string format_number(double v)
{
  char buf[40];
  for (int prec = 12; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v)
      break;
  }
  return buf;
}

inline std::string schema_line(const std::string& name, int version)
{
  return "#schema=" + name + "/" + std::to_string(version) + "\n";
}

inline std::string join(const std::vector<std::string>& v, char sep = ',')
{
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i)
      s += sep;
    s += v[i];
  }
  return s;
}

inline std::vector<std::string> record_fields(const ExperimentRecord& r)
{
  return { r.graph_id,
           r.generator,
           std::to_string(r.seed),
           std::to_string(r.n),
           std::to_string(r.m),
           format_number(r.adjacency_entropy),
           format_number(r.degree_entropy),
           format_number(r.block_entropy),
           format_number(r.bdm),
           format_number(r.nbdm),
           format_number(r.p_r),
           format_number(r.p_a),
           r.deficiency ? format_number(*r.deficiency) : std::string{} };
}

inline std::string records_to_csv(const std::vector<ExperimentRecord>& rows)
{
  std::string out = schema_line("experiment-record", record_schema_version) + join(record_columns()) + "\n";
  for (const auto& r : rows)
    out += join(record_fields(r)) + "\n";
  return out;
}

inline nlohmann::ordered_json record_to_json(const ExperimentRecord& r)
{
  nlohmann::ordered_json j;
  j["graph_id"] = r.graph_id;
  j["generator"] = r.generator;
  j["seed"] = r.seed;
  j["n"] = r.n;
  j["m"] = r.m;
  j["adjacency_entropy"] = r.adjacency_entropy;
  j["degree_entropy"] = r.degree_entropy;
  j["block_entropy"] = r.block_entropy;
  j["bdm"] = r.bdm;
  j["nbdm"] = r.nbdm;
  j["p_r"] = r.p_r;
  j["p_a"] = r.p_a;
  j["deficiency"] = r.deficiency ? nlohmann::ordered_json(*r.deficiency) : nlohmann::ordered_json(nullptr);
  return j;
}

inline std::string records_to_json(const std::vector<ExperimentRecord>& rows)
{
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows)
    arr.push_back(record_to_json(r));
  return arr.dump(2) + "\n";
}

// Signature and trajectory exports ---------------------------------------------

inline std::string signature_to_csv(const Signature& sig)
{
  std::string out = schema_line("signature", 1) + "element_kind,u,v,contribution_bits\n";
  for (const auto& e : sig.entries) {
    if (e.element.kind == ElementKind::edge)
      out += "edge," + std::to_string(e.element.u) + "," + std::to_string(e.element.v);
    else
      out += "node," + std::to_string(e.element.u) + ",";
    out += "," + format_number(e.bits) + "\n";
  }
  return out;
}

inline nlohmann::ordered_json trajectory_to_json(const MarTrajectory& t)
{
  nlohmann::ordered_json j;
  j["schema"] = "mar-trajectory/1";
  j["config"] = { { "nodes", t.config.nodes },
                  { "target_edges",
                    t.config.target_edges ? nlohmann::ordered_json(*t.config.target_edges) : nlohmann::ordered_json(nullptr) },
                  { "d", t.config.d },
                  { "table", t.config.table ? table_identity(*t.config.table) : std::string{} },
                  { "tie_break", t.config.tie_break },
                  { "rotation", t.config.rotation },
                  { "seed", t.config.seed } };
  j["mode"] = to_string(t.mode);
  j["initial_complexity"] = t.initial_complexity;
  auto steps = nlohmann::ordered_json::array();
  for (const auto& s : t.steps)
    steps.push_back({ { "op", t.mode == MarMode::bottomup ? "add" : "delete" },
                      { "u", s.edge.u },
                      { "v", s.edge.v },
                      { "complexity", s.complexity },
                      { "edges", s.edge_count } });
  j["steps"] = steps;
  j["stop_reason"] = to_string(t.stop);
  j["best_index"] = t.best_index;
  j["result_complexity"] = t.result_complexity();
  j["final_graph"] = serialize(t.result());
  return j;
}

// Experiments -------------------------------------------------------------------

struct AsymmetryRow
{
  std::uint32_t n = 0;
  std::string graph; // "complete" or "er"
  std::uint64_t seed = 0;
  Edge edge;
  double delta = 0; // BDM(G) - BDM(G \ e)
};

/// Per-edge BDM change for K_n and for `seeds` samples of G(n, 0.5).
inline std::vector<AsymmetryRow> asymmetry_experiment(const std::vector<std::uint32_t>& sizes,
                                                      std::uint32_t seeds,
                                                      std::uint64_t base_seed,
                                                      unsigned d,
                                                      const CtmTable& table)
{
  std::vector<AsymmetryRow> rows;
  auto add = [&](const Graph& g, std::uint32_t n, const std::string& kind, std::uint64_t seed) {
    const auto sig = signature(g, SignatureKind::edges, d, table);
    for (const auto& e : sig.entries)
      rows.push_back({ n, kind, seed, e.element.edge(), e.bits });
  };
  for (auto n : sizes) {
    add(generate_complete(n), n, "complete", 0);
    for (std::uint32_t s = 0; s < seeds; ++s)
      add(generate_er(n, 0.5, base_seed + s), n, "er", base_seed + s);
  }
  return rows;
}

inline std::string asymmetry_to_csv(const std::vector<AsymmetryRow>& rows)
{
  std::string out = schema_line("asymmetry", 1) + "n,graph,seed,u,v,delta_bits\n";
  for (const auto& r : rows)
    out += std::to_string(r.n) + "," + r.graph + "," + std::to_string(r.seed) + "," + std::to_string(r.edge.u) +
           "," + std::to_string(r.edge.v) + "," + format_number(r.delta) + "\n";
  return out;
}

struct MarVsErRow
{
  std::string group; // "mar" or "er"
  std::size_t member = 0;
  std::uint32_t n = 0;
  std::size_t m = 0;
  double bdm = 0;
  double nbdm = 0;
  double adjacency_entropy = 0;
  double degree_entropy = 0;
  std::vector<std::uint32_t> degrees;
};

/// MAR ensemble (free bottom-up runs) against G(n, m) samples with each
/// member's edge count matched in turn.
inline std::vector<MarVsErRow> mar_vs_er_experiment(std::uint32_t n,
                                                    std::size_t ensemble,
                                                    std::size_t er_samples,
                                                    std::uint64_t base_seed,
                                                    unsigned d,
                                                    const CtmTable& table)
{
  MarConfig cfg;
  cfg.nodes = n;
  cfg.d = d;
  cfg.table = &table;
  cfg.seed = base_seed;
  NbdmNormalizer norm(d, table);
  std::vector<MarVsErRow> rows;
  auto row = [&](const std::string& group, std::size_t member, const Graph& g) {
    const double b = bdm(g, d, table).raw;
    rows.push_back({ group, member, n, g.edge_count(), b, norm(b, n).normalized, adjacency_entropy(g), degree_entropy(g),
                     g.degrees() });
  };
  const auto members = mar_ensemble(cfg, ensemble, MarMode::bottomup);
  for (std::size_t i = 0; i < members.size(); ++i)
    row("mar", i, members[i].graph);
  for (std::size_t i = 0; i < er_samples; ++i)
    row("er", i, generate_gnm(n, members[i % members.size()].graph.edge_count(), base_seed + i));
  return rows;
}

inline std::string mar_vs_er_to_csv(const std::vector<MarVsErRow>& rows)
{
  std::string out =
    schema_line("mar-vs-er", 1) + "group,member,n,m,bdm,nbdm,adjacency_entropy,degree_entropy,degrees\n";
  for (const auto& r : rows) {
    std::vector<std::string> deg;
    for (auto x : r.degrees)
      deg.push_back(std::to_string(x));
    out += r.group + "," + std::to_string(r.member) + "," + std::to_string(r.n) + "," + std::to_string(r.m) + "," +
           format_number(r.bdm) + "," + format_number(r.nbdm) + "," + format_number(r.adjacency_entropy) + "," +
           format_number(r.degree_entropy) + "," + join(deg, ';') + "\n";
  }
  return out;
}

struct GrowthRow
{
  std::uint32_t n = 0;
  std::uint64_t matrix_bits = 0; ///< n^2
  std::uint64_t blocks = 0;      ///< floor(n/d)^2
  double bdm_complete = 0;
  double bdm_er = 0;  ///< mean over the E-R samples
  double bdm_mar = 0; ///< free bottom-up MAR run
};

/// BDM of K_n, G(n, 0.5) (mean over `seeds`) and a MAR graph, per size.
inline std::vector<GrowthRow> growth_curve_experiment(const std::vector<std::uint32_t>& sizes,
                                                      std::uint32_t seeds,
                                                      std::uint64_t base_seed,
                                                      unsigned d,
                                                      const CtmTable& table)
{
  std::vector<GrowthRow> rows;
  for (auto n : sizes) {
    GrowthRow r;
    r.n = n;
    r.matrix_bits = static_cast<std::uint64_t>(n) * n;
    r.blocks = static_cast<std::uint64_t>(n / d) * (n / d);
    r.bdm_complete = bdm(generate_complete(n), d, table).raw;
    for (std::uint32_t s = 0; s < seeds; ++s)
      r.bdm_er += bdm(generate_er(n, 0.5, base_seed + s), d, table).raw;
    r.bdm_er /= std::max(1u, seeds);
    MarConfig cfg;
    cfg.nodes = n;
    cfg.d = d;
    cfg.table = &table;
    r.bdm_mar = marpa_run(cfg, MarMode::bottomup).result_complexity();
    rows.push_back(r);
  }
  return rows;
}

inline std::string growth_to_csv(const std::vector<GrowthRow>& rows)
{
  std::string out = schema_line("growth-curve", 1) + "n,matrix_bits,blocks,bdm_complete,bdm_er,bdm_mar\n";
  for (const auto& r : rows)
    out += std::to_string(r.n) + "," + std::to_string(r.matrix_bits) + "," + std::to_string(r.blocks) + "," +
           format_number(r.bdm_complete) + "," + format_number(r.bdm_er) + "," + format_number(r.bdm_mar) + "\n";
  return out;
}

} // namespace kgraph
