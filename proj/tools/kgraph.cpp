#include "kgraph/ctm.hpp"
#include "kgraph/experiments.hpp"
#include "kgraph/graph.hpp"
#include "kgraph/marpa.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_missing = 3;
constexpr int exit_malformed = 4;

#ifndef KGRAPH_DEFAULT_TABLE
#define KGRAPH_DEFAULT_TABLE "data/default_d4.ctm"
#endif

// Thrown by subcommand handlers to pick an exit code.
struct Failure
{
  int code;
  std::string message;
};

std::string read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Failure{ exit_missing, "cannot open " + path };
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text)
{
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text))
    throw Failure{ exit_missing, "cannot write " + path };
}

kgraph::CtmTable open_table(const std::string& path)
{
  try {
    return kgraph::load_table(path);
  } catch (const kgraph::not_found_error& e) {
    throw Failure{ exit_missing, e.what() };
  } catch (const kgraph::error& e) {
    throw Failure{ exit_malformed, path + ": " + e.what() };
  }
}

kgraph::Graph read_graph(const std::string& path)
{
  const std::string text = read_file(path);
  try {
    return kgraph::deserialize(text);
  } catch (const kgraph::parse_error& e) {
    throw Failure{ exit_malformed, path + ": " + e.what() };
  }
}

kgraph::GeneratorSpec gen_spec(const std::string& spec, std::uint64_t seed)
{
  try {
    return kgraph::parse_generator(spec, seed);
  } catch (const kgraph::error& e) {
    throw Failure{ exit_usage, e.what() };
  }
}

// A graph argument: either --graph FILE or --gen KIND:ARGS, exactly one.
struct GraphSource
{
  std::string file;
  std::string gen;
  std::uint64_t seed = 0;

  void add_options(CLI::App* app)
  {
    auto* f = app->add_option("--graph", file, "edge-list file");
    auto* g = app->add_option("--gen", gen, "generator spec KIND:ARGS");
    f->excludes(g);
  }

  kgraph::Graph load() const
  {
    if (!file.empty())
      return read_graph(file);
    if (!gen.empty())
      return kgraph::generate(gen_spec(gen, seed));
    throw Failure{ exit_usage, "one of --graph or --gen is required" };
  }
};

std::vector<std::uint32_t> parse_sizes(const std::vector<std::uint32_t>& given, std::vector<std::uint32_t> fallback)
{
  return given.empty() ? fallback : given;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{ "Algorithmic-information measures for small graphs" };
  app.require_subcommand(1);

  // ctm build ------------------------------------------------------------------
  auto* ctm = app.add_subcommand("ctm", "CTM table tools");
  ctm->require_subcommand(1);
  auto* build = ctm->add_subcommand("build", "enumerate a 2D Turing machine space into a CTM table");
  kgraph::CtmBuildOptions build_opt;
  std::string build_out, build_fallback = "decompose";
  bool no_symmetric = false;
  build->add_option("--states", build_opt.states, "machine states")->capture_default_str();
  build->add_option("--steps", build_opt.step_bound, "step bound")->capture_default_str();
  build->add_option("--d", build_opt.d, "block size")->capture_default_str();
  build->add_option("--out", build_out, "output table file")->required();
  build->add_option("--fallback", build_fallback, "pessimistic-max | decompose")->capture_default_str();
  build->add_option("--workers", build_opt.workers, "enumeration threads")->capture_default_str();
  build->add_option("--max-states", build_opt.max_states, "largest accepted --states")->capture_default_str();
  build->add_flag("--no-symmetric", no_symmetric, "count raw blocks without orbit pooling");

  // gen ----------------------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "write a generated graph as an edge list");
  std::string gen_arg, gen_out;
  std::uint64_t gen_seed = 0;
  gen->add_option("--gen", gen_arg, "generator spec KIND:ARGS")->required();
  gen->add_option("--seed", gen_seed, "seed when the spec has none");
  gen->add_option("--out", gen_out, "output file")->required();

  // measure --------------------------------------------------------------------
  auto* measure = app.add_subcommand("measure", "entropy, BDM, NBDM, P_R, P_A per graph");
  std::string table_path = KGRAPH_DEFAULT_TABLE;
  std::vector<std::string> measure_gens, measure_files;
  std::string out_path, format = "csv";
  kgraph::MeasureOptions mopt;
  measure->add_option("--table", table_path, "CTM table file")->capture_default_str();
  auto* gen_opt = measure->add_option("--gen", measure_gens, "generator spec (repeatable)");
  measure->add_option("--graph", measure_files, "edge-list file (repeatable)");
  measure->add_option("--d", mopt.d, "block size")->capture_default_str();
  measure->add_option("--seed", mopt.seed, "seed for labelling samples and unseeded generators");
  measure->add_option("--labellings", mopt.labellings, "sampled labellings for block entropy")->capture_default_str();
  measure->add_flag("--deficiency", mopt.deficiency, "also compute randomness deficiency");
  measure->add_option("--format", format, "csv | json")->check(CLI::IsMember({ "csv", "json" }));
  measure->add_option("--out", out_path, "output file (default stdout)");

  // signature ------------------------------------------------------------------
  auto* sig_cmd = app.add_subcommand("signature", "per-element information contributions");
  GraphSource sig_src;
  std::string sig_kind = "edges";
  unsigned sig_d = 4;
  sig_src.add_options(sig_cmd);
  sig_cmd->add_option("--table", table_path, "CTM table file");
  sig_cmd->add_option("--seed", sig_src.seed, "seed when the spec has none");
  sig_cmd->add_option("--kind", sig_kind, "edges | nodes | both")->check(CLI::IsMember({ "edges", "nodes", "both" }));
  sig_cmd->add_option("--d", sig_d, "block size");
  sig_cmd->add_option("--out", out_path, "output file (default stdout)");

  // marpa ------------------------------------------------------------------------
  auto* mar_cmd = app.add_subcommand("marpa", "greedy maximal-algorithmic-randomness search");
  kgraph::MarConfig mcfg;
  std::string mar_mode = "bottomup";
  std::size_t mar_target = 0;
  mar_cmd->add_option("--table", table_path, "CTM table file");
  mar_cmd->add_option("--n", mcfg.nodes, "node count")->required();
  auto* target_opt = mar_cmd->add_option("--target-edges", mar_target, "walk to exactly this edge count");
  mar_cmd->add_option("--mode", mar_mode, "bottomup | topdown")->check(CLI::IsMember({ "bottomup", "topdown" }));
  mar_cmd->add_option("--d", mcfg.d, "block size");
  mar_cmd->add_option("--rotation", mcfg.rotation, "tie-break rotation offset");
  mar_cmd->add_option("--seed", mcfg.seed, "recorded in the trajectory");
  mar_cmd->add_option("--out", out_path, "output file (default stdout)");

  // experiment -----------------------------------------------------------------
  auto* exp_cmd = app.add_subcommand("experiment", "desk-scale datasets");
  std::string exp_name;
  std::vector<std::uint32_t> exp_sizes;
  std::uint32_t exp_seeds = 10;
  std::size_t exp_ensemble = 5, exp_er = 20;
  std::uint64_t exp_seed = 1;
  unsigned exp_d = 4;
  exp_cmd->add_option("name", exp_name, "asymmetry | mar-vs-er | growth-curve")->required();
  exp_cmd->add_option("--table", table_path, "CTM table file");
  exp_cmd->add_option("--n", exp_sizes, "node counts (repeatable; mar-vs-er uses the first)");
  exp_cmd->add_option("--ensemble", exp_ensemble, "MAR ensemble size");
  exp_cmd->add_option("--er-samples", exp_er, "E-R samples for mar-vs-er");
  exp_cmd->add_option("--seeds", exp_seeds, "E-R samples per size");
  exp_cmd->add_option("--seed", exp_seed, "base seed");
  exp_cmd->add_option("--d", exp_d, "block size");
  exp_cmd->add_option("--out", out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*build) {
      build_opt.symmetric = !no_symmetric;
      try {
        build_opt.fallback = kgraph::fallback_from_string(build_fallback);
      } catch (const kgraph::error& e) {
        throw Failure{ exit_usage, e.what() };
      }
      kgraph::BlockCounts stats;
      const auto t0 = std::chrono::steady_clock::now();
      kgraph::CtmTable table = [&] {
        try {
          return kgraph::build_ctm_table(build_opt, &stats);
        } catch (const kgraph::domain_error& e) {
          throw Failure{ exit_usage, e.what() };
        }
      }();
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      kgraph::save_table(table, build_out);
      std::printf("entries %zu\nhalting %llu/%llu (%.6f)\nseconds %.2f\ncrc32 %s\n",
                  table.size(),
                  static_cast<unsigned long long>(stats.halting),
                  static_cast<unsigned long long>(stats.machines),
                  stats.machines ? static_cast<double>(stats.halting) / static_cast<double>(stats.machines) : 0.0,
                  secs,
                  kgraph::table_identity(table).c_str());
    } else if (*gen) {
      const auto g = kgraph::generate(gen_spec(gen_arg, gen_seed));
      write_output(gen_out, kgraph::serialize(g));
    } else if (*measure) {
      if (measure_gens.empty() && measure_files.empty())
        throw Failure{ exit_usage, "measure needs --gen or --graph" };
      const auto table = open_table(table_path);
      // Rows follow the command-line order of --gen and --graph.
      std::vector<kgraph::ExperimentRecord> rows;
      std::size_t next_gen = 0, next_file = 0;
      for (const CLI::Option* o : measure->parse_order()) {
        if (o == gen_opt && next_gen < measure_gens.size()) {
          const auto& spec = measure_gens[next_gen++];
          const auto gs = gen_spec(spec, mopt.seed);
          rows.push_back(kgraph::measure(kgraph::generate(gs), spec, gs.kind, gs.seed, table, mopt));
        } else if (o->get_name() == "--graph" && next_file < measure_files.size()) {
          const auto& path = measure_files[next_file++];
          rows.push_back(kgraph::measure(read_graph(path), path, "file", 0, table, mopt));
        }
      }
      write_output(out_path, format == "json" ? kgraph::records_to_json(rows) : kgraph::records_to_csv(rows));
    } else if (*sig_cmd) {
      const auto g = sig_src.load();
      const auto table = open_table(table_path);
      const auto kind = sig_kind == "nodes"  ? kgraph::SignatureKind::nodes
                        : sig_kind == "both" ? kgraph::SignatureKind::both
                                             : kgraph::SignatureKind::edges;
      write_output(out_path, kgraph::signature_to_csv(kgraph::signature(g, kind, sig_d, table)));
    } else if (*mar_cmd) {
      const auto table = open_table(table_path);
      mcfg.table = &table;
      if (*target_opt)
        mcfg.target_edges = mar_target;
      const auto mode = mar_mode == "topdown" ? kgraph::MarMode::topdown : kgraph::MarMode::bottomup;
      const auto traj = kgraph::marpa_run(mcfg, mode);
      write_output(out_path, kgraph::trajectory_to_json(traj).dump(2) + "\n");
    } else if (*exp_cmd) {
      if (exp_name != "asymmetry" && exp_name != "mar-vs-er" && exp_name != "growth-curve")
        throw Failure{ exit_usage, "unknown experiment '" + exp_name + "'" };
      const auto table = open_table(table_path);
      std::string csv;
      if (exp_name == "asymmetry")
        csv = kgraph::asymmetry_to_csv(
          kgraph::asymmetry_experiment(parse_sizes(exp_sizes, { 8, 16, 32 }), exp_seeds, exp_seed, exp_d, table));
      else if (exp_name == "mar-vs-er")
        csv = kgraph::mar_vs_er_to_csv(kgraph::mar_vs_er_experiment(
          parse_sizes(exp_sizes, { 8 }).front(), exp_ensemble, exp_er, exp_seed, exp_d, table));
      else
        csv = kgraph::growth_to_csv(kgraph::growth_curve_experiment(
          parse_sizes(exp_sizes, { 8, 12, 16, 24, 32, 48, 64 }), exp_seeds, exp_seed, exp_d, table));
      write_output(out_path, csv);
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const kgraph::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_malformed;
  } catch (const kgraph::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_ok;
}
