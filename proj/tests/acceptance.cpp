// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances are fixed here, next to each check.

#include "kgraph/bdm.hpp"
#include "kgraph/ctm.hpp"
#include "kgraph/dynamics.hpp"
#include "kgraph/entropy.hpp"
#include "kgraph/graph.hpp"
#include "kgraph/marpa.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

using namespace kgraph;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

std::string format(const char* fmt, ...)
{
  char buf[1024];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return buf;
}

void report(bool ok, const std::string& name, const std::string& detail)
{
  std::printf("%s  %-28s %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok)
    ++failures;
}

void note(const std::string& name, const std::string& detail)
{
  std::printf("NOTE  %-28s %s\n", name.c_str(), detail.c_str());
}

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double mean(const std::vector<double>& v)
{
  double s = 0;
  for (double x : v)
    s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

struct CorpusGraph
{
  std::string label;
  Graph graph;
};

// Empty, complete, cycle, star and Rado at n in {8,16,32,64}, plus E-R at
// p in {0.1,0.3,0.5} with 15 seeds per (n, p): 200 graphs.
std::vector<CorpusGraph> corpus()
{
  std::vector<CorpusGraph> out;
  for (std::uint32_t n : { 8u, 16u, 32u, 64u }) {
    out.push_back({ format("empty(%u)", n), generate_empty(n) });
    out.push_back({ format("complete(%u)", n), generate_complete(n) });
    out.push_back({ format("cycle(%u)", n), generate_cycle(n) });
    out.push_back({ format("star(%u)", n), generate_star(n) });
    out.push_back({ format("rado(%u)", n), generate_rado(n) });
    for (double p : { 0.1, 0.3, 0.5 })
      for (std::uint64_t seed = 1000; seed < 1015; ++seed)
        out.push_back({ format("er(%u,%.1f,%llu)", n, p, static_cast<unsigned long long>(seed)),
                        generate_er(n, p, seed) });
  }
  return out;
}

// Full BDM per candidate, first strict maximum in lexicographic order.
double exhaustive_best(const Graph& g, StepMode mode, const CtmTable& t)
{
  double best = -1;
  for (Node u = 0; u < g.node_count(); ++u)
    for (Node v = u + 1; v < g.node_count(); ++v) {
      if (g.has_edge(u, v) != (mode == StepMode::remove))
        continue;
      const auto h = mode == StepMode::add ? g.with_edge({ u, v }) : g.without_edge({ u, v });
      best = std::max(best, bdm(h, 4, t).raw);
    }
  return best;
}

double density(const Graph& g)
{
  return static_cast<double>(g.edge_count()) / static_cast<double>(Graph::max_edges(g.node_count()));
}

// --------------------------------------------------------------------------

void ctm_normalization(CtmTable& out)
{
  const auto t0 = Clock::now();
  BlockCounts stats;
  CtmBuildOptions opt; // (2,2), 100 steps, d=4, one worker
  out = build_ctm_table(opt, &stats);
  const double build_secs = seconds_since(t0);

  // Raw and orbit-pooled tables for the whole (2,2) chain plus the (1,2)
  // space: mass and count/value anti-monotonicity.
  double worst_mass = 0;
  std::size_t violations = 0, tables = 0, pairs = 0;
  auto audit = [&](const CtmTable& t, const std::map<BlockCode, std::uint64_t>& counts) {
    ++tables;
    double mass = 0;
    for (const auto& [code, v] : t.entries())
      mass += std::exp2(-v);
    worst_mass = std::max(worst_mass, std::fabs(mass - 1.0));
    std::vector<std::pair<std::uint64_t, double>> cv;
    for (const auto& [code, n] : counts)
      cv.emplace_back(n, t.lookup(code));
    if (cv.size() != t.size())
      ++violations;
    std::sort(cv.begin(), cv.end());
    for (std::size_t i = 1; i < cv.size(); ++i) {
      ++pairs;
      const bool more = cv[i].first > cv[i - 1].first;
      if (more ? !(cv[i].second < cv[i - 1].second) : cv[i].second != cv[i - 1].second)
        ++violations;
    }
  };
  for (const CtmTable* t = &out; t; t = t->sub_table())
    audit(*t, symmetric_completion(stats.by_size.at(t->d()), t->d()));

  for (bool symmetric : { false, true })
    for (std::uint32_t states : { 1u, 2u }) {
      CtmBuildOptions o;
      o.states = states;
      o.step_bound = states == 1 ? 10 : 100;
      o.symmetric = symmetric;
      o.d = states == 1 ? 1 : 4;
      BlockCounts s;
      const auto t = build_ctm_table(o, &s);
      for (const CtmTable* u = &t; u; u = u->sub_table())
        audit(*u, symmetric ? symmetric_completion(s.by_size.at(u->d()), u->d()) : s.by_size.at(u->d()));
    }

  const bool ok = worst_mass <= 1e-9 && violations == 0 && build_secs < 60;
  report(ok,
         "ctm-normalization",
         format("tables=%zu max|sum-1|=%.2e violations=%zu/%zu pairs build(2,2)=%.2fs entries=%zu halting=%llu/%llu",
                tables,
                worst_mass,
                violations,
                pairs,
                build_secs,
                out.size(),
                static_cast<unsigned long long>(stats.halting),
                static_cast<unsigned long long>(stats.machines)));
}

void bdm_bounds(const CtmTable& t, const std::vector<CorpusGraph>& graphs)
{
  NbdmNormalizer norm(4, t);
  std::size_t clamped = 0, outside = 0;
  std::vector<std::string> clamped_labels;
  for (const auto& c : graphs) {
    const auto v = norm(c.graph);
    if (v.clamped) {
      ++clamped;
      clamped_labels.push_back(c.label);
    }
    // After clamping the value lies in [0,1]; the raw value lies within the
    // bounds whenever no clamp was needed.
    if (v.normalized < 0 || v.normalized > 1 ||
        (!v.clamped && (v.raw < v.min_bound - 1e-9 || v.raw > v.max_bound + 1e-9)))
      ++outside;
  }
  const double freq = static_cast<double>(clamped) / static_cast<double>(graphs.size());

  double worst_empty = 0, drift = 0;
  const double at8 = norm(generate_empty(8)).normalized;
  std::string empties;
  for (std::uint32_t n : { 8u, 16u, 32u, 64u }) {
    const double v = norm(generate_empty(n)).normalized;
    worst_empty = std::max(worst_empty, v);
    drift = std::max(drift, std::fabs(v - at8));
    empties += format("%s%u:%.4f", empties.empty() ? "" : ",", n, v);
  }
  std::string who;
  for (const auto& l : clamped_labels)
    who += (who.empty() ? "" : " ") + l;
  report(graphs.size() == 200 && outside == 0 && freq < 0.05 && worst_empty <= 0.05 && drift < 0.05,
         "bdm-nbdm-bounds",
         format("corpus=%zu outside=%zu clamped=%zu (%.1f%% < 5%%) nbdm(empty)={%s} drift=%.4f clamped:[%s]",
                graphs.size(),
                outside,
                clamped,
                100 * freq,
                empties.c_str(),
                drift,
                who.c_str()));
}

void complexity_ordering(const CtmTable& t)
{
  std::string detail;
  bool ok = true;
  for (std::uint32_t n : { 16u, 32u, 64u }) {
    const double k = bdm(generate_complete(n), 4, t).raw;
    int wins = 0;
    double lowest = INFINITY;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const double r = bdm(generate_er(n, 0.5, seed), 4, t).raw;
      lowest = std::min(lowest, r);
      wins += k < r;
    }
    ok = ok && wins == 20;
    detail += format("n=%u: %d/20 (K=%.1f, min ER=%.1f) ", n, wins, k, lowest);
  }
  report(ok, "complexity-ordering", detail);
}

void asymmetry(const CtmTable& t)
{
  // Compared by magnitude: K_n edge contributions are all negative (next
  // criterion), so the size of the per-edge change is what differs.
  std::string detail;
  bool ok = true;
  int signed_holds = 0, trials = 0;
  for (std::uint32_t n : { 16u, 32u }) {
    const double simple = mean(signature(generate_complete(n), SignatureKind::edges, 4, t).values());
    int wins = 0;
    double er_lo = INFINITY, er_hi = -INFINITY;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const double random = mean(signature(generate_er(n, 0.5, seed), SignatureKind::edges, 4, t).values());
      er_lo = std::min(er_lo, random);
      er_hi = std::max(er_hi, random);
      wins += std::fabs(simple) >= std::fabs(random);
      signed_holds += simple >= random;
      ++trials;
    }
    ok = ok && wins == 10;
    detail += format("n=%u: %d/10 |mean| (complete %.3f, ER in [%.3f, %.3f]) ", n, wins, simple, er_lo, er_hi);
  }
  report(ok, "asymmetry-law", detail);
  note("asymmetry-law (signed)",
       format("signed mean(complete) >= mean(ER) holds %d/%d; see the ledger on the signed reading", signed_holds,
              trials));
}

void node_neutrality(const CtmTable& t)
{
  std::string detail;
  bool ok = true;
  for (std::uint32_t n : { 16u, 32u }) {
    const auto g = generate_complete(n);
    const double blocks = static_cast<double>(n / 4) * (n / 4);
    const double bound = std::log2(static_cast<double>(n)) + 2 * (t.max_value() - t.min_value()) / blocks;
    const auto nodes = signature(g, SignatureKind::nodes, 4, t);
    const auto edges = signature(g, SignatureKind::edges, 4, t);
    double worst = 0;
    for (double v : nodes.values())
      worst = std::max(worst, std::fabs(v));
    std::size_t negative = 0;
    double least_negative = -INFINITY;
    for (double v : edges.values()) {
      negative += v < 0;
      least_negative = std::max(least_negative, v);
    }
    ok = ok && worst <= bound && negative == edges.size();
    detail += format("n=%u: max|node|=%.3f <= %.3f, negative edges %zu/%zu (max %.3f) ", n, worst, bound, negative,
                     edges.size(), least_negative);
  }
  report(ok, "complete-node-neutrality", detail);
}

void mar_dominance(const CtmTable& t)
{
  const auto t0 = Clock::now();
  std::string detail;
  bool ok = true;
  NbdmNormalizer norm(4, t);
  for (std::uint32_t n : { 8u, 12u, 16u }) {
    MarConfig cfg;
    cfg.nodes = n;
    cfg.table = &t;
    const auto ens = mar_ensemble(cfg, 5, MarMode::bottomup);
    std::vector<double> mar, er;
    double min_entropy = 1;
    for (const auto& m : ens) {
      mar.push_back(norm(m.graph).normalized);
      min_entropy = std::min(min_entropy, adjacency_entropy(m.graph));
    }
    // Matched samples: G(n, m) with m cycling through the members' edge counts.
    for (std::uint64_t s = 0; s < 20; ++s)
      er.push_back(norm(generate_gnm(n, ens[s % ens.size()].graph.edge_count(), 500 + s)).normalized);
    ok = ok && mean(mar) >= mean(er) && min_entropy >= 0.9;
    detail += format("n=%u: MAR %.3f vs ER %.3f, min H_adj %.3f; ", n, mean(mar), mean(er), min_entropy);
  }
  detail += format("%.2fs", seconds_since(t0));
  report(ok, "mar-dominance", detail);
}

void greedy_oracle(const CtmTable& t)
{
  Rng rng(2024);
  int agree = 0, instances = 0;
  double worst = 0;
  while (instances < 50) {
    const auto n = static_cast<std::uint32_t>(4 + rng.below(9)); // 4..12
    const double p = 0.1 + 0.8 * rng.uniform01();
    const auto g = generate_er(n, p, rng.next());
    const StepMode mode = rng.below(2) ? StepMode::add : StepMode::remove;
    if ((mode == StepMode::add ? g.non_edges() : g.edges()).empty())
      continue;
    ++instances;
    const double got = marpa_step(g, mode, 4, t).complexity;
    const double want = exhaustive_best(g, mode, t);
    worst = std::max(worst, std::fabs(got - want));
    agree += std::fabs(got - want) <= 1e-9;
  }
  report(agree == 50, "greedy-step-oracle", format("%d/50 agree, max |diff| = %.2e", agree, worst));
}

void mar_density(const CtmTable& t)
{
  std::string detail;
  bool ok = true;
  for (std::uint32_t n : { 8u, 12u }) {
    MarConfig cfg;
    cfg.nodes = n;
    cfg.table = &t;
    const auto free_run = marpa_run(cfg, MarMode::bottomup);
    const double free_d = density(free_run.result());

    // Node count fixed, edge count free: the highest-complexity state of a
    // top-down run, and of a bottom-up walk over every edge count.
    const double down_d = density(marpa_run(cfg, MarMode::topdown).result());
    MarConfig full = cfg;
    full.target_edges = Graph::max_edges(n);
    const double walk_d = density(marpa_run(full, MarMode::bottomup).best);

    ok = ok && free_d >= 0.3 && free_d <= 0.6;
    for (double d : { down_d, walk_d })
      ok = ok && d >= 0.4 && d <= 0.6;
    detail += format("n=%u: free %.3f [0.3,0.6], fixed top-down %.3f / walk %.3f [0.4,0.6] (stop %s); ", n, free_d,
                     down_d, walk_d, to_string(free_run.stop).c_str());
  }
  report(ok, "mar-density", detail);
}

void rado_witness(const CtmTable& t)
{
  const auto g8 = generate_rado(8);
  std::set<Node> n0, n1;
  for (Node v : g8.neighbours(0))
    n0.insert(v);
  for (Node v : g8.neighbours(1))
    if (v > 1)
      n1.insert(v);
  const bool example0 = n0 == std::set<Node>{ 1, 3, 5, 7 };
  const bool example1 = n1 == std::set<Node>{ 2, 3, 6, 7 };

  // The two rules for all vertices of a larger instance.
  const auto g64 = generate_rado(64);
  bool rule0 = true, rule1 = true;
  for (Node v = 1; v < 64; ++v)
    rule0 = rule0 && g64.has_edge(0, v) == (v % 2 == 1);
  for (Node v = 2; v < 64; ++v)
    rule1 = rule1 && g64.has_edge(1, v) == (v % 4 == 2 || v % 4 == 3);

  const auto r32 = generate_rado(32);
  const double rado_bdm = bdm(r32, 4, t).raw;
  std::vector<double> er;
  for (std::uint64_t s = 0; s < 20; ++s)
    er.push_back(bdm(generate_gnm(32, r32.edge_count(), 700 + s), 4, t).raw);
  const bool below = rado_bdm < mean(er);
  report(example0 && example1 && rule0 && rule1 && below,
         "rado-witness",
         format("N(0)=odd:%s N+(1)=2,3 mod 4:%s (checked to n=64: %s/%s); bdm(rado32)=%.1f < mean G(32,%zu)=%.1f",
                example0 ? "yes" : "no", example1 ? "yes" : "no", rule0 ? "yes" : "no", rule1 ? "yes" : "no",
                rado_bdm, r32.edge_count(), mean(er)));
}

Signature hand(const std::vector<double>& values)
{
  Signature s;
  for (std::size_t i = 0; i < values.size(); ++i)
    s.entries.push_back({ GraphElement::of_node(static_cast<Node>(i)), values[i] });
  sort_signature(s.entries);
  return s;
}

void programmability(const CtmTable& t, const std::vector<CorpusGraph>& graphs)
{
  std::size_t out_of_range = 0, sigs = 0;
  double pr_lo = 1, pr_hi = 0, pa_lo = 1, pa_hi = 0;
  for (const auto& c : graphs)
    for (SignatureKind kind : { SignatureKind::edges, SignatureKind::nodes }) {
      const auto sig = signature(c.graph, kind, 4, t);
      const double pr = relative_programmability(sig), pa = absolute_programmability(sig);
      ++sigs;
      out_of_range += !(pr >= 0 && pr <= 1) + !(pa >= 0 && pa <= 1);
      pr_lo = std::min(pr_lo, pr), pr_hi = std::max(pr_hi, pr);
      pa_lo = std::min(pa_lo, pa), pa_hi = std::max(pa_hi, pa);
    }
  const bool equal_zero = relative_programmability(hand({ 2.5, 2.5, 2.5 })) == 0.0 &&
                          relative_programmability(hand({ -1, -1 })) == 0.0;
  const bool one_sided = absolute_programmability(hand({ -1, -3, -0.5 })) == 1.0 &&
                         absolute_programmability(hand({ 2, 7 })) == 1.0;
  const double ex1 = relative_programmability(hand({ -4, -2, 0, 2, 4 }));
  const double ex2 = absolute_programmability(hand({ 4, -1 }));
  const double ex3 = absolute_programmability(hand({ 2, -2 }));
  const bool examples = ex1 == 0.5 && ex2 == 0.75 && ex3 == 0.0;
  report(out_of_range == 0 && equal_zero && one_sided && examples,
         "reprogrammability-indices",
         format("%zu signatures, P_R in [%.3f,%.3f], P_A in [%.3f,%.3f], out of range %zu; "
                "all-equal P_R=0:%s one-sided P_A=1:%s; {-4,-2,0,2,4}->%.2f {+4,-1}->%.2f {+2,-2}->%.2f",
                sigs, pr_lo, pr_hi, pa_lo, pa_hi, out_of_range, equal_zero ? "yes" : "no", one_sided ? "yes" : "no",
                ex1, ex2, ex3));
}

} // namespace

int main()
{
  const auto t0 = Clock::now();
  try {
    CtmTable table(1, { { 0, 1.0 } });
    ctm_normalization(table);
    const auto graphs = corpus();
    bdm_bounds(table, graphs);
    complexity_ordering(table);
    asymmetry(table);
    node_neutrality(table);
    mar_dominance(table);
    greedy_oracle(table);
    mar_density(table);
    rado_witness(table);
    programmability(table, graphs);
  } catch (const std::exception& e) {
    report(false, "suite", std::string("exception: ") + e.what());
  }
  const double total = seconds_since(t0);
  report(total < 600, "suite-runtime", format("%.1fs < 600s", total));
  std::printf("%s: %d criteria failed\n", failures ? "FAILED" : "OK", failures);
  return failures ? 1 : 0;
}
