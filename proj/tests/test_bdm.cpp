#include "kgraph/bdm.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

using namespace kgraph;
using kgraph::test::default_table;

namespace {

// BDM straight from the definition: read each block cell by cell.
double bdm_oracle(const Graph& g, unsigned d, const CtmTable& t)
{
  std::map<BlockCode, int> hist;
  const Node k = g.node_count() / d;
  for (Node bi = 0; bi < k; ++bi)
    for (Node bj = 0; bj < k; ++bj) {
      BinaryMatrix m(d, d);
      for (unsigned i = 0; i < d; ++i)
        for (unsigned j = 0; j < d; ++j)
          m.at(i, j) = g.at(bi * d + i, bj * d + j);
      ++hist[block_code(m)];
    }
  double s = 0;
  for (auto [code, n] : hist)
    s += std::log2(n) + t.lookup(code);
  return s;
}

CtmTable ladder_table(unsigned entries)
{
  // Values 1, 2, ..., entries on 2x2 codes 0, 1, ...
  std::map<BlockCode, double> e;
  for (unsigned i = 0; i < entries; ++i)
    e[i] = 1.0 + i;
  return CtmTable(2, e);
}

} // namespace

TEST(Bdm, EmptyEightIsOneBlockTypeTimesFour)
{
  const auto& t = default_table();
  const auto v = bdm(generate_empty(8), 4, t);
  EXPECT_EQ(v.distinct_blocks, 1u);
  EXPECT_EQ(v.blocks, 4u);
  EXPECT_DOUBLE_EQ(v.raw, 2.0 + t.lookup(0));
}

TEST(Bdm, SingleBlockIsLookup)
{
  const auto& t = default_table();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = generate_er(4, 0.5, seed);
    EXPECT_EQ(bdm(g, 4, t).raw, t.lookup(adjacency_block(g, 0, 0, 4)));
  }
}

TEST(Bdm, MatchesDefinitionOracle)
{
  const auto& t = default_table();
  for (std::uint32_t n : { 4u, 7u, 13u, 16u, 30u })
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const auto g = generate_er(n, 0.1 + 0.2 * seed, seed);
      EXPECT_NEAR(bdm(g, 4, t).raw, bdm_oracle(g, 4, t), 1e-9) << n << "/" << seed;
    }
}

TEST(Bdm, RandomAboveComplete)
{
  const auto& t = default_table();
  EXPECT_GT(bdm(generate_er(64, 0.5, 3), 4, t).raw, bdm(generate_complete(64), 4, t).raw);
}

TEST(Bdm, RemainderDiscarded)
{
  const auto& t = default_table();
  const auto v = bdm(generate_complete(10), 4, t);
  EXPECT_EQ(v.blocks, 4u);
  EXPECT_NEAR(v.discarded_fraction, 1.0 - 64.0 / 100.0, 1e-12);
  // Edges living only in the strip do not change BDM.
  EXPECT_EQ(bdm(generate_empty(10).with_edge({ 8, 9 }), 4, t).raw, bdm(generate_empty(10), 4, t).raw);
}

TEST(Bdm, DeterministicAndStamped)
{
  const auto& t = default_table();
  const auto g = generate_er(32, 0.5, 1);
  const auto a = bdm(g, 4, t), b = bdm(g, 4, t);
  EXPECT_EQ(a.raw, b.raw);
  EXPECT_EQ(a.table_id, table_identity(t));
  EXPECT_EQ(a.partition, "nonoverlapping-topleft-discard");
  EXPECT_EQ(a.d, 4u);
}

TEST(Bdm, BlockSizeMismatch)
{
  EXPECT_THROW(bdm(generate_empty(8), 2, default_table()), domain_error);
}

TEST(Bdm, HistogramAdditivity)
{
  const auto& t = default_table();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = generate_er(24, 0.4, seed);
    EXPECT_EQ(bdm_from_histogram(block_histogram(g, 4), t), bdm(g, 4, t).raw);
    EXPECT_NEAR(BlockHistogram(g, 4, t).value(), bdm(g, 4, t).raw, 1e-12);
  }
}

TEST(BlockHistogram, ToggleDeltaMatchesRecompute)
{
  const auto& t = default_table();
  const auto g = generate_er(14, 0.5, 21);
  BlockHistogram hist(g, 4, t);
  const double base = bdm(g, 4, t).raw;
  for (Node u = 0; u < 14; ++u)
    for (Node v = u + 1; v < 14; ++v) {
      const Edge e(u, v);
      const auto h = g.has_edge(u, v) ? g.without_edge(e) : g.with_edge(e);
      ASSERT_NEAR(hist.toggle_delta(e), bdm(h, 4, t).raw - base, 1e-9) << u << "," << v;
    }
  // Applying a sequence of toggles keeps value() in step.
  Graph cur = g;
  for (const Edge& e : { Edge(0, 1), Edge(2, 9), Edge(0, 1), Edge(5, 6), Edge(12, 13) }) {
    hist.toggle(e);
    cur = cur.has_edge(e.u, e.v) ? cur.without_edge(e) : cur.with_edge(e);
    ASSERT_NEAR(hist.value(), bdm(cur, 4, t).raw, 1e-9);
  }
}

TEST(MinBdm, Formula)
{
  const CtmTable t(4, { { 0, 3.0 }, { 1, 5.0 } });
  EXPECT_EQ(min_bdm(8, 4, t), 5.0);
  EXPECT_EQ(min_bdm(4, 4, t), 4.0);
  EXPECT_GT(min_bdm(16, 4, default_table()), min_bdm(8, 4, default_table()));
  EXPECT_THROW(min_bdm(3, 4, t), domain_error);
}

TEST(MinBdm, UniformMatrixCompanion)
{
  const CtmTable t(4, { { 0, 3.0 } });
  EXPECT_EQ(uniform_matrix_bdm(8, 4, t), 2.0 + 3.0);
  EXPECT_EQ(uniform_matrix_bdm(16, 4, t), 4.0 + 3.0);
}

TEST(MaxBdm, OneSlotIsMaxValue)
{
  const auto t = ladder_table(5);
  EXPECT_EQ(max_bdm(2, 2, t, MaxBdmUniverse::table_only), 5.0);
  EXPECT_EQ(max_bdm(3, 2, t, MaxBdmUniverse::table_only), 5.0);
  // Full alphabet: the best unseen block costs max + 1 under pessimistic-max.
  EXPECT_EQ(max_bdm(2, 2, t), 6.0);
}

TEST(MaxBdm, SpreadBeforeRepetition)
{
  const auto t = ladder_table(5);
  // Four slots over five entries: the four most complex, once each.
  EXPECT_EQ(max_bdm(4, 2, t, MaxBdmUniverse::table_only), 5.0 + 4 + 3 + 2);
  // Nine slots over three entries: three copies each.
  const auto t3 = ladder_table(3);
  EXPECT_NEAR(max_bdm(6, 2, t3, MaxBdmUniverse::table_only), 3 * std::log2(3.0) + 1 + 2 + 3, 1e-12);
  // Nine slots over five entries: 2,2,2,2,1 copies, most complex first.
  EXPECT_NEAR(max_bdm(6, 2, t, MaxBdmUniverse::table_only), 4 * 1.0 + (5 + 4 + 3 + 2) + 1, 1e-12);
}

TEST(MaxBdm, CompositionConditionsOnDefaultTable)
{
  // Independent validator: value every 4x4 block directly and check the
  // emitted multiset against the three conditions.
  const auto& t = default_table();
  const auto comp = max_composition(32, 4, t);
  std::map<BlockCode, std::uint64_t> f;
  std::uint64_t total = 0;
  for (const auto& e : comp.used) {
    ASSERT_TRUE(f.emplace(e.code, e.multiplicity).second) << "duplicate block";
    ASSERT_EQ(e.ctm, t.lookup(e.code));
    total += e.multiplicity;
  }
  EXPECT_EQ(total, 64u); // (32/4)^2 slots

  std::uint64_t lo = UINT64_MAX, hi = 0;
  for (auto [c, m] : f) {
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  EXPECT_LE(hi, lo + 1);

  // More complex blocks never get fewer copies, unused blocks count as 0.
  std::vector<std::pair<double, std::uint64_t>> all;
  for (BlockCode c = 0; c < 65536; ++c) {
    auto it = f.find(c);
    all.emplace_back(t.lookup(c), it == f.end() ? 0 : it->second);
  }
  std::sort(all.begin(), all.end());
  for (std::size_t i = 1; i < all.size(); ++i)
    if (all[i].first > all[i - 1].first) {
      ASSERT_GE(all[i].second, all[i - 1].second) << i;
    }

  double value = 0;
  for (auto [c, m] : f)
    value += std::log2(static_cast<double>(m)) + t.lookup(c);
  EXPECT_NEAR(value, max_bdm(32, 4, t), 1e-9);
}

TEST(MaxBdm, TableOnlyConditions)
{
  const auto& t = default_table();
  for (std::uint32_t n : { 8u, 32u, 64u, 96u }) {
    const auto comp = max_composition(n, 4, t, MaxBdmUniverse::table_only);
    std::uint64_t total = 0, lo = UINT64_MAX, hi = 0;
    for (const auto& e : comp.used) {
      total += e.multiplicity;
      lo = std::min(lo, e.multiplicity);
      hi = std::max(hi, e.multiplicity);
    }
    EXPECT_EQ(total, static_cast<std::uint64_t>(n / 4) * (n / 4));
    EXPECT_LE(hi, lo + 1);
    for (std::size_t i = 1; i < comp.used.size(); ++i)
      if (comp.used[i - 1].ctm > comp.used[i].ctm) {
        EXPECT_GE(comp.used[i - 1].multiplicity, comp.used[i].multiplicity);
      }
    EXPECT_LE(comp.max_unused_ctm, comp.min_used_ctm);
  }
}

TEST(MaxBdm, EmptyTableNoData)
{
  EXPECT_THROW(CtmTable(4, {}), no_data_error);
}

TEST(Nbdm, EndpointsMapToZeroAndOne)
{
  const auto& t = default_table();
  for (std::uint32_t n : { 8u, 16u, 64u }) {
    EXPECT_EQ(nbdm_from_raw(min_bdm(n, 4, t), n, 4, t).normalized, 0.0);
    EXPECT_EQ(nbdm_from_raw(max_bdm(n, 4, t), n, 4, t).normalized, 1.0);
    EXPECT_FALSE(nbdm_from_raw(max_bdm(n, 4, t), n, 4, t).clamped);
  }
}

TEST(Nbdm, ClampsWithFlag)
{
  const auto& t = default_table();
  const auto lo = nbdm_from_raw(min_bdm(16, 4, t) - 1, 16, 4, t);
  EXPECT_EQ(lo.normalized, 0.0);
  EXPECT_TRUE(lo.clamped);
  const auto hi = nbdm_from_raw(max_bdm(16, 4, t) + 1, 16, 4, t);
  EXPECT_EQ(hi.normalized, 1.0);
  EXPECT_TRUE(hi.clamped);
}

TEST(Nbdm, DegenerateBounds)
{
  // One entry, one slot: max = min.
  const CtmTable t(4, { { 0, 3.0 } });
  EXPECT_THROW(nbdm_from_raw(3.0, 4, 4, t, MaxBdmUniverse::table_only), domain_error);
}

TEST(Nbdm, CompleteBelowRandom)
{
  const auto& t = default_table();
  for (std::uint64_t seed = 0; seed < 5; ++seed)
    EXPECT_LT(nbdm(generate_complete(64), 4, t).normalized, nbdm(generate_er(64, 0.5, seed), 4, t).normalized);
}

TEST(Nbdm, EmptyGraphsStayNearZero)
{
  const auto& t = default_table();
  const double at8 = nbdm(generate_empty(8), 4, t).normalized;
  for (std::uint32_t n : { 8u, 16u, 32u, 64u }) {
    const double v = nbdm(generate_empty(n), 4, t).normalized;
    EXPECT_LE(v, 0.05) << n;
    EXPECT_LT(std::fabs(v - at8), 0.05) << n;
  }
}

TEST(Nbdm, NormalizerMatchesDirect)
{
  const auto& t = default_table();
  NbdmNormalizer norm(4, t);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto g = generate_er(12 + 4 * (seed % 3), 0.5, seed);
    const auto a = norm(g);
    const auto b = nbdm(g, 4, t);
    EXPECT_EQ(a.normalized, b.normalized);
    EXPECT_EQ(a.max_bound, b.max_bound);
  }
}
