#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hardcore/graph.hpp"
#include "test_util.hpp"

using hardcore::BipartiteMultigraph;
using hardcore::count_cycles;
using hardcore::sample_graph;

TEST_CASE("sampling is deterministic in the seed") {
  const auto g1 = sample_graph(100, 3, 42);
  const auto g2 = sample_graph(100, 3, 42);
  CHECK(g1.matchings == g2.matchings);
  const auto g3 = sample_graph(100, 3, 43);
  CHECK(g1.matchings != g3.matchings);
}

TEST_CASE("every matching is a bijection") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto g = sample_graph(1 + static_cast<int>(seed % 13), 1 + static_cast<int>(seed % 5), seed);
    CHECK(g.valid());
    for (const auto& m : g.matchings) {
      std::vector<int> hits(m.size(), 0);
      for (int v : m) ++hits[static_cast<std::size_t>(v)];
      for (int h : hits) CHECK(h == 1);
    }
  }
}

TEST_CASE("n=1 gives parallel edges and X_2 = C(d,2)") {
  const auto g = sample_graph(1, 3, 7);
  REQUIRE(g.matchings.size() == 3);
  for (const auto& m : g.matchings) CHECK(m == std::vector<int>{0});
  const auto c = count_cycles(g, 4);
  CHECK(c.counts.at(2) == 3);
  CHECK(c.counts.at(4) == 0);
}

TEST_CASE("identity+swap on n=2 has one 4-cycle and no 2-cycle") {
  BipartiteMultigraph g;
  g.n = 2;
  g.d = 2;
  g.matchings = {{0, 1}, {1, 0}};
  const auto c = count_cycles(g, 4);
  CHECK(c.counts.at(2) == 0);
  CHECK(c.counts.at(4) == 1);
}

TEST_CASE("odd i_max is rejected") {
  const auto g = sample_graph(3, 2, 1);
  CHECK_THROWS_AS(count_cycles(g, 3), std::invalid_argument);
}

TEST_CASE("uniformity over the two matchings at n=2, d=1") {
  int identity = 0;
  const int trials = 2000;
  for (int s = 0; s < trials; ++s)
    if (sample_graph(2, 1, static_cast<std::uint64_t>(s) + 1000).matchings[0][0] == 0) ++identity;
  const double p = static_cast<double>(identity) / trials;
  const double tol = 3 * std::sqrt(0.25 / trials);
  CHECK(std::abs(p - 0.5) <= tol);
}

TEST_CASE("cycle counts match subset brute force on all tiny graphs") {
  for (int n = 1; n <= 3; ++n)
    for (int d = 1; d <= 2; ++d)
      for (const auto& g : testutil::all_graphs(n, d)) {
        const auto fast = count_cycles(g, std::min(8, 2 * n));
        const auto slow = testutil::brute_cycles(g, 8);
        for (const auto& [i, x] : slow) CHECK(fast.counts.at(i) == x);
      }
}

TEST_CASE("cycle counts match subset brute force on random n=4 d=3 graphs") {
  for (std::uint64_t s = 0; s < 60; ++s) {
    const auto g = sample_graph(4, 3, s);
    const auto fast = count_cycles(g, 8);
    const auto slow = testutil::brute_cycles(g, 8);
    for (const auto& [i, x] : slow) CHECK(fast.counts.at(i) == x);
  }
}

TEST_CASE("Monte Carlo mean of X_2 agrees with d(d-1)/2") {
  std::vector<double> xs;
  for (std::uint64_t s = 0; s < 2000; ++s) {
    const auto g = sample_graph(100, 3, 50000 + s);
    xs.push_back(static_cast<double>(count_cycles(g, 2).counts.at(2)));
  }
  const double m = testutil::mean(xs);
  const double se = testutil::std_error(xs);
  CHECK(std::abs(m - 3.0) <= 4 * se);
}

TEST_CASE("serialize/parse round trip") {
  const auto g = sample_graph(9, 4, 11);
  std::stringstream ss;
  g.serialize(ss);
  const auto h = BipartiteMultigraph::parse(ss);
  CHECK(h.n == g.n);
  CHECK(h.d == g.d);
  CHECK(h.matchings == g.matchings);

  const std::string path = "roundtrip_graph.txt";
  {
    std::ofstream out(path);
    g.serialize(out);
  }
  const auto f = BipartiteMultigraph::parse_file(path);
  CHECK(f.matchings == g.matchings);
  std::remove(path.c_str());
}

TEST_CASE("side swap is an involution and preserves validity") {
  const auto g = sample_graph(8, 3, 5);
  const auto s = g.swapped();
  CHECK(s.valid());
  CHECK(s.swapped().matchings == g.matchings);
  // swapped adjacency is the transpose: u-v edge count preserved
  for (int k = 0; k < g.d; ++k)
    for (int u = 0; u < g.n; ++u)
      CHECK(s.matchings[static_cast<std::size_t>(k)]
                       [static_cast<std::size_t>(g.matchings[static_cast<std::size_t>(k)][static_cast<std::size_t>(u)])] == u);
}

TEST_CASE("invalid construction inputs are rejected") {
  CHECK_THROWS_AS(sample_graph(0, 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_graph(3, 0, 1), std::invalid_argument);
}
