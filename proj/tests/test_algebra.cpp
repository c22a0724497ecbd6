#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "lapgrowth/algebra.hpp"
#include "lapgrowth/rng.hpp"

using namespace lapgrowth;

namespace {

FiniteMultigraph cycle(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n, 1});
  return FiniteMultigraph(n, 0, e, "C" + std::to_string(n));
}

// One legal toppling at a time, lowest unstable vertex first.
SinkStabilization naive_stabilize(const FiniteMultigraph& g, SinkedConfig s) {
  std::vector<std::int64_t> u(s.size(), 0);
  for (bool moved = true; moved;) {
    moved = false;
    for (int v = 0; v < g.size(); ++v) {
      if (v == g.sink() || s[static_cast<std::size_t>(v)] < g.degree(v)) continue;
      s[static_cast<std::size_t>(v)] -= g.degree(v);
      ++u[static_cast<std::size_t>(v)];
      for (auto [w, m] : g.adjacent(v))
        if (w != g.sink()) s[static_cast<std::size_t>(w)] += m;
      moved = true;
      break;
    }
  }
  return {s, u};
}

}  // namespace

TEST_CASE("small groups by enumeration") {
  const FiniteMultigraph c3 = cycle(3);
  CHECK(enumerate_recurrents(c3).size() == 3);
  CHECK(group_order_matrix_tree(c3) == 3);
  const FiniteMultigraph dbl(2, 0, {{0, 1, 2}}, "double");
  CHECK(enumerate_recurrents(dbl).size() == 2);
  CHECK(group_order_matrix_tree(cycle(4)) == 4);
  std::vector<Edge> k4;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) k4.push_back({i, j, 1});
  const FiniteMultigraph K4(4, 0, k4);
  CHECK(enumerate_recurrents(K4).size() == 16);
  CHECK(group_order_matrix_tree(K4) == 16);
}

TEST_CASE("the non-recurrent stable configuration of the triangle") {
  const FiniteMultigraph c3 = cycle(3);
  CHECK_FALSE(is_recurrent_burning(c3, {0, 0, 0}));
  CHECK(is_recurrent_burning(c3, {0, 1, 0}));
  CHECK(is_recurrent_burning(c3, {0, 1, 1}));
  CHECK_THROWS_AS(is_recurrent_burning(c3, {0, 2, 0}), std::invalid_argument);
}

TEST_CASE("stabilization on a single edge and on the 4-cycle") {
  const FiniteMultigraph za(2, 0, {{0, 1, 1}});
  const SinkStabilization r = stabilize_sink(za, {0, 3});
  CHECK(r.config == SinkedConfig{0, 0});
  CHECK(r.odometer[1] == 3);

  const FiniteMultigraph c4 = cycle(4);
  const SinkStabilization s = stabilize_sink(c4, {0, 2, 2, 2});
  const SinkStabilization o = naive_stabilize(c4, {0, 2, 2, 2});
  CHECK(s.config == o.config);
  CHECK(s.odometer == o.odometer);
  CHECK_THROWS_AS(stabilize_sink(c4, {0, -1, 0, 0}), std::invalid_argument);
}

TEST_CASE("batch stabilization matches one-at-a-time toppling") {
  RngStream rng(5);
  for (const auto& g : graph_library()) {
    for (int t = 0; t < 20; ++t) {
      SinkedConfig s(static_cast<std::size_t>(g.size()), 0);
      for (int v = 0; v < g.size(); ++v)
        if (v != g.sink()) s[static_cast<std::size_t>(v)] = static_cast<std::int64_t>(rng.below(4 * static_cast<std::uint64_t>(g.degree(v))));
      const SinkStabilization a = stabilize_sink(g, s), b = naive_stabilize(g, s);
      CHECK(a.config == b.config);
      CHECK(a.odometer == b.odometer);
      CHECK(is_stable(g, a.config));
    }
  }
}

TEST_CASE("identity element agrees with an exhaustive search") {
  for (const auto& g : {cycle(3), cycle(5), graph_library()[9]}) {
    const auto rec = enumerate_recurrents(g);
    std::vector<SinkedConfig> neutral;
    for (const auto& e : rec) {
      bool ok = true;
      for (const auto& s : rec) ok = ok && group_add(g, e, s) == s;
      if (ok) neutral.push_back(e);
    }
    REQUIRE(neutral.size() == 1);
    CHECK(identity_element(g) == neutral[0]);
  }
}

TEST_CASE("Tutte polynomials of tiny graphs") {
  const ExactPolynomial tri = tutte_brute(cycle(3));
  ExactPolynomial expect;
  expect.add(2, 0, 1);
  expect.add(1, 0, 1);
  expect.add(0, 1, 1);
  CHECK(tri == expect);
  CHECK(tri.to_string() == "x^2 + x + y");

  ExactPolynomial edge;
  edge.add(1, 0, 1);
  CHECK(tutte_brute(FiniteMultigraph(2, 0, {{0, 1, 1}})) == edge);
  edge.add(0, 1, 1);
  CHECK(tutte_brute(FiniteMultigraph(2, 0, {{0, 1, 2}})) == edge);
  CHECK(tri.eval(1, 1) == 3);
  CHECK(tri.dy(1, 1) == 1);
}

TEST_CASE("unicycle census") {
  const UnicycleCensus c4 = unicycle_census(cycle(4));
  CHECK(c4.count == 1);
  CHECK(c4.lengths.size() == 1);
  CHECK(c4.lengths.at(4) == 1);
  CHECK(c4.tutte_slope == doctest::Approx(1.0 / 16));
  const UnicycleCensus path(unicycle_census(FiniteMultigraph(4, 0, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}})));
  CHECK(path.count == 0);
  // a doubled edge is a cycle of length 2
  const UnicycleCensus dbl = unicycle_census(FiniteMultigraph(2, 0, {{0, 1, 2}}));
  CHECK(dbl.count == 1);
  CHECK(dbl.lengths.at(2) == 1);
}

TEST_CASE("exact identities over the graph library") {
  const auto lib = graph_library();
  CHECK(lib.size() == 12);
  for (const auto& g : lib) {
    CAPTURE(g.name());
    const StatsReport rep = algebra_exactness(g);
    CHECK(rep.passed());
    CHECK(rep.get("recurrents") == rep.get("det_reduced_laplacian"));
    CHECK(rep.get("recurrents") == rep.get("tutte_11"));
    CHECK(rep.get("unicycles") == rep.get("tutte_dy_11"));
  }
}

TEST_CASE("group laws over the graph library") {
  for (const auto& g : graph_library()) {
    CAPTURE(g.name());
    const StatsReport rep = check_group_laws(g);
    CHECK(rep.passed());
    if (rep.has("law_violations")) CHECK(rep.get("law_violations") == 0);
    if (rep.has("operator_noncommuting")) CHECK(rep.get("operator_noncommuting") == 0);
  }
}

TEST_CASE("wired grid") {
  const FiniteMultigraph g = wired_grid(2);
  CHECK(g.size() == 5);
  CHECK(g.sink() == 4);
  CHECK(g.multiplicity(0, 4) == 2);
  CHECK(g.degree(4) == 8);
  CHECK(group_order_matrix_tree(g) == 192);
  CHECK(group_order_matrix_tree(wired_grid(3)) == 100352);
}

TEST_CASE("graph text format") {
  const FiniteMultigraph g = graph_library()[9];
  std::stringstream ss;
  write_graph(ss, g);
  const FiniteMultigraph h = read_graph(ss);
  CHECK(h.size() == g.size());
  CHECK(h.sink() == g.sink());
  CHECK(h.edges().size() == g.edges().size());
  for (const auto& e : g.edges()) CHECK(h.multiplicity(e.u, e.v) == e.mult);

  std::istringstream parallel("# comment\nvertices 3\nsink 2\n0 1 1\n1 0 2\n1 2 1\n");
  CHECK(read_graph(parallel).multiplicity(0, 1) == 3);

  auto bad = [](const std::string& text) {
    std::istringstream in(text);
    return read_graph(in);
  };
  CHECK_THROWS_AS(bad("vertices 2\nsink 0\n0 0 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(bad("vertices 3\nsink 0\n0 1 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(bad("vertices 2\nsink 0\n0 2 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(bad("vertices 2\nsink 0\n0 1 0\n"), std::invalid_argument);
  CHECK_THROWS_AS(bad("vertices 2\nsink 5\n0 1 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(bad("vertices 2\nsink 0\n0 x 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(bad("vertices 2\nsink 0\n0 1 2 3\n"), std::invalid_argument);
  CHECK(bad("vertices 2\nsink 0\n0 1\n").multiplicity(0, 1) == 1);
}
