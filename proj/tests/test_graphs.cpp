#include <clusterlens/graph.hpp>

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace clusterlens;

namespace {

WeightedGraph triangle(int w12, int w13, int w23, int d = 3) {
  WeightedGraph g(d);
  g.set_weight(0, 1, w12);
  g.set_weight(0, 2, w13);
  g.set_weight(1, 2, w23);
  return g;
}

// Exhaustive enumeration over all weight maps with entries in [0, max_w],
// deduplicated by canonical key.  Independent of the candidate-set BFS.
std::size_t brute_force_count(int d, int max_w) {
  const int np = pair_count(d);
  std::vector<int> w(np, 0);
  std::set<CanonicalKey> keys;
  while (true) {
    WeightedGraph g(d);
    int idx = 0;
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) g.set_weight(i, j, w[idx++]);
    if (is_auxiliary(g)) keys.insert(canonical_form(g));
    int pos = np - 1;
    while (pos >= 0 && w[pos] == max_w) {
      w[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++w[pos];
  }
  return keys.size();
}

}  // namespace

TEST_CASE("auxiliary predicate") {
  CHECK(is_auxiliary(triangle(2, 1, 1)));
  CHECK(!is_auxiliary(triangle(2, 2, 1)));  // weight-1 edge under two heavier ones
  CHECK(!is_auxiliary(triangle(3, 1, 1)));  // not surjective onto {1,2,3}
  CHECK(is_auxiliary(triangle(1, 1, 1)));
  CHECK(!is_auxiliary(WeightedGraph::empty(3)));
  WeightedGraph path(3);
  path.set_weight(0, 1, 1);
  path.set_weight(1, 2, 1);
  CHECK(!is_auxiliary(path));  // not a union of cliques
}

TEST_CASE("enumerate_auxiliary small degrees") {
  CHECK(enumerate_auxiliary(2).size() == 1);
  const auto g3 = enumerate_auxiliary(3);
  CHECK(g3.size() == 3);
  std::set<std::string> names;
  for (const auto& g : g3) names.insert(to_canonical_string(g));
  WeightedGraph edge(3);
  edge.set_weight(0, 1, 1);
  CHECK(names.count(to_canonical_string(edge)) == 1);
  CHECK(names.count(to_canonical_string(triangle(1, 1, 1))) == 1);
  CHECK(names.count(to_canonical_string(triangle(2, 1, 1))) == 1);
  CHECK_THROWS_AS(enumerate_auxiliary(1), ResourceError);
  CHECK_THROWS_AS(enumerate_auxiliary(9), ResourceError);
}

TEST_CASE("enumeration agrees with brute force over all weight maps") {
  // in each case the brute-force cap is at least C(d,2), the spec bound
  CHECK(brute_force_count(3, 3) == 3);
  const auto n4 = brute_force_count(4, 6);
  CHECK(enumerate_auxiliary(4).size() == n4);
  CHECK(n4 == 11);  // regression value, fixed by the exhaustive run above
}

TEST_CASE("degree five enumeration (regression)") {
  const auto g5 = enumerate_auxiliary(5);
  // A strictly increasing chain of clique unions on d vertices has length
  // at most d-1, so weights above 4 cannot occur; cap 4 is exhaustive.
  CHECK(brute_force_count(5, 4) == g5.size());
  CHECK(g5.size() == 39);
  for (const auto& g : g5) {
    CHECK(g.max_weight() <= 4);
    CHECK(g.max_weight() <= pair_count(5));
    for (int k = 1; k <= g.max_weight(); ++k) CHECK(g.is_union_of_cliques(k));
  }
}

TEST_CASE("threshold graphs of enumerated auxiliaries are clique unions") {
  for (int d = 2; d <= 5; ++d) {
    for (const auto& g : enumerate_auxiliary(d)) {
      for (int k = 1; k <= g.max_weight(); ++k) {
        CHECK(g.is_union_of_cliques(k));
      }
    }
  }
}

TEST_CASE("cosets") {
  WeightedGraph edge(3);
  edge.set_weight(0, 1, 1);
  CHECK(cosets(edge).size() == 3);
  CHECK(cosets(triangle(1, 1, 1)).size() == 1);
  CHECK(cosets(triangle(2, 1, 1)).size() == 3);

  for (int d = 3; d <= 5; ++d) {
    for (const auto& g : enumerate_auxiliary(d)) {
      const auto maps = cosets(g);
      CHECK(factorial(d) % maps.size() == 0);
      CHECK(std::set<WeightMap>(maps.begin(), maps.end()).size() == maps.size());
    }
  }
}

TEST_CASE("prime_graph") {
  WeightedGraph edge5(5);
  edge5.set_weight(0, 1, 1);
  const auto primed = prime_graph(edge5);
  CHECK(primed.weight(0, 1) == 2);
  CHECK(primed.edge_count() == 1);
  CHECK(prime_graph(WeightedGraph::empty(4)) == WeightedGraph::empty(4));
  const auto t = prime_graph(triangle(2, 1, 1));
  CHECK(t.weight(0, 1) == 3);
  CHECK(t.weight(0, 2) == 2);
  CHECK(t.weight(1, 2) == 2);
}

TEST_CASE("candidate_set for the single edge on five vertices") {
  WeightedGraph edge(5);
  edge.set_weight(0, 1, 1);
  const auto cands = candidate_set(edge);
  // All clique-union supergraphs of the primed edge with new weight-1
  // edges.  Five of the six appear in the worked example in the source
  // material for this construction; the sixth (triangle containing the
  // doubled edge plus a separate new edge) completes the set.
  CHECK(cands.size() == 6);

  std::set<std::string> names;
  for (const auto& h : cands) {
    CHECK(is_auxiliary(h));
    CHECK(h.weight(0, 1) >= 1);
    names.insert(to_canonical_string(h));
  }
  auto expect = [&](WeightedGraph g) { CHECK(names.count(to_canonical_string(g)) == 1); };

  WeightedGraph h1(5);  // new triangle on the free vertices, doubled edge apart
  h1.set_weight(0, 1, 2);
  h1.set_weight(2, 3, 1);
  h1.set_weight(2, 4, 1);
  h1.set_weight(3, 4, 1);
  expect(h1);
  WeightedGraph h2(5);  // one new disjoint edge
  h2.set_weight(0, 1, 2);
  h2.set_weight(2, 3, 1);
  expect(h2);
  WeightedGraph h3(5);  // triangle over the doubled edge
  h3.set_weight(0, 1, 2);
  h3.set_weight(0, 2, 1);
  h3.set_weight(1, 2, 1);
  expect(h3);
  WeightedGraph h4(5);  // K4 over the doubled edge
  h4.set_weight(0, 1, 2);
  for (auto [i, j] : {std::pair{0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}) h4.set_weight(i, j, 1);
  expect(h4);
  WeightedGraph h5(5);  // complete graph
  h5.set_weight(0, 1, 2);
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      if (h5.weight(i, j) == 0) h5.set_weight(i, j, 1);
  expect(h5);
  WeightedGraph h6(5);  // triangle over the doubled edge plus a new edge
  h6.set_weight(0, 1, 2);
  h6.set_weight(0, 2, 1);
  h6.set_weight(1, 2, 1);
  h6.set_weight(3, 4, 1);
  expect(h6);
}

TEST_CASE("candidate_set edge cases") {
  // empty graph: all weight-1 clique unions
  CHECK(candidate_set(WeightedGraph::empty(3)).size() == 2);
  CHECK(candidate_set(WeightedGraph::empty(4)).size() == 4);
  CHECK(candidate_set(WeightedGraph::empty(5)).size() == 6);
  CHECK(candidate_set(WeightedGraph::empty(6)).size() == 10);
  // complete graphs have no strict supergraph
  CHECK(candidate_set(triangle(1, 1, 1)).empty());
  CHECK(candidate_set(triangle(2, 1, 1)).empty());
  for (const auto& h : candidate_set(WeightedGraph::empty(5))) {
    CHECK(h.max_weight() == 1);
  }
  // members strictly contain the primed graph, new edges at weight 1
  WeightedGraph two_edges(5);
  two_edges.set_weight(0, 1, 1);
  two_edges.set_weight(2, 3, 1);
  const auto cands = candidate_set(two_edges);
  CHECK(cands.size() == 3);
  for (const auto& h : cands) {
    CHECK(h.edge_count() > 2);
    int doubled = 0, single = 0;
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j) {
        if (h.weight(i, j) == 2) ++doubled;
        if (h.weight(i, j) == 1) ++single;
      }
    CHECK(doubled == 2);  // the primed pair survives exactly
    CHECK(single == h.edge_count() - 2);
  }
}

TEST_CASE("canonical form is a complete isomorphism invariant here") {
  std::mt19937_64 rng(7);
  for (int d = 3; d <= 6; ++d) {
    for (int trial = 0; trial < 50; ++trial) {
      WeightedGraph g(d);
      for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) g.set_weight(i, j, static_cast<int>(rng() % 4));
      std::vector<int> perm(d);
      for (int i = 0; i < d; ++i) perm[i] = i;
      std::shuffle(perm.begin(), perm.end(), rng);
      WeightedGraph h(d);
      for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) h.set_weight(perm[i], perm[j], g.weight(i, j));
      CHECK(canonical_form(g) == canonical_form(h));
    }
  }
  WeightedGraph e1(3), e2(3);
  e1.set_weight(0, 1, 1);
  e2.set_weight(0, 1, 2);
  CHECK(!(canonical_form(e1) == canonical_form(e2)));
  // all six relabelings of the weighted triangle share one key
  std::set<std::vector<std::uint8_t>> keys;
  std::vector<int> perm{0, 1, 2};
  do {
    WeightedGraph h(3);
    const auto g = triangle(2, 1, 1);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) h.set_weight(perm[i], perm[j], g.weight(i, j));
    keys.insert(canonical_form(h).seq);
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(keys.size() == 1);
}

TEST_CASE("graph text format round trip") {
  const auto g = triangle(2, 1, 1);
  const auto s = to_canonical_string(g);
  CHECK(s == "3; 1-2:2, 1-3:1, 2-3:1");
  CHECK(graph_from_string(s) == canonical_graph(g));
  WeightedGraph edge(5);
  edge.set_weight(3, 4, 2);
  CHECK(to_canonical_string(edge) == "5; 1-2:2");
  CHECK_THROWS_AS(graph_from_string("nonsense"), InputError);
  CHECK_THROWS_AS(graph_from_string("3; 1-9:1"), InputError);
}
