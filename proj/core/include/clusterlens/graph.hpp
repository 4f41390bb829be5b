#ifndef CLUSTERLENS_GRAPH_HPP
#define CLUSTERLENS_GRAPH_HPP

#include <clusterlens/common.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace clusterlens {

// Unordered pairs {i,j}, 0 <= i < j < d, indexed row by row.
inline int pair_count(int d) { return d * (d - 1) / 2; }
inline int pair_index(int i, int j, int d) {
  if (i > j) std::swap(i, j);
  return i * d - i * (i + 1) / 2 + (j - i - 1);
}

// A weight function on unordered vertex pairs; absent pair == weight 0.
// The edge set is the pairs of weight >= 1.
class WeightedGraph {
public:
  explicit WeightedGraph(int d);
  static WeightedGraph empty(int d) { return WeightedGraph(d); }

  int d() const { return d_; }
  int weight(int i, int j) const { return w_[pair_index(i, j, d_)]; }
  void set_weight(int i, int j, int w);
  const std::vector<std::uint8_t>& weights() const { return w_; }

  int edge_count() const;
  int max_weight() const;
  bool is_complete() const;  // every pair has weight >= 1

  // Connected components of the weight >= threshold graph, singletons
  // included, each sorted; components sorted by first vertex.
  std::vector<std::vector<int>> components(int threshold = 1) const;

  // True when the weight >= threshold graph is a disjoint union of
  // complete graphs.
  bool is_union_of_cliques(int threshold = 1) const;

  bool operator==(const WeightedGraph& o) const {
    return d_ == o.d_ && w_ == o.w_;
  }

private:
  int d_;
  std::vector<std::uint8_t> w_;
};

// Lexicographically minimal weight sequence over all vertex relabelings.
// Equal keys iff the graphs are isomorphic as weighted graphs.
struct CanonicalKey {
  int d = 0;
  std::vector<std::uint8_t> seq;

  bool operator==(const CanonicalKey& o) const {
    return d == o.d && seq == o.seq;
  }
  bool operator<(const CanonicalKey& o) const {
    if (d != o.d) return d < o.d;
    return seq < o.seq;
  }
};

struct CanonicalKeyHash {
  std::size_t operator()(const CanonicalKey& k) const noexcept;
};

CanonicalKey canonical_form(const WeightedGraph& g);
// The relabeled copy realizing the canonical key.
WeightedGraph canonical_graph(const WeightedGraph& g);

// Text form "d; i-j:w, i-j:w, ..." over the canonical labeling, positive
// weights only, pairs in row order, vertices printed 1-based.
std::string to_canonical_string(const WeightedGraph& g);
WeightedGraph graph_from_string(const std::string& s);

// Membership test for the auxiliary-graph family: weights surjective onto
// {1..n} for n = max weight, and w(uv) >= min(w(vw), w(uw)) for all triples
// (equivalently every weight->threshold graph is a union of cliques).
// The empty graph is not auxiliary (no n >= 1 is attained).
bool is_auxiliary(const WeightedGraph& g);

// Every positive weight incremented by one; edge set preserved.
WeightedGraph prime_graph(const WeightedGraph& g);

// One labelled weight map: weights in pair-index order.
using WeightMap = std::vector<std::uint8_t>;

// The orbit of g's labelled weight map under S_d: distinct labelled maps,
// sorted.  size * |Stab(g)| == d!.
std::vector<WeightMap> cosets(const WeightedGraph& g);

std::uint64_t factorial(int n);

// All isomorphism classes H strictly containing prime_graph(g), where the
// added edges have weight exactly 1 and the edge set of H is a disjoint
// union of complete graphs.  Requires g's edge set to be a disjoint union
// of complete graphs; empty when g is complete.  Canonical representatives,
// sorted by key.
std::vector<WeightedGraph> candidate_set(const WeightedGraph& g);

// Every isomorphism class of auxiliary graph on d vertices, canonical
// representatives sorted by key.  Computed as the closure of the empty
// graph under candidate_set.
std::vector<WeightedGraph> enumerate_auxiliary(int d, int max_d = kMaxVertices);

}  // namespace clusterlens

#endif
