#ifndef CLUSTERLENS_RECOVER_HPP
#define CLUSTERLENS_RECOVER_HPP

#include <clusterlens/evaluator.hpp>

#include <string>
#include <vector>

namespace clusterlens {

// Distinct pairwise valuations d_1 > d_2 > ... > d_k with the number of
// root pairs at each; sum of mult equals C(d,2).
struct DepthProfile {
  std::vector<Rational> depths;
  std::vector<long long> mult;

  std::size_t k() const { return depths.size(); }
  bool operator==(const DepthProfile& o) const {
    return depths == o.depths && mult == o.mult;
  }
};

// Rooted cluster tree.  Leaves are roots of the polynomial; every internal
// node has >= 2 children and a strictly larger depth than its parent.
struct ClusterNode {
  Rational depth;  // meaningful for internal nodes only
  int leaf_index = 0;  // 1-based, assigned canonically; 0 for internal
  std::vector<ClusterNode> children;

  bool is_leaf() const { return children.empty(); }
};

struct ClusterPicture {
  int d = 0;
  ClusterNode root;

  // Sorts children deterministically (internal nodes first, deeper first)
  // and renumbers leaves in traversal order.
  void canonicalize();
  std::string ascii() const;
  bool operator==(const ClusterPicture& o) const;
};

std::string render_ascii(const ClusterPicture& p);

struct StepCandidate {
  WeightedGraph graph;
  Valuation ord_j;
  ExtRational a_value;
  int edges = 0;

  StepCandidate() : graph(1) {}
};

struct StepRecord {
  int n = 0;  // this record selects G_n
  std::vector<StepCandidate> candidates;
  WeightedGraph selected;
  ExtRational depth;
  long long edges_added = 0;
  bool shortcut = false;

  StepRecord() : selected(1) {}
};

struct RecoveryState {
  int n = 0;
  WeightedGraph g;  // G_n; the empty graph initially
  std::vector<Rational> depths;       // d_1..d_n
  std::vector<long long> mult;        // e_1..e_n
  std::vector<long long> ord_j_hist;  // ord J_{G_1}..ord J_{G_n}

  explicit RecoveryState(int d) : g(WeightedGraph::empty(d)) {}
};

// A_{n+1}(H, f) = (-ord J_{H,f} - 2 sum_l e_l (n+2-l) d_l) / 2(|E_H| - |E_{G_n}|),
// with -inf when J_{H,f} = 0.  The correction term is cross-checked against
// its expression in previously selected ord J values.
ExtRational average(const WeightedGraph& h, const RecoveryState& state,
                    const Valuation& ord_j_h);

struct RunOptions {
  bool use_shortcut = true;  // derive the forced final step from ord(Delta)
  unsigned threads = 0;      // 0 = hardware concurrency
};

// One induction step: evaluates A_{n+1} over the candidate set, selects the
// maximizer with the most edges (a tie is an internal error), appends the
// new depth.  Returns the step record alongside the advanced state.
StepRecord step(RecoveryState& state, const MonicInput& f, CacheStore& cache,
                const Valuation& ord_delta_f, const RunOptions& opts = {});

// Pairwise valuations of a complete weighted graph against the depth list:
// ord(x_i - x_j) = d_{k+1-w(i,j)}; clusters are threshold components.
ClusterPicture assemble(const WeightedGraph& g_complete,
                        const std::vector<Rational>& depths);

struct RunResult {
  ClusterPicture picture;
  DepthProfile profile;
  std::vector<StepRecord> trace;
  Valuation ord_cf;
  WeightedGraph final_graph;

  RunResult() : final_graph(1) {}
};

RunResult run(const MonicInput& f, CacheStore& cache, const RunOptions& opts = {});

// JSON rendering: {degree, prime, ord_leading, depths:[...], tree: node},
// node = {depth:"num/den", children:[node|{leaf:i}]}; with_trace adds the
// per-step candidate table.
std::string to_json(const RunResult& result, const MonicInput& f, bool with_trace = false);

}  // namespace clusterlens

#endif
