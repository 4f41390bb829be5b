#include <clusterlens/recover.hpp>

#include <json.hpp>

#include <algorithm>
#include <numeric>
#include <sstream>

namespace clusterlens {

using nlohmann::json;

namespace {

std::string depth_suffix(const Rational& q) {
  const std::string s = rational_to_string(q);
  if (s.find('/') != std::string::npos || s.find('-') != std::string::npos) {
    return "_{" + s + "}";
  }
  return "_" + s;
}

std::string node_ascii(const ClusterNode& node) {
  if (node.is_leaf()) return "r";
  std::string out = "(";
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    if (i) out += " ";
    out += node_ascii(node.children[i]);
  }
  out += ")";
  out += depth_suffix(node.depth);
  return out;
}

void sort_node(ClusterNode* node) {
  for (auto& c : node->children) sort_node(&c);
  std::stable_sort(node->children.begin(), node->children.end(),
                   [](const ClusterNode& a, const ClusterNode& b) {
                     if (a.is_leaf() != b.is_leaf()) return !a.is_leaf();
                     if (a.is_leaf()) return false;
                     if (a.depth != b.depth) return a.depth > b.depth;
                     return node_ascii(a) < node_ascii(b);
                   });
}

void number_leaves(ClusterNode* node, int* next) {
  if (node->is_leaf()) {
    node->leaf_index = (*next)++;
    return;
  }
  for (auto& c : node->children) number_leaves(&c, next);
}

}  // namespace

void ClusterPicture::canonicalize() {
  sort_node(&root);
  int next = 1;
  number_leaves(&root, &next);
}

std::string ClusterPicture::ascii() const { return node_ascii(root); }

std::string render_ascii(const ClusterPicture& p) { return p.ascii(); }

bool ClusterPicture::operator==(const ClusterPicture& o) const {
  return d == o.d && ascii() == o.ascii();
}

ExtRational average(const WeightedGraph& h, const RecoveryState& state,
                    const Valuation& ord_j_h) {
  const long long added = h.edge_count() - state.g.edge_count();
  if (added <= 0) throw InternalError("average: candidate does not add edges");
  if (ord_j_h.is_infinite()) return ExtRational::neg_infinity();

  const int n = state.n;
  Rational corr = 0;
  for (int l = 1; l <= n; ++l) {
    corr += Rational(2 * state.mult[l - 1] * (n + 2 - l)) * state.depths[l - 1];
  }
  // Same correction expressed in previously selected valuations:
  // 2 sum_l e_l (n+2-l) d_l = -2 ord J_{G_n} + ord J_{G_{n-1}}.
  const long long vn = n >= 1 ? state.ord_j_hist[n - 1] : 0;
  const long long vn1 = n >= 2 ? state.ord_j_hist[n - 2] : 0;
  if (corr != Rational(-2 * vn + vn1)) {
    throw InternalError("correction-term recursion mismatch");
  }
  return ExtRational((Rational(-ord_j_h.value()) - corr) / Rational(2 * added));
}

namespace {

void advance_state(RecoveryState* state, const WeightedGraph& selected,
                   const ExtRational& depth, const Valuation& ord_j_sel) {
  if (!depth.is_finite()) {
    throw InternalError("selected depth is not finite");
  }
  if (state->n >= 1 && !(depth.value() < state->depths.back())) {
    throw InternalError("depths are not strictly decreasing");
  }
  const long long added = selected.edge_count() - state->g.edge_count();
  state->depths.push_back(depth.value());
  state->mult.push_back(added);
  state->ord_j_hist.push_back(ord_j_sel.value());
  state->g = selected;
  state->n += 1;
}

}  // namespace

StepRecord step(RecoveryState& state, const MonicInput& f, CacheStore& cache,
                const Valuation& ord_delta_f, const RunOptions& opts) {
  if (state.g.is_complete()) throw InternalError("step called on complete graph");
  const auto candidates = candidate_set(state.g);
  if (candidates.empty()) throw InternalError("no candidates for incomplete graph");

  const auto invariants = get_or_compute_all(cache, candidates, opts.threads);

  StepRecord rec;
  rec.n = state.n + 1;
  rec.candidates.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    StepCandidate cand;
    cand.graph = candidates[i];
    cand.ord_j = ord_j(invariants[i], f, ord_delta_f);
    cand.a_value = average(candidates[i], state, cand.ord_j);
    cand.edges = candidates[i].edge_count();
    rec.candidates.push_back(std::move(cand));
  }

  ExtRational best = ExtRational::neg_infinity();
  for (const auto& c : rec.candidates) best = std::max(best, c.a_value);
  if (!best.is_finite()) {
    throw InternalError("no candidate attains a finite average");
  }
  int best_edges = -1;
  int chosen = -1;
  int chosen_count = 0;
  for (std::size_t i = 0; i < rec.candidates.size(); ++i) {
    if (!(rec.candidates[i].a_value == best)) continue;
    const int e = rec.candidates[i].edges;
    if (e > best_edges) {
      best_edges = e;
      chosen = static_cast<int>(i);
      chosen_count = 1;
    } else if (e == best_edges) {
      ++chosen_count;
    }
  }
  if (chosen_count != 1) {
    throw InternalError("maximizer with the most edges is not unique");
  }

  const auto& sel = rec.candidates[chosen];
  rec.selected = sel.graph;
  rec.depth = sel.a_value;
  rec.edges_added = sel.graph.edge_count() - state.g.edge_count();
  advance_state(&state, sel.graph, sel.a_value, sel.ord_j);
  return rec;
}

namespace {

WeightedGraph completed_graph(const WeightedGraph& g) {
  WeightedGraph out = prime_graph(g);
  for (int i = 0; i < g.d(); ++i)
    for (int j = i + 1; j < g.d(); ++j)
      if (out.weight(i, j) == 0) out.set_weight(i, j, 1);
  return out;
}

// The final auxiliary graph is forced exactly when the current graph has
// two components (counting isolated vertices); J of the completed graph is
// J_{G_n} / Delta, so the last depth needs no extra invariant.
StepRecord shortcut_step(RecoveryState& state, const Valuation& ord_delta_f) {
  if (ord_delta_f.is_infinite()) throw InputError("polynomial is not separable");
  const WeightedGraph h = completed_graph(state.g);
  const long long prev = state.n >= 1 ? state.ord_j_hist[state.n - 1] : 0;
  const Valuation oj = Valuation::of(prev - ord_delta_f.value());

  StepRecord rec;
  rec.n = state.n + 1;
  rec.shortcut = true;
  StepCandidate cand;
  cand.graph = canonical_graph(h);
  cand.ord_j = oj;
  cand.a_value = average(h, state, oj);
  cand.edges = h.edge_count();
  rec.candidates.push_back(cand);
  rec.selected = cand.graph;
  rec.depth = cand.a_value;
  rec.edges_added = h.edge_count() - state.g.edge_count();
  advance_state(&state, h, cand.a_value, oj);
  return rec;
}

ClusterPicture trivial_picture() {
  ClusterPicture pic;
  pic.d = 1;
  pic.root.leaf_index = 1;
  return pic;
}

}  // namespace

ClusterPicture assemble(const WeightedGraph& g, const std::vector<Rational>& depths) {
  const int d = g.d();
  const int k = static_cast<int>(depths.size());
  if (!g.is_complete()) throw InternalError("assemble: graph is not complete");
  if (g.max_weight() > k) throw InternalError("assemble: weight exceeds depth count");
  for (int i = 1; i < k; ++i) {
    if (!(depths[i] < depths[i - 1])) {
      throw InternalError("assemble: depths not strictly decreasing");
    }
  }

  // pairwise valuations from the weights
  std::vector<Rational> m(pair_count(d));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const int w = g.weight(i, j);
      m[pair_index(i, j, d)] = depths[k - w];
    }
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b)
      for (int c = b + 1; c < d; ++c) {
        const Rational& ab = m[pair_index(a, b, d)];
        const Rational& bc = m[pair_index(b, c, d)];
        const Rational& ac = m[pair_index(a, c, d)];
        const Rational lo = std::min({ab, bc, ac});
        int hits = (ab == lo) + (bc == lo) + (ac == lo);
        if (hits < 2) throw InternalError("assemble: matrix is not ultrametric");
      }

  ClusterPicture pic;
  pic.d = d;
  if (d == 1) return trivial_picture();

  std::vector<ClusterNode> current(d);
  for (int v = 0; v < d; ++v) current[v].leaf_index = v + 1;
  std::vector<int> group(d);
  std::iota(group.begin(), group.end(), 0);

  for (int n = 0; n < k; ++n) {
    const Rational& t = depths[n];
    // components of the >= t graph
    std::vector<int> parent(d);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        if (m[pair_index(i, j, d)] >= t) parent[find(i)] = find(j);

    std::vector<ClusterNode> next_nodes;
    std::vector<int> next_group(d, -1);
    std::vector<int> root_to_node(d, -1);
    bool merged_any = false;
    for (int v = 0; v < d; ++v) {
      const int r = find(v);
      if (root_to_node[r] == -1) {
        root_to_node[r] = static_cast<int>(next_nodes.size());
        next_nodes.emplace_back();
      }
      next_group[v] = root_to_node[r];
    }
    // collect distinct current nodes per new component
    std::vector<std::vector<int>> members(next_nodes.size());
    std::vector<int> seen(static_cast<int>(current.size()), -1);
    for (int v = 0; v < d; ++v) {
      const int g_old = group[v];
      const int g_new = next_group[v];
      if (seen[g_old] == -1) {
        seen[g_old] = g_new;
        members[g_new].push_back(g_old);
      } else if (seen[g_old] != g_new) {
        throw InternalError("assemble: threshold components not nested");
      }
    }
    for (std::size_t c = 0; c < members.size(); ++c) {
      if (members[c].size() == 1) {
        next_nodes[c] = std::move(current[members[c][0]]);
      } else {
        merged_any = true;
        next_nodes[c].depth = t;
        for (int idx : members[c]) next_nodes[c].children.push_back(std::move(current[idx]));
      }
    }
    if (!merged_any) throw InternalError("assemble: level without a new pair");
    current = std::move(next_nodes);
    group = std::move(next_group);
  }
  if (current.size() != 1) throw InternalError("assemble: final graph not connected");
  pic.root = std::move(current[0]);
  pic.canonicalize();
  return pic;
}

RunResult run(const MonicInput& f, CacheStore& cache, const RunOptions& opts) {
  RunResult result;
  result.ord_cf = f.ord_cf;
  if (f.d == 1) {
    result.picture = trivial_picture();
    result.final_graph = WeightedGraph(1);
    return result;
  }

  const Valuation odelta = ord_delta(cache, f);
  if (odelta.is_infinite()) {
    throw InputError("polynomial is not separable (Delta(a) = 0)");
  }

  RecoveryState state(f.d);
  const int max_steps = pair_count(f.d);
  for (int iter = 0; iter <= max_steps; ++iter) {
    const bool complete = state.g.is_complete();
    if (complete != candidate_set(state.g).empty()) {
      throw InternalError("completeness and candidate emptiness disagree");
    }
    if (complete) break;
    if (iter == max_steps) throw InternalError("recovery failed to terminate");
    if (opts.use_shortcut && state.g.components(1).size() == 2) {
      result.trace.push_back(shortcut_step(state, odelta));
    } else {
      result.trace.push_back(step(state, f, cache, odelta, opts));
    }
  }

  long long total = 0;
  for (long long e : state.mult) total += e;
  if (total != pair_count(f.d)) throw InternalError("edge multiplicities do not sum to C(d,2)");

  result.profile = DepthProfile{state.depths, state.mult};
  result.final_graph = state.g;
  result.picture = assemble(state.g, state.depths);
  return result;
}

namespace {

json node_to_json(const ClusterNode& node) {
  if (node.is_leaf()) {
    json j;
    j["leaf"] = node.leaf_index;
    return j;
  }
  json j;
  j["depth"] = rational_to_string(node.depth);
  json children = json::array();
  for (const auto& c : node.children) children.push_back(node_to_json(c));
  j["children"] = std::move(children);
  return j;
}

}  // namespace

std::string to_json(const RunResult& result, const MonicInput& f, bool with_trace) {
  json j;
  j["degree"] = f.d;
  j["prime"] = f.ctx.p.str();
  j["ord_leading"] = result.ord_cf.is_infinite() ? json("inf")
                                                 : json(result.ord_cf.value());
  json depths = json::array();
  for (const auto& q : result.profile.depths) depths.push_back(rational_to_string(q));
  j["depths"] = std::move(depths);
  j["tree"] = node_to_json(result.picture.root);
  if (with_trace) {
    json steps = json::array();
    for (const auto& rec : result.trace) {
      json s;
      s["n"] = rec.n;
      s["shortcut"] = rec.shortcut;
      json cands = json::array();
      for (const auto& c : rec.candidates) {
        json cj;
        cj["graph"] = to_canonical_string(c.graph);
        cj["ord_j"] = c.ord_j.to_string();
        cj["a"] = c.a_value.to_string();
        cj["edges"] = c.edges;
        cands.push_back(std::move(cj));
      }
      s["candidates"] = std::move(cands);
      s["selected"] = to_canonical_string(rec.selected);
      s["depth"] = rec.depth.to_string();
      s["edges_added"] = rec.edges_added;
      steps.push_back(std::move(s));
    }
    j["trace"] = std::move(steps);
  }
  return j.dump(2) + "\n";
}

}  // namespace clusterlens
