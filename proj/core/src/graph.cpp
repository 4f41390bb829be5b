#include <clusterlens/graph.hpp>

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace clusterlens {

WeightedGraph::WeightedGraph(int d) : d_(d) {
  if (d < 1 || d > kMaxVertices) {
    throw ResourceError("vertex count " + std::to_string(d) +
                        " outside supported range [1, " +
                        std::to_string(kMaxVertices) + "]");
  }
  w_.assign(pair_count(d), 0);
}

void WeightedGraph::set_weight(int i, int j, int w) {
  if (i == j) throw InternalError("loop edge");
  if (w < 0 || w > 255) throw InternalError("weight out of range");
  w_[pair_index(i, j, d_)] = static_cast<std::uint8_t>(w);
}

int WeightedGraph::edge_count() const {
  int n = 0;
  for (auto w : w_) n += (w >= 1);
  return n;
}

int WeightedGraph::max_weight() const {
  int m = 0;
  for (auto w : w_) m = std::max(m, static_cast<int>(w));
  return m;
}

bool WeightedGraph::is_complete() const {
  return std::all_of(w_.begin(), w_.end(), [](std::uint8_t w) { return w >= 1; });
}

std::vector<std::vector<int>> WeightedGraph::components(int threshold) const {
  std::vector<int> parent(d_);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < d_; ++i)
    for (int j = i + 1; j < d_; ++j)
      if (weight(i, j) >= threshold) parent[find(i)] = find(j);
  std::vector<std::vector<int>> comps(d_);
  for (int v = 0; v < d_; ++v) comps[find(v)].push_back(v);
  std::vector<std::vector<int>> out;
  for (auto& c : comps)
    if (!c.empty()) out.push_back(std::move(c));
  return out;
}

bool WeightedGraph::is_union_of_cliques(int threshold) const {
  for (const auto& comp : components(threshold)) {
    for (std::size_t a = 0; a < comp.size(); ++a)
      for (std::size_t b = a + 1; b < comp.size(); ++b)
        if (weight(comp[a], comp[b]) < threshold) return false;
  }
  return true;
}

std::size_t CanonicalKeyHash::operator()(const CanonicalKey& k) const noexcept {
  std::uint64_t h = splitmix64(static_cast<std::uint64_t>(k.d));
  for (auto b : k.seq) h = splitmix64(h ^ b);
  return static_cast<std::size_t>(h);
}

namespace {

// Weight sequence of g relabeled by perm (vertex v of the output is
// perm[v] of the input).
std::vector<std::uint8_t> relabeled_seq(const WeightedGraph& g,
                                        const std::vector<int>& perm) {
  const int d = g.d();
  std::vector<std::uint8_t> seq(pair_count(d));
  int idx = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      seq[idx++] = static_cast<std::uint8_t>(g.weight(perm[i], perm[j]));
  return seq;
}

}  // namespace

CanonicalKey canonical_form(const WeightedGraph& g) {
  const int d = g.d();
  std::vector<int> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::uint8_t> best = relabeled_seq(g, perm);
  while (std::next_permutation(perm.begin(), perm.end())) {
    // Early-abort prefix comparison against the current best.
    int cmp = 0;
    int idx = 0;
    for (int i = 0; i < d && cmp == 0; ++i) {
      for (int j = i + 1; j < d; ++j) {
        const std::uint8_t w = static_cast<std::uint8_t>(g.weight(perm[i], perm[j]));
        if (w != best[idx]) {
          cmp = w < best[idx] ? -1 : 1;
          break;
        }
        ++idx;
      }
    }
    if (cmp < 0) best = relabeled_seq(g, perm);
  }
  return CanonicalKey{d, std::move(best)};
}

WeightedGraph canonical_graph(const WeightedGraph& g) {
  const CanonicalKey key = canonical_form(g);
  WeightedGraph out(g.d());
  int idx = 0;
  for (int i = 0; i < g.d(); ++i)
    for (int j = i + 1; j < g.d(); ++j) out.set_weight(i, j, key.seq[idx++]);
  return out;
}

std::string to_canonical_string(const WeightedGraph& g) {
  const WeightedGraph c = canonical_graph(g);
  std::ostringstream os;
  os << c.d() << ";";
  bool first = true;
  for (int i = 0; i < c.d(); ++i)
    for (int j = i + 1; j < c.d(); ++j)
      if (c.weight(i, j) >= 1) {
        os << (first ? " " : ", ") << (i + 1) << "-" << (j + 1) << ":"
           << c.weight(i, j);
        first = false;
      }
  return os.str();
}

WeightedGraph graph_from_string(const std::string& s) {
  const auto semi = s.find(';');
  if (semi == std::string::npos) throw InputError("graph string missing ';'");
  int d = 0;
  try {
    d = std::stoi(s.substr(0, semi));
  } catch (const std::exception&) {
    throw InputError("bad vertex count in graph string");
  }
  WeightedGraph g(d);
  std::string rest = s.substr(semi + 1);
  std::istringstream is(rest);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    // trim
    const auto b = tok.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = tok.find_last_not_of(" \t");
    tok = tok.substr(b, e - b + 1);
    if (tok.empty()) continue;
    int i, j, w;
    char dash, colon;
    std::istringstream ts(tok);
    if (!(ts >> i >> dash >> j >> colon >> w) || dash != '-' || colon != ':') {
      throw InputError("bad edge token '" + tok + "'");
    }
    if (i < 1 || j < 1 || i > d || j > d || i == j) {
      throw InputError("bad edge endpoints in '" + tok + "'");
    }
    g.set_weight(i - 1, j - 1, w);
  }
  return g;
}

bool is_auxiliary(const WeightedGraph& g) {
  const int m = g.max_weight();
  if (m < 1) return false;
  std::vector<bool> seen(m + 1, false);
  for (auto w : g.weights()) seen[w] = true;
  for (int k = 1; k <= m; ++k)
    if (!seen[k]) return false;
  const int d = g.d();
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b)
      for (int c = b + 1; c < d; ++c) {
        const int wab = g.weight(a, b), wbc = g.weight(b, c), wac = g.weight(a, c);
        if (wab < std::min(wbc, wac)) return false;
        if (wbc < std::min(wab, wac)) return false;
        if (wac < std::min(wab, wbc)) return false;
      }
  return true;
}

WeightedGraph prime_graph(const WeightedGraph& g) {
  WeightedGraph out(g.d());
  for (int i = 0; i < g.d(); ++i)
    for (int j = i + 1; j < g.d(); ++j) {
      const int w = g.weight(i, j);
      out.set_weight(i, j, w >= 1 ? w + 1 : 0);
    }
  return out;
}

std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

std::vector<WeightMap> cosets(const WeightedGraph& g) {
  const int d = g.d();
  std::vector<int> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  std::set<WeightMap> maps;
  do {
    maps.insert(relabeled_seq(g, perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::vector<WeightMap> out(maps.begin(), maps.end());
  if (factorial(d) % out.size() != 0) {
    throw InternalError("orbit size does not divide d!");
  }
  return out;
}

namespace {

// Set partitions of {0..n-1} as restricted growth strings.
void for_each_partition(int n, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> rgs(n, 0), maxv(n, 0);
  while (true) {
    fn(rgs);
    int i = n - 1;
    while (i > 0 && rgs[i] == maxv[i - 1] + 1) --i;
    if (i == 0) break;
    ++rgs[i];
    maxv[i] = std::max(maxv[i - 1], rgs[i]);
    for (int j = i + 1; j < n; ++j) {
      rgs[j] = 0;
      maxv[j] = maxv[i];
    }
  }
}

}  // namespace

std::vector<WeightedGraph> candidate_set(const WeightedGraph& g) {
  if (!g.is_union_of_cliques(1)) {
    throw InternalError("candidate_set: edge set is not a union of cliques");
  }
  const auto parts = g.components(1);
  const int c = static_cast<int>(parts.size());
  const WeightedGraph primed = prime_graph(g);

  std::set<CanonicalKey> seen;
  std::vector<WeightedGraph> out;
  for_each_partition(c, [&](const std::vector<int>& rgs) {
    // Skip the discrete partition: containment must be strict.
    bool any_merge = false;
    for (int i = 0; i < c && !any_merge; ++i)
      for (int j = i + 1; j < c; ++j)
        if (rgs[i] == rgs[j]) {
          any_merge = true;
          break;
        }
    if (!any_merge) return;

    WeightedGraph h = primed;
    for (int i = 0; i < c; ++i)
      for (int j = i + 1; j < c; ++j) {
        if (rgs[i] != rgs[j]) continue;
        for (int u : parts[i])
          for (int v : parts[j]) h.set_weight(u, v, 1);
      }
    if (!is_auxiliary(h)) {
      throw InternalError("candidate_set produced a non-auxiliary graph");
    }
    CanonicalKey key = canonical_form(h);
    if (seen.insert(key).second) out.push_back(canonical_graph(h));
  });
  std::sort(out.begin(), out.end(),
            [](const WeightedGraph& a, const WeightedGraph& b) {
              return a.weights() < b.weights();
            });
  return out;
}

std::vector<WeightedGraph> enumerate_auxiliary(int d, int max_d) {
  if (d < 2 || d > max_d || max_d > kMaxVertices) {
    throw ResourceError("enumerate_auxiliary: d = " + std::to_string(d) +
                        " outside [2, " + std::to_string(std::min(max_d, kMaxVertices)) + "]");
  }
  std::set<CanonicalKey> seen;
  std::vector<WeightedGraph> out;
  std::vector<WeightedGraph> frontier{WeightedGraph::empty(d)};
  while (!frontier.empty()) {
    std::vector<WeightedGraph> next;
    for (const auto& g : frontier) {
      for (const auto& h : candidate_set(g)) {
        CanonicalKey key = canonical_form(h);
        if (seen.insert(key).second) {
          out.push_back(h);
          next.push_back(h);
        }
      }
    }
    frontier = std::move(next);
  }
  std::sort(out.begin(), out.end(),
            [](const WeightedGraph& a, const WeightedGraph& b) {
              return a.weights() < b.weights();
            });
  return out;
}

}  // namespace clusterlens
