#include <clusterlens/oracle.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace clusterlens {

bool ValMatrix::is_ultrametric() const {
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b)
      for (int c = b + 1; c < d; ++c) {
        const Rational& ab = at(a, b);
        const Rational& bc = at(b, c);
        const Rational& ac = at(a, c);
        const Rational lo = std::min({ab, bc, ac});
        if ((ab == lo) + (bc == lo) + (ac == lo) < 2) return false;
      }
  return true;
}

std::string ValMatrix::to_text() const {
  std::ostringstream os;
  os << d << "\n";
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      os << (i + 1) << " " << (j + 1) << " " << rational_to_string(at(i, j)) << "\n";
  return os.str();
}

ValMatrix ValMatrix::from_text(const std::string& text) {
  std::istringstream is(text);
  int d = 0;
  if (!(is >> d) || d < 1 || d > kMaxVertices) {
    throw InputError("bad dimension in valuation matrix");
  }
  ValMatrix m(d);
  std::vector<bool> seen(pair_count(d), false);
  int i, j;
  std::string val;
  while (is >> i >> j >> val) {
    if (i < 1 || j < 1 || i > d || j > d || i == j) {
      throw InputError("bad pair in valuation matrix");
    }
    m.set(i - 1, j - 1, rational_from_string(val));
    seen[pair_index(i - 1, j - 1, d)] = true;
  }
  for (bool s : seen) {
    if (!s) throw InputError("valuation matrix is missing entries");
  }
  return m;
}

ValMatrix RootSpec::resolve() const {
  if (matrix) return *matrix;
  if (roots && ctx) return valmatrix_from_roots(*roots, *ctx);
  throw InputError("RootSpec has neither roots nor a matrix");
}

ValMatrix valmatrix_from_roots(const std::vector<Rational>& roots,
                               const ValuedContext& ctx) {
  const int d = static_cast<int>(roots.size());
  ValMatrix m(d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      if (roots[i] == roots[j]) throw InputError("duplicate roots");
      m.set(i, j, Rational(ord_p(roots[i] - roots[j], ctx).value()));
    }
  if (!m.is_ultrametric()) throw InternalError("root matrix not ultrametric");
  return m;
}

std::pair<ClusterPicture, DepthProfile> cluster_from_valmatrix(const ValMatrix& m) {
  if (!m.is_ultrametric()) throw InputError("matrix is not ultrametric");
  const int d = m.d;

  DepthProfile profile;
  {
    std::map<Rational, long long, std::greater<Rational>> counts;
    for (const auto& v : m.vals) ++counts[v];
    for (const auto& [v, c] : counts) {
      profile.depths.push_back(v);
      profile.mult.push_back(c);
    }
  }

  ClusterPicture pic;
  pic.d = d;
  if (d == 1) {
    pic.root.leaf_index = 1;
    return {pic, profile};
  }

  // single linkage: process pairs by descending valuation
  std::vector<int> order(pair_count(d));
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::pair<int, int>> pairs(pair_count(d));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) pairs[pair_index(i, j, d)] = {i, j};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return m.vals[a] > m.vals[b]; });

  std::vector<int> parent(d);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<ClusterNode> node_of(d);
  for (int v = 0; v < d; ++v) node_of[v].leaf_index = v + 1;

  std::size_t idx = 0;
  while (idx < order.size()) {
    const Rational level = m.vals[order[idx]];
    std::size_t hi = idx;
    while (hi < order.size() && m.vals[order[hi]] == level) ++hi;
    // merge the group; roots that change at this level form new clusters
    std::set<int> touched;
    for (std::size_t t = idx; t < hi; ++t) {
      touched.insert(find(pairs[order[t]].first));
      touched.insert(find(pairs[order[t]].second));
    }
    for (std::size_t t = idx; t < hi; ++t) {
      const int ra = find(pairs[order[t]].first);
      const int rb = find(pairs[order[t]].second);
      if (ra != rb) parent[ra] = rb;
    }
    std::map<int, std::vector<int>> groups;  // new root -> old roots
    for (int r : touched) groups[find(r)].push_back(r);
    for (auto& [root, olds] : groups) {
      if (olds.size() < 2) continue;
      ClusterNode merged;
      merged.depth = level;
      for (int old_root : olds) merged.children.push_back(std::move(node_of[old_root]));
      node_of[root] = std::move(merged);
    }
    idx = hi;
  }
  const int final_root = find(0);
  for (int v = 0; v < d; ++v) {
    if (find(v) != final_root) throw InternalError("cluster tree not connected");
  }
  pic.root = std::move(node_of[final_root]);
  pic.canonicalize();
  return {pic, profile};
}

WeightedGraph auxiliary_graph(const ValMatrix& m, int n) {
  std::vector<Rational> levels;
  {
    std::set<Rational, std::greater<Rational>> distinct(m.vals.begin(), m.vals.end());
    levels.assign(distinct.begin(), distinct.end());
  }
  const int k = static_cast<int>(levels.size());
  if (n < 0 || n > k) throw InputError("auxiliary graph index out of range");
  WeightedGraph g(m.d);
  if (n == 0) return g;
  const Rational& threshold = levels[n - 1];
  for (int i = 0; i < m.d; ++i)
    for (int j = i + 1; j < m.d; ++j) {
      const Rational& v = m.at(i, j);
      if (v < threshold) continue;
      const int level =
          static_cast<int>(std::lower_bound(levels.begin(), levels.end(), v,
                                            std::greater<Rational>()) -
                           levels.begin()) +
          1;  // v == levels[level-1]
      g.set_weight(i, j, n + 1 - level);
    }
  return g;
}

ExtRational tropical_ord(const WeightedGraph& g, const ValMatrix& m) {
  if (g.d() != m.d) throw InternalError("tropical_ord: dimension mismatch");
  bool first = true;
  Rational best = 0;
  for (const auto& wmap : cosets(g)) {
    Rational s = 0;
    for (int idx = 0; idx < pair_count(g.d()); ++idx) {
      if (wmap[idx] != 0) s += Rational(static_cast<int>(wmap[idx])) * m.vals[idx];
    }
    if (first || s > best) {
      best = s;
      first = false;
    }
  }
  return ExtRational(Rational(-2) * best);
}

std::vector<Rational> poly_mul(const std::vector<Rational>& a,
                               const std::vector<Rational>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<Rational> out(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::vector<Rational> monic_from_roots(const std::vector<Rational>& roots) {
  std::vector<Rational> coeffs{Rational(1)};  // constant polynomial 1
  for (const auto& r : roots) {
    std::vector<Rational> next(coeffs.size() + 1, Rational(0));
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      next[i + 1] += coeffs[i];
      next[i] -= r * coeffs[i];
    }
    coeffs = std::move(next);
  }
  coeffs.pop_back();  // drop the leading 1
  return coeffs;      // a_0..a_{d-1}
}

std::vector<Rational> poly_shift(const std::vector<Rational>& coeffs, const Rational& c) {
  // Horner-style: f(x+c) built from the top coefficient down.
  std::vector<Rational> out{};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    // out = out * (x + c) + coeff
    std::vector<Rational> next(out.size() + 1, Rational(0));
    for (std::size_t i = 0; i < out.size(); ++i) {
      next[i + 1] += out[i];
      next[i] += c * out[i];
    }
    if (next.empty()) next.push_back(Rational(0));
    next[0] += *it;
    out = std::move(next);
  }
  return out;
}

std::vector<Rational> poly_scale_arg(const std::vector<Rational>& coeffs, const Rational& s) {
  std::vector<Rational> out(coeffs.size());
  Rational power = 1;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    out[i] = coeffs[i] * power;
    power *= s;
  }
  return out;
}

MonicInput monic_input_from_roots(const std::vector<Rational>& roots,
                                  const ValuedContext& ctx) {
  return MonicInput::make(ctx, monic_from_roots(roots));
}

namespace {

struct PlanNode {
  Rational depth;  // internal only
  std::vector<PlanNode> children;
  int leaf = -1;

  bool is_leaf() const { return leaf >= 0; }
};

std::uint64_t rng_range(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

// Random strictly-nested plan over `count` leaves with integer depths.
PlanNode random_plan(int count, long long min_depth, int max_branch,
                     std::mt19937_64& rng, int* next_leaf) {
  PlanNode node;
  if (count == 1) {
    node.leaf = (*next_leaf)++;
    return node;
  }
  node.depth = Rational(min_depth + static_cast<long long>(rng_range(rng, 2)));
  const int b = 2 + static_cast<int>(rng_range(
                        rng, static_cast<std::uint64_t>(
                                 std::min(count, max_branch) - 1)));
  std::vector<int> sizes(b, 1);
  for (int extra = 0; extra < count - b; ++extra) {
    ++sizes[rng_range(rng, static_cast<std::uint64_t>(b))];
  }
  const long long child_min =
      boost::multiprecision::numerator(node.depth).convert_to<long long>() + 1;
  for (int i = 0; i < b; ++i) {
    node.children.push_back(random_plan(sizes[i], child_min, max_branch, rng, next_leaf));
  }
  return node;
}

void plan_matrix_fill(const PlanNode& node, ValMatrix* m) {
  // pairwise valuation = depth of the least common ancestor
  std::vector<std::vector<int>> leaf_sets;
  for (const auto& c : node.children) {
    std::vector<int> leaves;
    std::function<void(const PlanNode&)> collect = [&](const PlanNode& x) {
      if (x.is_leaf()) {
        leaves.push_back(x.leaf);
        return;
      }
      for (const auto& y : x.children) collect(y);
    };
    collect(c);
    leaf_sets.push_back(std::move(leaves));
  }
  for (std::size_t a = 0; a < leaf_sets.size(); ++a)
    for (std::size_t b = a + 1; b < leaf_sets.size(); ++b)
      for (int i : leaf_sets[a])
        for (int j : leaf_sets[b]) m->set(std::min(i, j), std::max(i, j), node.depth);
  for (const auto& c : node.children) {
    if (!c.is_leaf()) plan_matrix_fill(c, m);
  }
}

void plan_realize(const PlanNode& node, const Rational& base, const BigInt& p,
                  std::vector<Rational>* roots) {
  if (node.is_leaf()) {
    (*roots)[node.leaf] = base;
    return;
  }
  // offset children by distinct digits times p^depth
  const long long t =
      boost::multiprecision::numerator(node.depth).convert_to<long long>();
  Rational pt;
  if (t >= 0) {
    pt = Rational(boost::multiprecision::pow(p, static_cast<unsigned>(t)));
  } else {
    pt = Rational(BigInt(1), boost::multiprecision::pow(p, static_cast<unsigned>(-t)));
  }
  for (std::size_t c = 0; c < node.children.size(); ++c) {
    plan_realize(node.children[c], base + Rational(static_cast<long long>(c)) * pt, p,
                 roots);
  }
}

}  // namespace

std::vector<Rational> realize_matrix(const ValMatrix& m, const ValuedContext& ctx) {
  const int d = m.d;
  if (d == 1) return {Rational(0)};
  if (!m.is_ultrametric()) throw InputError("matrix is not ultrametric");
  // Build the nested plan from the matrix by descending thresholds.
  std::function<PlanNode(std::vector<int>)> build = [&](std::vector<int> verts) -> PlanNode {
    if (verts.size() == 1) {
      PlanNode leaf;
      leaf.leaf = verts[0];
      return leaf;
    }
    Rational depth = m.at(verts[0], verts[1]);
    for (std::size_t i = 0; i < verts.size(); ++i)
      for (std::size_t j = i + 1; j < verts.size(); ++j)
        depth = std::min(depth, m.at(verts[i], verts[j]));
    if (boost::multiprecision::denominator(depth) != 1) {
      throw InputError("matrix has non-integer entries; not realizable over Q");
    }
    // components of the > depth graph within verts
    std::vector<int> parent(verts.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (std::size_t i = 0; i < verts.size(); ++i)
      for (std::size_t j = i + 1; j < verts.size(); ++j)
        if (m.at(verts[i], verts[j]) > depth) parent[find(static_cast<int>(i))] = find(static_cast<int>(j));
    std::map<int, std::vector<int>> comps;
    for (std::size_t i = 0; i < verts.size(); ++i)
      comps[find(static_cast<int>(i))].push_back(verts[i]);
    PlanNode node;
    node.depth = depth;
    if (BigInt(static_cast<long long>(comps.size())) > ctx.p) {
      throw InputError("branching exceeds residue field size");
    }
    for (auto& [r, group] : comps) node.children.push_back(build(group));
    if (node.children.size() < 2) throw InternalError("realize: no split at level");
    return node;
  };
  std::vector<int> all(d);
  std::iota(all.begin(), all.end(), 0);
  PlanNode plan = build(all);
  std::vector<Rational> roots(d);
  plan_realize(plan, Rational(0), ctx.p, &roots);
  const ValMatrix check = valmatrix_from_roots(roots, ctx);
  if (!(check == m)) throw InternalError("realized roots do not match the matrix");
  return roots;
}

SplitInstance random_split_poly(int d, const ValuedContext& ctx, std::uint64_t seed) {
  if (d < 2) throw InputError("random_split_poly needs d >= 2");
  std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(d)));
  const long long pv = ctx.p.convert_to<long long>();
  const int max_branch = static_cast<int>(std::min<long long>(pv - 1, d));
  for (int attempt = 0; attempt < 64; ++attempt) {
    int next_leaf = 0;
    const long long base_depth = static_cast<long long>(rng_range(rng, 3)) - 1;
    PlanNode plan = random_plan(d, base_depth, std::max(2, max_branch), rng, &next_leaf);
    ValMatrix planned(d);
    plan_matrix_fill(plan, &planned);
    std::vector<Rational> roots(d);
    plan_realize(plan, Rational(0), ctx.p, &roots);
    const ValMatrix realized = valmatrix_from_roots(roots, ctx);
    if (!(realized == planned)) continue;  // accidental extra coincidence
    SplitInstance inst;
    inst.roots = roots;
    inst.f = monic_input_from_roots(roots, ctx);
    inst.m = realized;
    return inst;
  }
  throw InternalError("random_split_poly: no acceptable draw");
}

namespace {

ValMatrix canonical_matrix(const ValMatrix& m) {
  std::vector<int> perm(m.d);
  std::iota(perm.begin(), perm.end(), 0);
  ValMatrix best = m;
  std::vector<Rational> cur(pair_count(m.d));
  do {
    for (int i = 0; i < m.d; ++i)
      for (int j = i + 1; j < m.d; ++j)
        cur[pair_index(i, j, m.d)] = m.at(perm[i], perm[j]);
    if (cur < best.vals) best.vals = cur;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

std::vector<SplitInstance> structured_corpus(int d, const ValuedContext& ctx) {
  if (d < 2 || d > 4) throw ResourceError("structured corpus covers 2 <= d <= 4");
  if (ctx.p < 5) throw InputError("structured corpus needs p >= 5");
  const int np = pair_count(d);
  std::set<std::vector<Rational>> seen;
  std::vector<SplitInstance> out;
  std::vector<int> entry(np, 0);
  while (true) {
    ValMatrix m(d);
    for (int i = 0; i < np; ++i) m.vals[i] = Rational(entry[i]);
    if (m.is_ultrametric()) {
      const ValMatrix canon = canonical_matrix(m);
      if (seen.insert(canon.vals).second) {
        SplitInstance inst;
        inst.roots = realize_matrix(canon, ctx);
        inst.f = monic_input_from_roots(inst.roots, ctx);
        inst.m = canon;
        out.push_back(std::move(inst));
      }
    }
    int pos = np - 1;
    while (pos >= 0 && entry[pos] == 3) {
      entry[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++entry[pos];
  }
  return out;
}

}  // namespace clusterlens
