#ifndef CLUSTERLENS_ORACLE_HPP
#define CLUSTERLENS_ORACLE_HPP

#include <clusterlens/recover.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace clusterlens {

// Symmetric matrix of pairwise root-distance valuations ord(x_i - x_j);
// diagonal unused.  Valid matrices are ultrametric: in every triple the
// minimum entry is attained at least twice.
struct ValMatrix {
  int d = 0;
  std::vector<Rational> vals;  // upper triangle, pair_index order

  explicit ValMatrix(int d_) : d(d_), vals(pair_count(d_)) {}

  const Rational& at(int i, int j) const { return vals[pair_index(i, j, d)]; }
  void set(int i, int j, const Rational& v) { vals[pair_index(i, j, d)] = v; }
  bool is_ultrametric() const;

  bool operator==(const ValMatrix& o) const { return d == o.d && vals == o.vals; }

  // "d" on the first line, then the strict upper triangle as "i j num/den".
  std::string to_text() const;
  static ValMatrix from_text(const std::string& text);
};

// Explicit rational roots with a context, or a valuation matrix directly
// (for configurations rational roots cannot realize, e.g. half-integer
// depths).
struct RootSpec {
  std::optional<std::vector<Rational>> roots;
  std::optional<ValuedContext> ctx;
  std::optional<ValMatrix> matrix;

  ValMatrix resolve() const;
};

ValMatrix valmatrix_from_roots(const std::vector<Rational>& roots,
                               const ValuedContext& ctx);

// Ground-truth cluster picture by single-linkage merging of the pair list,
// independent of the threshold-component construction in assemble().
std::pair<ClusterPicture, DepthProfile> cluster_from_valmatrix(const ValMatrix& m);

// The n-th auxiliary graph of the matrix: edges where the entry is at least
// d_n, weight n+1-m for entries equal to d_m; n = 0 gives the empty graph.
WeightedGraph auxiliary_graph(const ValMatrix& m, int n);

// min over the coset orbit of ord of a single summand: -2 max_sigma of
// sum w_sigma(i,j) * M(i,j).  A lower bound for ord(J_{G,f}) on any f
// realizing M, with equality at G = G_n(f).
ExtRational tropical_ord(const WeightedGraph& g, const ValMatrix& m);

// --- dense univariate helpers (exact, coefficients low to high) ----------

std::vector<Rational> poly_mul(const std::vector<Rational>& a,
                               const std::vector<Rational>& b);
// Coefficients a_0..a_{d-1} of the monic polynomial with the given roots.
std::vector<Rational> monic_from_roots(const std::vector<Rational>& roots);
// f(x + c)
std::vector<Rational> poly_shift(const std::vector<Rational>& coeffs, const Rational& c);
// f(s * x)
std::vector<Rational> poly_scale_arg(const std::vector<Rational>& coeffs, const Rational& s);

MonicInput monic_input_from_roots(const std::vector<Rational>& roots,
                                  const ValuedContext& ctx);

struct SplitInstance {
  std::vector<Rational> roots;
  MonicInput f;
  ValMatrix m;

  SplitInstance() : m(1) {}
};

// Deterministic per seed: builds a random integer-depth ultrametric plan,
// realizes it with p-adic digit offsets, expands the monic polynomial and
// rejects draws whose realized matrix does not match the plan.
SplitInstance random_split_poly(int d, const ValuedContext& ctx, std::uint64_t seed);

// Every ultrametric matrix shape on d <= 4 points with entries in {0..3},
// one instance per isomorphism class, realized with rational roots.
std::vector<SplitInstance> structured_corpus(int d, const ValuedContext& ctx);

// Roots realizing an integer ultrametric matrix (requires every branching
// factor below p).
std::vector<Rational> realize_matrix(const ValMatrix& m, const ValuedContext& ctx);

}  // namespace clusterlens

#endif
