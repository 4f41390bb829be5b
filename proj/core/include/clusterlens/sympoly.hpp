#ifndef CLUSTERLENS_SYMPOLY_HPP
#define CLUSTERLENS_SYMPOLY_HPP

#include <clusterlens/common.hpp>
#include <clusterlens/graph.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

namespace clusterlens {

// Exponent vectors are packed into a uint64, one byte per variable, X_1 in
// the most significant byte, so that integer comparison equals lexicographic
// monomial comparison with X_1 > X_2 > ... > X_d.
using PackedExp = std::uint64_t;

PackedExp pack_exponents(const std::vector<int>& e);
std::vector<int> unpack_exponents(PackedExp p, int d);
PackedExp sort_descending(PackedExp p, int d);
int packed_degree(PackedExp p);
int packed_nonzero_count(PackedExp p, int d);

// Sparse multivariate polynomial over Z in X_1..X_d.
class MultiPoly {
public:
  using TermMap = std::unordered_map<PackedExp, BigInt, U64Hash>;

  explicit MultiPoly(int d) : d_(d) {}
  static MultiPoly zero(int d) { return MultiPoly(d); }
  static MultiPoly constant(int d, const BigInt& c);

  int d() const { return d_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(PackedExp e, const BigInt& c);
  void add_term(const std::vector<int>& e, const BigInt& c);
  BigInt coeff(const std::vector<int>& e) const;

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly operator*(const MultiPoly& o) const;
  bool operator==(const MultiPoly& o) const;

  int total_degree() const;
  int max_var_degree() const;
  // Largest packed exponent (lex-greatest monomial); polynomial must be
  // nonzero.
  std::pair<PackedExp, BigInt> leading_term() const;

  bool is_symmetric() const;
  MultiPoly permuted(const std::vector<int>& perm) const;

private:
  int d_;
  TermMap terms_;
};

// Symmetric polynomial in the monomial-symmetric (partition) basis: keys are
// packed partitions (weakly decreasing exponent vectors).
class MBasisPoly {
public:
  using TermMap = std::unordered_map<PackedExp, BigInt, U64Hash>;

  MBasisPoly() = default;

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(PackedExp partition, const BigInt& c);
  BigInt coeff(PackedExp partition) const;

  MBasisPoly& operator+=(const MBasisPoly& o);
  MBasisPoly& operator-=(const MBasisPoly& o);
  bool operator==(const MBasisPoly& o) const;

  int degree() const;
  std::pair<PackedExp, BigInt> leading_term() const;  // lex-max partition
  BigInt content() const;

private:
  TermMap terms_;
};

// m-basis multiplication by the k-th elementary symmetric polynomial in
// nvars variables.
MBasisPoly m_mul_ek(const MBasisPoly& p, int k, int nvars);

// Exponent vector over A_0..A_{d-1} (slot i = exponent of A_i), or over
// e_1..e_d (slot i-1 = exponent of e_i) for the intermediate form.
using ExpVecA = std::array<std::uint16_t, 8>;

// Intermediate representation: polynomial in e_1..e_d.
using EPoly = std::map<ExpVecA, BigInt>;

// Polynomial in the signed elementary basis A_i = (-1)^{d-i} e_{d-i}, so
// that a monic x^d + a_{d-1}x^{d-1} + ... + a_0 evaluates it at A_i := a_i.
struct ElemPoly {
  int d = 0;
  std::map<ExpVecA, BigInt> terms;

  bool is_zero() const { return terms.empty(); }
  // X-degree of the corresponding symmetric polynomial; all terms must
  // agree (the numerators are homogeneous).
  int weighted_degree() const;
  BigInt content() const;
  Rational evaluate(const std::vector<Rational>& a) const;
  bool operator==(const ElemPoly& o) const { return d == o.d && terms == o.terms; }
  bool operator<(const ElemPoly& o) const;
};

// --- conversions ---------------------------------------------------------

// Reads a symmetric polynomial into the m-basis (coefficients at weakly
// decreasing exponent vectors).  Trusts symmetry; see MultiPoly::is_symmetric.
MBasisPoly x_to_m_symmetric(const MultiPoly& p);

// Full expansion of an m-basis polynomial (orbit sums of monomials).
MultiPoly m_to_x(const MBasisPoly& p, int d);

// Expresses a symmetric polynomial (m-basis) in e_1..e_t by recursion on
// the number of variables: split off the X_t = 0 slice, reduce it in t-1
// variables, subtract its evaluation and divide the remainder by e_t.
EPoly sym_to_e(MBasisPoly q, int t);

// Expands sum of c_b * prod e_i^{b_i} (i <= some bound <= nvars) back into
// the m-basis of nvars variables, sharing partial products between terms.
MBasisPoly eval_e(const EPoly& p, int nvars);

ElemPoly elem_from_epoly(const EPoly& e, int d);
EPoly epoly_from_elem(const ElemPoly& g);

// --- spec operations -----------------------------------------------------

// prod_{i<j} (X_i - X_j)^{2 expmap(i,j)}, expanded exactly.  Keys of expmap
// are 0-based vertex pairs (i < j); absent pairs mean exponent 0.
MultiPoly diff_product(int d, const std::map<std::pair<int, int>, int>& expmap);

// Numerator of J_G over the common denominator Delta^m, m = max weight:
// sum over the coset orbit of diff_product with exponents m - w(i,j).
// Returned together with pre_k = m.
std::pair<MultiPoly, int> numerator(const WeightedGraph& g);

// Same polynomial, produced in the m-basis without materializing the orbit:
// one labelled expansion is collected by sorted exponent vector, weighted by
// the stabilizer orders of the exponent vectors, and divided by |Stab(G)|.
std::pair<MBasisPoly, int> numerator_mbasis(const WeightedGraph& g);

// The discriminant prod_{i<j}(X_i - X_j)^2 of the monic generic polynomial.
MBasisPoly delta_mbasis(int d);
ElemPoly delta_elem(int d);

// Removes every exact Delta factor, then integer content, then fixes the
// sign so the lexicographically greatest monomial is positive.  Returns the
// reduced numerator and k = pre_k - (number of Delta divisions).
std::pair<MultiPoly, int> to_simplest_form(const MultiPoly& num, int pre_k, int d);

// Elementary-basis form of a symmetric polynomial.
ElemPoly to_elementary(const MultiPoly& num, int d);

// Exact division in Z[A_0..A_{d-1}]; nullopt-like empty optional when the
// divisor does not divide.
bool divide_exact(const ElemPoly& num, const ElemPoly& div, ElemPoly* quotient);

struct GraphInvariant {
  WeightedGraph graph;  // canonical representative
  CanonicalKey key;
  ElemPoly g;   // simplest-form numerator, J_G = g(A) / Delta^k
  int k = 0;    // discriminant exponent
  int num_degree = 0;
};

// Full pipeline: numerator -> elementary reduction (round-trip verified)
// -> simplest form.  The integer content of every auxiliary-graph numerator
// is 1 and the leading sign positive; both are asserted, since silently
// rescaling g would shift ord(g(a)).
GraphInvariant compute_graph_invariant(const WeightedGraph& g);

struct Family {
  int d = 0;
  std::vector<ElemPoly> members;  // distinct normalized members, sorted
  std::size_t t = 0;
};

// {Delta} plus the distinct normalized simplest-form numerators over all of
// enumerate_auxiliary(d).  invariants may be supplied (e.g. cache-backed);
// when empty they are computed directly.
Family family(int d, const std::vector<GraphInvariant>& precomputed = {});

}  // namespace clusterlens

#endif
