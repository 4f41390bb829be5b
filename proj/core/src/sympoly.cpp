#include <clusterlens/sympoly.hpp>

#include <boost/multiprecision/integer.hpp>

#include <algorithm>
#include <functional>
#include <mutex>

namespace clusterlens {

namespace {

constexpr int kMaxPackedExp = 255;

BigInt binomial_big(int n, int k) {
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;
  }
  return r;
}

std::uint64_t small_binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
  return r;
}

}  // namespace

PackedExp pack_exponents(const std::vector<int>& e) {
  if (e.size() > 8) throw InternalError("too many variables to pack");
  PackedExp p = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] < 0 || e[i] > kMaxPackedExp) {
      throw ResourceError("exponent " + std::to_string(e[i]) + " not packable");
    }
    p |= static_cast<PackedExp>(e[i]) << (8 * (7 - i));
  }
  return p;
}

std::vector<int> unpack_exponents(PackedExp p, int d) {
  std::vector<int> e(d);
  for (int i = 0; i < d; ++i) e[i] = static_cast<int>((p >> (8 * (7 - i))) & 0xff);
  return e;
}

PackedExp sort_descending(PackedExp p, int d) {
  std::array<std::uint8_t, 8> b{};
  for (int i = 0; i < d; ++i) b[i] = static_cast<std::uint8_t>((p >> (8 * (7 - i))) & 0xff);
  std::sort(b.begin(), b.begin() + d, std::greater<>());
  PackedExp out = 0;
  for (int i = 0; i < d; ++i) out |= static_cast<PackedExp>(b[i]) << (8 * (7 - i));
  return out;
}

int packed_degree(PackedExp p) {
  int s = 0;
  for (int i = 0; i < 8; ++i) s += static_cast<int>((p >> (8 * i)) & 0xff);
  return s;
}

int packed_nonzero_count(PackedExp p, int d) {
  int n = 0;
  for (int i = 0; i < d; ++i) n += ((p >> (8 * (7 - i))) & 0xff) != 0;
  return n;
}

// --- MultiPoly -----------------------------------------------------------

MultiPoly MultiPoly::constant(int d, const BigInt& c) {
  MultiPoly p(d);
  if (c != 0) p.terms_.emplace(0, c);
  return p;
}

void MultiPoly::add_term(PackedExp e, const BigInt& c) {
  if (c == 0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void MultiPoly::add_term(const std::vector<int>& e, const BigInt& c) {
  if (static_cast<int>(e.size()) != d_) throw InternalError("exponent arity mismatch");
  add_term(pack_exponents(e), c);
}

BigInt MultiPoly::coeff(const std::vector<int>& e) const {
  auto it = terms_.find(pack_exponents(e));
  return it == terms_.end() ? BigInt(0) : it->second;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

int MultiPoly::max_var_degree() const {
  int m = 0;
  for (const auto& [e, c] : terms_) {
    for (int i = 0; i < d_; ++i) {
      m = std::max(m, static_cast<int>((e >> (8 * (7 - i))) & 0xff));
    }
  }
  return m;
}

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
  if (d_ != o.d_) throw InternalError("variable count mismatch");
  if (max_var_degree() + o.max_var_degree() > kMaxPackedExp) {
    throw ResourceError("product exponents exceed packed range");
  }
  const MultiPoly& small = size() <= o.size() ? *this : o;
  const MultiPoly& large = size() <= o.size() ? o : *this;
  MultiPoly out(d_);
  out.terms_.reserve(large.size() * 2);
  for (const auto& [ea, ca] : small.terms_) {
    for (const auto& [eb, cb] : large.terms_) {
      // carry-free by the max_var_degree guard above
      const PackedExp e = ea + eb;
      auto it = out.terms_.find(e);
      if (it == out.terms_.end()) {
        out.terms_.emplace(e, ca * cb);
      } else {
        it->second += ca * cb;
      }
    }
  }
  for (auto it = out.terms_.begin(); it != out.terms_.end();) {
    if (it->second == 0) {
      it = out.terms_.erase(it);
    } else {
      ++it;
    }
  }
  return out;
}

bool MultiPoly::operator==(const MultiPoly& o) const {
  return d_ == o.d_ && terms_ == o.terms_;
}

int MultiPoly::total_degree() const {
  int m = 0;
  for (const auto& [e, c] : terms_) m = std::max(m, packed_degree(e));
  return m;
}

std::pair<PackedExp, BigInt> MultiPoly::leading_term() const {
  if (terms_.empty()) throw InternalError("leading_term of zero polynomial");
  auto best = terms_.begin();
  for (auto it = terms_.begin(); it != terms_.end(); ++it) {
    if (it->first > best->first) best = it;
  }
  return {best->first, best->second};
}

bool MultiPoly::is_symmetric() const {
  std::unordered_map<PackedExp, std::uint64_t, U64Hash> orbit_sizes;
  for (const auto& [e, c] : terms_) {
    const PackedExp rep = sort_descending(e, d_);
    auto it = terms_.find(rep);
    if (it == terms_.end() || it->second != c) return false;
    ++orbit_sizes[rep];
  }
  for (const auto& [rep, seen] : orbit_sizes) {
    const auto exps = unpack_exponents(rep, d_);
    std::uint64_t orbit = factorial(d_);
    int run = 1;
    for (int i = 1; i <= d_; ++i) {
      if (i < d_ && exps[i] == exps[i - 1]) {
        ++run;
      } else {
        orbit /= factorial(run);
        run = 1;
      }
    }
    if (orbit != seen) return false;
  }
  return true;
}

MultiPoly MultiPoly::permuted(const std::vector<int>& perm) const {
  MultiPoly out(d_);
  for (const auto& [e, c] : terms_) {
    const auto exps = unpack_exponents(e, d_);
    std::vector<int> moved(d_, 0);
    for (int i = 0; i < d_; ++i) moved[perm[i]] = exps[i];
    out.add_term(moved, c);
  }
  return out;
}

// --- MBasisPoly ----------------------------------------------------------

void MBasisPoly::add_term(PackedExp partition, const BigInt& c) {
  if (c == 0) return;
  auto it = terms_.find(partition);
  if (it == terms_.end()) {
    terms_.emplace(partition, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

BigInt MBasisPoly::coeff(PackedExp partition) const {
  auto it = terms_.find(partition);
  return it == terms_.end() ? BigInt(0) : it->second;
}

MBasisPoly& MBasisPoly::operator+=(const MBasisPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MBasisPoly& MBasisPoly::operator-=(const MBasisPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

bool MBasisPoly::operator==(const MBasisPoly& o) const { return terms_ == o.terms_; }

int MBasisPoly::degree() const {
  int m = 0;
  for (const auto& [e, c] : terms_) m = std::max(m, packed_degree(e));
  return m;
}

std::pair<PackedExp, BigInt> MBasisPoly::leading_term() const {
  if (terms_.empty()) throw InternalError("leading_term of zero polynomial");
  auto best = terms_.begin();
  for (auto it = terms_.begin(); it != terms_.end(); ++it) {
    if (it->first > best->first) best = it;
  }
  return {best->first, best->second};
}

BigInt MBasisPoly::content() const {
  BigInt g = 0;
  for (const auto& [e, c] : terms_) {
    g = boost::multiprecision::gcd(g, c);
    if (g == 1) break;
  }
  return g;
}

MBasisPoly m_mul_ek(const MBasisPoly& p, int k, int nvars) {
  if (k < 1 || k > nvars) throw InternalError("m_mul_ek: bad k");
  MBasisPoly out;
  std::array<int, 8> exps{};
  for (const auto& [key, c] : p.terms()) {
    for (int i = 0; i < nvars; ++i) {
      exps[i] = static_cast<int>((key >> (8 * (7 - i))) & 0xff);
    }
    // runs of equal values, descending (zeros included)
    std::vector<std::pair<int, int>> runs;  // (value, count)
    for (int i = 0; i < nvars;) {
      int j = i;
      while (j < nvars && exps[j] == exps[i]) ++j;
      runs.emplace_back(exps[i], j - i);
      i = j;
    }
    const int nr = static_cast<int>(runs.size());
    std::vector<int> raise(nr, 0);
    // all ways to raise j_r entries of run r, sum = k
    std::function<void(int, int)> rec = [&](int r, int left) {
      if (r == nr) {
        if (left != 0) return;
        // resulting partition and multiplicity
        std::array<int, 16> vals{};
        int nv = 0;
        for (int q = 0; q < nr; ++q) {
          for (int t = 0; t < raise[q]; ++t) vals[nv++] = runs[q].first + 1;
          for (int t = 0; t < runs[q].second - raise[q]; ++t) vals[nv++] = runs[q].first;
        }
        std::sort(vals.begin(), vals.begin() + nv, std::greater<>());
        std::uint64_t mult = 1;
        for (int q = 0; q < nr; ++q) {
          if (raise[q] == 0) continue;
          const int target = runs[q].first + 1;
          int count = 0;
          for (int t = 0; t < nv; ++t) count += (vals[t] == target);
          mult *= small_binomial(count, raise[q]);
        }
        PackedExp key2 = 0;
        for (int t = 0; t < nv; ++t) {
          if (vals[t] > kMaxPackedExp) throw ResourceError("partition part overflow");
          key2 |= static_cast<PackedExp>(vals[t]) << (8 * (7 - t));
        }
        out.add_term(key2, c * mult);
        return;
      }
      const int cap = std::min(left, runs[r].second);
      for (int j = 0; j <= cap; ++j) {
        raise[r] = j;
        rec(r + 1, left - j);
      }
      raise[r] = 0;
    };
    rec(0, k);
  }
  return out;
}

// --- conversions ---------------------------------------------------------

MBasisPoly x_to_m_symmetric(const MultiPoly& p) {
  MBasisPoly out;
  for (const auto& [e, c] : p.terms()) {
    if (e == sort_descending(e, p.d())) out.add_term(e, c);
  }
  return out;
}

MultiPoly m_to_x(const MBasisPoly& p, int d) {
  MultiPoly out(d);
  for (const auto& [key, c] : p.terms()) {
    auto exps = unpack_exponents(key, d);
    std::sort(exps.begin(), exps.end());
    do {
      out.add_term(exps, c);
    } while (std::next_permutation(exps.begin(), exps.end()));
  }
  return out;
}

MBasisPoly eval_e(const EPoly& p, int nvars) {
  std::vector<std::pair<ExpVecA, BigInt>> terms(p.begin(), p.end());
  // group by high elementary index first, exponents ascending
  std::sort(terms.begin(), terms.end(),
            [&](const auto& a, const auto& b) {
              for (int i = nvars - 1; i >= 0; --i) {
                if (a.first[i] != b.first[i]) return a.first[i] < b.first[i];
              }
              return false;
            });
  MBasisPoly acc;
  std::function<void(std::size_t, std::size_t, int, const MBasisPoly&)> go =
      [&](std::size_t lo, std::size_t hi, int var, const MBasisPoly& partial) {
        if (var == 0) {
          for (std::size_t t = lo; t < hi; ++t) {
            for (const auto& [key, c] : partial.terms()) {
              acc.add_term(key, c * terms[t].second);
            }
          }
          return;
        }
        std::size_t i = lo;
        MBasisPoly cur = partial;
        int cur_exp = 0;
        while (i < hi) {
          std::size_t j = i;
          const int e = terms[i].first[var - 1];
          while (j < hi && terms[j].first[var - 1] == e) ++j;
          for (; cur_exp < e; ++cur_exp) cur = m_mul_ek(cur, var, nvars);
          go(i, j, var - 1, cur);
          i = j;
        }
      };
  if (!terms.empty()) {
    MBasisPoly one;
    one.add_term(0, 1);
    go(0, terms.size(), nvars, one);
  }
  return acc;
}

EPoly sym_to_e(MBasisPoly q, int t) {
  EPoly out;
  if (q.is_zero()) return out;
  if (q.degree() > kMaxPackedExp) {
    throw ResourceError("degree too large for packed partitions");
  }
  if (t == 0) {
    for (const auto& [key, c] : q.terms()) {
      if (key != 0) throw InternalError("sym_to_e: nonconstant remainder in 0 variables");
      ExpVecA b{};
      out[b] = c;
    }
    return out;
  }
  int j = 0;
  while (!q.is_zero()) {
    MBasisPoly q0;
    for (const auto& [key, c] : q.terms()) {
      if (packed_nonzero_count(key, 8) <= t - 1) q0.add_term(key, c);
    }
    EPoly r = sym_to_e(q0, t - 1);
    for (const auto& [b, c] : r) {
      ExpVecA b2 = b;
      b2[t - 1] = static_cast<std::uint16_t>(j);
      out[b2] = c;
    }
    MBasisPoly s = std::move(q);
    s -= eval_e(r, t);
    MBasisPoly next;
    for (const auto& [key, c] : s.terms()) {
      if (packed_nonzero_count(key, 8) != t) {
        throw InternalError("sym_to_e: remainder not divisible by e_t");
      }
      PackedExp shifted = key;
      for (int i = 0; i < t; ++i) shifted -= PackedExp(1) << (8 * (7 - i));
      next.add_term(shifted, c);
    }
    q = std::move(next);
    ++j;
  }
  return out;
}

ElemPoly elem_from_epoly(const EPoly& e, int d) {
  ElemPoly g;
  g.d = d;
  for (const auto& [b, c] : e) {
    ExpVecA a{};
    long long weighted = 0;
    for (int i = 1; i <= d; ++i) {
      a[d - i] = b[i - 1];
      weighted += static_cast<long long>(i) * b[i - 1];
    }
    for (int i = d; i < 8; ++i) {
      if (b[i] != 0) throw InternalError("e-exponent beyond variable count");
    }
    const BigInt coeff = (weighted % 2 == 0) ? c : -c;
    if (coeff != 0) g.terms[a] = coeff;
  }
  return g;
}

EPoly epoly_from_elem(const ElemPoly& g) {
  EPoly e;
  const int d = g.d;
  for (const auto& [a, c] : g.terms) {
    ExpVecA b{};
    long long weighted = 0;
    for (int i = 1; i <= d; ++i) {
      b[i - 1] = a[d - i];
      weighted += static_cast<long long>(i) * b[i - 1];
    }
    const BigInt coeff = (weighted % 2 == 0) ? c : -c;
    if (coeff != 0) e[b] = coeff;
  }
  return e;
}

int ElemPoly::weighted_degree() const {
  if (terms.empty()) return 0;
  long long deg = -1;
  for (const auto& [a, c] : terms) {
    long long w = 0;
    for (int i = 0; i < d; ++i) w += static_cast<long long>(d - i) * a[i];
    if (deg < 0) deg = w;
    if (w != deg) throw InternalError("numerator not homogeneous");
  }
  return static_cast<int>(deg);
}

BigInt ElemPoly::content() const {
  BigInt g = 0;
  for (const auto& [e, c] : terms) {
    g = boost::multiprecision::gcd(g, c);
    if (g == 1) break;
  }
  return g;
}

Rational ElemPoly::evaluate(const std::vector<Rational>& a) const {
  if (static_cast<int>(a.size()) != d) throw InternalError("evaluate: arity mismatch");
  std::vector<std::map<int, Rational>> pows(d);
  auto power = [&](int var, int e) -> const Rational& {
    auto& cache = pows[var];
    auto it = cache.find(e);
    if (it != cache.end()) return it->second;
    Rational r = 1;
    if (e > 0) {
      const BigInt pn = boost::multiprecision::pow(
          boost::multiprecision::numerator(a[var]), static_cast<unsigned>(e));
      const BigInt pd = boost::multiprecision::pow(
          boost::multiprecision::denominator(a[var]), static_cast<unsigned>(e));
      r = Rational(pn, pd);
    }
    return cache.emplace(e, std::move(r)).first->second;
  };
  Rational total = 0;
  for (const auto& [exp, c] : terms) {
    Rational term(c);
    for (int i = 0; i < d; ++i) {
      if (exp[i] != 0) term *= power(i, exp[i]);
    }
    total += term;
  }
  return total;
}

bool ElemPoly::operator<(const ElemPoly& o) const {
  if (d != o.d) return d < o.d;
  return std::lexicographical_compare(
      terms.begin(), terms.end(), o.terms.begin(), o.terms.end(),
      [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second < b.second;
      });
}

// --- spec operations -----------------------------------------------------

MultiPoly diff_product(int d, const std::map<std::pair<int, int>, int>& expmap) {
  std::vector<int> var_total(d, 0);
  for (const auto& [pr, c] : expmap) {
    if (c < 0) throw InternalError("negative exponent");
    if (pr.first == pr.second || pr.first < 0 || pr.second >= d || pr.first >= d ||
        pr.second < 0) {
      throw InternalError("bad pair in exponent map");
    }
    var_total[pr.first] += 2 * c;
    var_total[pr.second] += 2 * c;
  }
  for (int v : var_total) {
    if (v > kMaxPackedExp) throw ResourceError("diff_product degree too large");
  }

  std::vector<MultiPoly> factors;
  for (const auto& [pr, c] : expmap) {
    if (c == 0) continue;
    const int e = 2 * c;
    MultiPoly f(d);
    for (int t = 0; t <= e; ++t) {
      std::vector<int> exps(d, 0);
      exps[pr.first] = e - t;
      exps[pr.second] = t;
      const BigInt b = binomial_big(e, t);
      f.add_term(exps, (t % 2 == 0) ? b : -b);
    }
    factors.push_back(std::move(f));
  }
  MultiPoly acc = MultiPoly::constant(d, 1);
  std::sort(factors.begin(), factors.end(),
            [](const MultiPoly& a, const MultiPoly& b) { return a.size() < b.size(); });
  for (const auto& f : factors) acc = acc * f;
  return acc;
}

std::pair<MultiPoly, int> numerator(const WeightedGraph& g) {
  if (!is_auxiliary(g)) throw InternalError("numerator: graph not auxiliary");
  const int d = g.d();
  const int m = g.max_weight();
  MultiPoly sum(d);
  for (const auto& wmap : cosets(g)) {
    std::map<std::pair<int, int>, int> expmap;
    int idx = 0;
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) {
        const int c = m - wmap[idx++];
        if (c > 0) expmap[{i, j}] = c;
      }
    sum += diff_product(d, expmap);
  }
  return {std::move(sum), m};
}

std::pair<MBasisPoly, int> numerator_mbasis(const WeightedGraph& g) {
  if (!is_auxiliary(g)) throw InternalError("numerator_mbasis: graph not auxiliary");
  const int d = g.d();
  const int m = g.max_weight();

  std::map<std::pair<int, int>, int> expmap;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const int c = m - g.weight(i, j);
      if (c > 0) expmap[{i, j}] = c;
    }
  const MultiPoly base = diff_product(d, expmap);

  const std::uint64_t orbit = cosets(g).size();
  const std::uint64_t stab = factorial(d) / orbit;

  // sum of all d! relabelings, collected at sorted representatives
  MBasisPoly collected;
  for (const auto& [e, c] : base.terms()) {
    collected.add_term(sort_descending(e, d), c);
  }
  MBasisPoly out;
  for (const auto& [key, c] : collected.terms()) {
    const auto exps = unpack_exponents(key, d);
    BigInt mult = 1;
    int run = 1;
    for (int i = 1; i <= d; ++i) {
      if (i < d && exps[i] == exps[i - 1]) {
        ++run;
      } else {
        mult *= factorial(run);
        run = 1;
      }
    }
    BigInt v = c * mult;
    if (v % stab != 0) throw InternalError("orbit collection not divisible by |Stab|");
    out.add_term(key, v / stab);
  }
  return {std::move(out), m};
}

MBasisPoly delta_mbasis(int d) {
  std::map<std::pair<int, int>, int> expmap;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) expmap[{i, j}] = 1;
  return x_to_m_symmetric(diff_product(d, expmap));
}

ElemPoly delta_elem(int d) {
  static std::mutex mu;
  static std::map<int, ElemPoly> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(d);
  if (it != cache.end()) return it->second;
  MBasisPoly m = delta_mbasis(d);
  ElemPoly g = elem_from_epoly(sym_to_e(m, d), d);
  if (!(eval_e(epoly_from_elem(g), d) == m)) {
    throw InternalError("discriminant round-trip failed");
  }
  if (g.content() != 1) throw InternalError("discriminant not primitive");
  cache.emplace(d, g);
  return g;
}

bool divide_exact(const ElemPoly& num, const ElemPoly& div, ElemPoly* quotient) {
  if (div.is_zero()) throw InternalError("division by zero polynomial");
  if (num.is_zero()) return false;
  const auto& [dl, dcoeff] = *div.terms.rbegin();
  std::map<ExpVecA, Rational> r;
  for (const auto& [e, c] : num.terms) r.emplace(e, Rational(c));
  std::map<ExpVecA, Rational> q;
  const Rational dc(dcoeff);
  while (!r.empty()) {
    const auto& [rl, rc] = *r.rbegin();
    ExpVecA t{};
    for (int i = 0; i < 8; ++i) {
      if (rl[i] < dl[i]) return false;
      t[i] = static_cast<std::uint16_t>(rl[i] - dl[i]);
    }
    const Rational tc = rc / dc;
    q.emplace(t, tc);
    for (const auto& [de, dcf] : div.terms) {
      ExpVecA e{};
      for (int i = 0; i < 8; ++i) e[i] = static_cast<std::uint16_t>(de[i] + t[i]);
      auto it = r.find(e);
      Rational delta = tc * Rational(dcf);
      if (it == r.end()) {
        if (delta != 0) r.emplace(e, -delta);
      } else {
        it->second -= delta;
        if (it->second == 0) r.erase(it);
      }
    }
  }
  if (quotient != nullptr) {
    ElemPoly out;
    out.d = num.d;
    for (const auto& [e, c] : q) {
      if (boost::multiprecision::denominator(c) != 1) {
        throw InternalError("exact quotient not integral");
      }
      out.terms.emplace(e, BigInt(boost::multiprecision::numerator(c)));
    }
    *quotient = std::move(out);
  }
  return true;
}

namespace {

void normalize_content_and_sign(ElemPoly* g) {
  if (g->is_zero()) return;
  const BigInt c = g->content();
  const bool neg = g->terms.rbegin()->second < 0;
  for (auto& [e, v] : g->terms) {
    v /= c;
    if (neg) v = -v;
  }
}

}  // namespace

std::pair<MultiPoly, int> to_simplest_form(const MultiPoly& num, int pre_k, int d) {
  if (num.is_zero()) return {num, pre_k};
  if (!num.is_symmetric()) throw InternalError("to_simplest_form: input not symmetric");
  ElemPoly g = to_elementary(num, d);
  const ElemPoly delta = delta_elem(d);
  int k = pre_k;
  ElemPoly quo;
  while (divide_exact(g, delta, &quo)) {
    g = quo;
    --k;
  }
  const BigInt content = g.content();
  MBasisPoly m = eval_e(epoly_from_elem(g), d);
  const bool neg = m.leading_term().second < 0;
  if (content != 1 || neg) {
    MBasisPoly scaled;
    for (const auto& [key, c] : m.terms()) {
      scaled.add_term(key, neg ? -c / content : c / content);
    }
    m = std::move(scaled);
  }
  return {m_to_x(m, d), k};
}

ElemPoly to_elementary(const MultiPoly& num, int d) {
  if (!num.is_symmetric()) throw InternalError("to_elementary: input not symmetric");
  MBasisPoly m = x_to_m_symmetric(num);
  EPoly e = sym_to_e(m, d);
  if (!(eval_e(e, d) == m)) {
    throw InternalError("to_elementary: substitution round-trip failed");
  }
  return elem_from_epoly(e, d);
}

GraphInvariant compute_graph_invariant(const WeightedGraph& g) {
  GraphInvariant inv;
  inv.graph = canonical_graph(g);
  inv.key = canonical_form(g);
  const int d = g.d();

  auto [num_m, pre_k] = numerator_mbasis(inv.graph);
  if (num_m.is_zero()) throw InternalError("numerator identically zero");
  if (num_m.leading_term().second < 0) {
    throw InternalError("numerator leading coefficient negative");
  }

  EPoly e = sym_to_e(num_m, d);
  if (!(eval_e(e, d) == num_m)) {
    throw InternalError("invariant round-trip verification failed");
  }
  ElemPoly gg = elem_from_epoly(e, d);

  const ElemPoly delta = delta_elem(d);
  int k = pre_k;
  ElemPoly quo;
  while (divide_exact(gg, delta, &quo)) {
    gg = quo;
    --k;
  }
  if (k < 0) throw InternalError("negative discriminant exponent");
  // Stripping a nontrivial content would shift ord(g(a)); it never occurs
  // for auxiliary-graph numerators and is asserted rather than applied.
  if (gg.content() != 1) {
    throw InternalError("auxiliary numerator with nontrivial content: " +
                        to_canonical_string(g));
  }
  inv.g = std::move(gg);
  inv.k = k;
  inv.num_degree = inv.g.weighted_degree();
  return inv;
}

Family family(int d, const std::vector<GraphInvariant>& precomputed) {
  const auto graphs = enumerate_auxiliary(d);
  std::map<CanonicalKey, const GraphInvariant*> by_key;
  for (const auto& inv : precomputed) by_key.emplace(inv.key, &inv);

  Family fam;
  fam.d = d;
  std::vector<ElemPoly> members;
  ElemPoly delta = delta_elem(d);
  normalize_content_and_sign(&delta);
  members.push_back(std::move(delta));
  for (const auto& g : graphs) {
    const CanonicalKey key = canonical_form(g);
    ElemPoly gg;
    auto it = by_key.find(key);
    if (it != by_key.end()) {
      gg = it->second->g;
    } else {
      gg = compute_graph_invariant(g).g;
    }
    normalize_content_and_sign(&gg);
    members.push_back(std::move(gg));
  }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end(),
                            [](const ElemPoly& a, const ElemPoly& b) { return a == b; }),
                members.end());
  fam.members = std::move(members);
  fam.t = fam.members.size();
  return fam;
}

}  // namespace clusterlens
