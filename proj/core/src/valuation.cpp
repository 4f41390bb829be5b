#include <clusterlens/valuation.hpp>

#include <boost/multiprecision/miller_rabin.hpp>

#include <random>

namespace clusterlens {

std::string rational_to_string(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational rational_from_string(const std::string& s) {
  if (s.empty()) throw InputError("empty rational literal");
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      return Rational(BigInt(s));
    }
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator in '" + s + "'");
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw InputError("cannot parse rational '" + s + "'");
  }
}

std::string Valuation::to_string() const {
  return inf_ ? "inf" : std::to_string(v_);
}

std::string ExtRational::to_string() const {
  switch (kind_) {
    case Kind::NegInf:
      return "-inf";
    case Kind::PosInf:
      return "inf";
    default:
      return rational_to_string(value_);
  }
}

namespace {

// Deterministic Miller-Rabin witness set for the 64-bit range.
bool miller_rabin_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                          23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  auto mulmod = [](std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(a) * b) % m);
  };
  auto powmod = [&](std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t res = 1;
    a %= m;
    while (e) {
      if (e & 1) res = mulmod(res, a, m);
      a = mulmod(a, a, m);
      e >>= 1;
    }
    return res;
  };
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                          23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < r; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

}  // namespace

bool is_probable_prime(const BigInt& n) {
  if (n < 2) return false;
  if (n <= BigInt(UINT64_MAX)) {
    return miller_rabin_u64(static_cast<std::uint64_t>(n));
  }
  std::mt19937_64 gen(0x636c7573ULL);  // fixed seed, reproducible verdicts
  return boost::multiprecision::miller_rabin_test(n, 25, gen);
}

ValuedContext ValuedContext::make(const BigInt& p) {
  if (p < 2 || !is_probable_prime(p)) {
    throw InputError("p = " + p.str() + " is not prime");
  }
  return ValuedContext{p};
}

Valuation ord_int(const BigInt& n, const ValuedContext& ctx) {
  if (n == 0) return Valuation::infinity();
  BigInt m = boost::multiprecision::abs(n);
  long long count = 0;
  BigInt q, r;
  while (true) {
    boost::multiprecision::divide_qr(m, ctx.p, q, r);
    if (r != 0) break;
    m = q;
    ++count;
  }
  return Valuation::of(count);
}

Valuation ord_p(const Rational& q, const ValuedContext& ctx) {
  if (q == 0) return Valuation::infinity();
  const Valuation vn = ord_int(boost::multiprecision::numerator(q), ctx);
  const Valuation vd = ord_int(boost::multiprecision::denominator(q), ctx);
  return Valuation::of(vn.value() - vd.value());
}

}  // namespace clusterlens
