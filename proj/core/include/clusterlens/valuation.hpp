#ifndef CLUSTERLENS_VALUATION_HPP
#define CLUSTERLENS_VALUATION_HPP

#include <clusterlens/common.hpp>

#include <compare>
#include <cstdint>
#include <string>

namespace clusterlens {

// Integer valuation with the v(0) = +inf convention.  Field elements have
// integer valuations; rational-valued quantities (depths, averages) live in
// ExtRational instead.
class Valuation {
public:
  Valuation() : inf_(true), v_(0) {}
  static Valuation infinity() { return Valuation(); }
  static Valuation of(long long v) {
    Valuation x;
    x.inf_ = false;
    x.v_ = v;
    return x;
  }

  bool is_infinite() const { return inf_; }
  long long value() const {
    if (inf_) throw InternalError("value() on infinite valuation");
    return v_;
  }

  Valuation operator+(const Valuation& o) const {
    if (inf_ || o.inf_) return infinity();
    return of(v_ + o.v_);
  }
  Valuation operator-() const {
    if (inf_) throw InternalError("negating infinite valuation");
    return of(-v_);
  }

  bool operator==(const Valuation& o) const {
    return inf_ == o.inf_ && (inf_ || v_ == o.v_);
  }
  bool operator<(const Valuation& o) const {
    if (inf_) return false;
    if (o.inf_) return true;
    return v_ < o.v_;
  }
  bool operator<=(const Valuation& o) const { return *this < o || *this == o; }
  bool operator>(const Valuation& o) const { return o < *this; }
  bool operator>=(const Valuation& o) const { return o <= *this; }

  std::string to_string() const;

private:
  bool inf_;
  long long v_;
};

// Exact rational extended with -inf and +inf; totally ordered.  Used for
// cluster depths and the averaging function, which take values in Q.
class ExtRational {
public:
  enum class Kind { NegInf, Finite, PosInf };

  ExtRational() : kind_(Kind::Finite), value_(0) {}
  ExtRational(const Rational& q) : kind_(Kind::Finite), value_(q) {}
  static ExtRational neg_infinity() { return ExtRational(Kind::NegInf); }
  static ExtRational pos_infinity() { return ExtRational(Kind::PosInf); }

  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_neg_infinity() const { return kind_ == Kind::NegInf; }
  bool is_pos_infinity() const { return kind_ == Kind::PosInf; }
  const Rational& value() const {
    if (!is_finite()) throw InternalError("value() on infinite ExtRational");
    return value_;
  }

  bool operator==(const ExtRational& o) const {
    return kind_ == o.kind_ && (kind_ != Kind::Finite || value_ == o.value_);
  }
  bool operator<(const ExtRational& o) const {
    if (kind_ == o.kind_) return kind_ == Kind::Finite && value_ < o.value_;
    if (kind_ == Kind::NegInf) return true;
    if (kind_ == Kind::PosInf) return false;
    return o.kind_ == Kind::PosInf;
  }
  bool operator<=(const ExtRational& o) const { return *this < o || *this == o; }
  bool operator>(const ExtRational& o) const { return o < *this; }
  bool operator>=(const ExtRational& o) const { return o <= *this; }

  std::string to_string() const;

private:
  explicit ExtRational(Kind k) : kind_(k), value_(0) {}
  Kind kind_;
  Rational value_;
};

// Fixes the base field: Q with the p-adic valuation for a prime p.
struct ValuedContext {
  BigInt p;

  // Deterministic Miller-Rabin below 2^64, fixed-round probabilistic above.
  static ValuedContext make(const BigInt& p);
};

bool is_probable_prime(const BigInt& n);

// Exponent of ctx.p in n; +inf for n = 0.
Valuation ord_int(const BigInt& n, const ValuedContext& ctx);
Valuation ord_p(const Rational& q, const ValuedContext& ctx);

}  // namespace clusterlens

#endif
