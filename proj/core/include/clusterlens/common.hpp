#ifndef CLUSTERLENS_COMMON_HPP
#define CLUSTERLENS_COMMON_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace clusterlens {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Largest supported vertex count / polynomial degree for graph enumeration.
inline constexpr int kMaxVertices = 8;

// Malformed or out-of-domain user input (non-prime p, duplicate roots,
// non-separable polynomial, unparsable coefficients).  CLI exit code 1.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Request exceeds a configured limit (degree above kMaxVertices).  Exit 2.
class ResourceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// An invariant the underlying theory guarantees was violated; always a bug
// or a numerical impossibility, never a user error.  Exit 3.
class InternalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class CacheIoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::string rational_to_string(const Rational& q);
Rational rational_from_string(const std::string& s);

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct U64Hash {
  std::size_t operator()(std::uint64_t x) const noexcept {
    return static_cast<std::size_t>(splitmix64(x));
  }
};

}  // namespace clusterlens

#endif
