#ifndef RELHYP_BIGINT_HPP
#define RELHYP_BIGINT_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <string>

namespace relhyp {

// Exponents of infinite-cyclic factor letters are arbitrary precision.
using BigInt = boost::multiprecision::cpp_int;

inline BigInt big_gcd(const BigInt& a, const BigInt& b) {
  return boost::multiprecision::gcd(a, b);
}

inline BigInt big_abs(const BigInt& a) { return a < 0 ? BigInt(-a) : a; }

// Canonical residue in [0, m) for m > 0.
inline BigInt big_mod(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

inline std::size_t big_hash(const BigInt& a) {
  std::size_t h = 1469598103934665603ull;
  for (char c : a.str()) {
    h ^= static_cast<std::size_t>(c);
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace relhyp

#endif
