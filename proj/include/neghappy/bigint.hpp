#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace neghappy {

/// Arbitrary-precision signed integer used wherever values can outgrow a
/// machine word (run lengths, tower evaluation, witness arithmetic).
using BigInt = boost::multiprecision::cpp_int;

/// x^n by binary exponentiation; works for any integer-like type.
template <typename Int>
Int ipow(Int x, std::uint64_t n) {
  Int r{1};
  while (n > 0) {
    if (n & 1u) r *= x;
    n >>= 1u;
    if (n > 0) x *= x;
  }
  return r;
}

inline std::string to_decimal(const BigInt& v) { return v.str(); }

inline BigInt parse_decimal(const std::string& s) { return BigInt(s); }

}  // namespace neghappy
