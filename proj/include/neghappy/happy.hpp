#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "neghappy/bigint.hpp"
#include "neghappy/negabase.hpp"
#include "neghappy/rle.hpp"

namespace neghappy {

/// Parameters of the digit-power-sum map: exponent e >= 2 over base b.
struct PowerParams {
  PowerParams(int exponent_, Base base_) : exponent(exponent_), base(base_) {
    if (exponent_ < 2) {
      throw std::invalid_argument("exponent must be >= 2, got " +
                                  std::to_string(exponent_));
    }
  }

  int exponent;
  Base base;

  friend bool operator==(const PowerParams&, const PowerParams&) = default;
};

/// S(a): sum of e-th powers of the base-b digits of a.  Defined for every
/// integer; S(0) = 0 and S(a) > 0 for a != 0 (digits are nonnegative and at
/// least one is nonzero).
template <typename Int>
Int power_sum(const PowerParams& p, Int a) {
  Int sum{0};
  while (a != 0) {
    auto [q, digit] = split_lsd(a, p.base);
    sum += ipow(Int{digit}, static_cast<std::uint64_t>(p.exponent));
    a = std::move(q);
  }
  return sum;
}

/// S(x) straight off the run-length encoding: each run of `count` copies of
/// d contributes count * d^e.  Cost is proportional to the number of runs,
/// not the digit count, which is what makes towers of astronomical numbers
/// checkable.
inline BigInt power_sum_rle(const PowerParams& p, const RleDigits& x) {
  BigInt sum = 0;
  for (const Run& r : x.runs()) {
    if (r.digit < 0 || r.digit >= p.base.magnitude()) {
      throw std::invalid_argument("run digit out of range for base");
    }
    sum += r.count * ipow(BigInt{r.digit},
                          static_cast<std::uint64_t>(p.exponent));
  }
  return sum;
}

/// Largest value at which S can fail to decrease: (|b|-1)(|b|^2-|b|+1).
/// For every a above this, 0 < S(a) < a.
template <typename Int = std::int64_t>
Int threshold(Base b) {
  const Int m{b.magnitude()};
  return (m - 1) * (m * m - m + 1);
}

/// Orbit of `start` under S up to (and excluding) the first repeated value.
/// iterates[0] is S(start); entry_index points at the first element that
/// lies on the eventual cycle.
template <typename Int>
struct Trajectory {
  Int start{};
  std::vector<Int> iterates;
  std::size_t entry_index = 0;
};

template <typename Int>
Trajectory<Int> trajectory(const PowerParams& p, Int start) {
  if (start == 0) {
    throw std::invalid_argument("trajectory is undefined at 0");
  }
  Trajectory<Int> t;
  t.start = start;
  std::map<Int, std::size_t> first_seen;
  Int v = std::move(start);
  for (;;) {
    v = power_sum(p, v);
    auto [it, fresh] = first_seen.emplace(v, t.iterates.size());
    if (!fresh) {
      t.entry_index = it->second;
      return t;
    }
    t.iterates.push_back(v);
  }
}

/// a is happy when some iterate of S reaches 1.  0 is not happy (it is not
/// positive and S fixes it), 1 trivially is.  Detection: iterate until 1 or
/// until a value repeats.
template <typename Int>
bool is_happy(const PowerParams& p, Int a) {
  if (a == 0) return false;
  if (a == 1) return true;
  std::set<Int> seen;
  Int v = std::move(a);
  for (;;) {
    v = power_sum(p, v);
    if (v == 1) return true;
    if (!seen.insert(v).second) return false;
  }
}

}  // namespace neghappy
