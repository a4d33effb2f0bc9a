#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "neghappy/bigint.hpp"
#include "neghappy/errors.hpp"
#include "neghappy/negabase.hpp"

namespace neghappy {

/// Default ceiling on explicit digit materialization.  Structures whose
/// digit strings are longer than this stay in run-length or symbolic form.
inline constexpr std::size_t kDefaultDigitBudget = 1'000'000;

/// A maximal block of `count` copies of `digit`.  Counts are arbitrary
/// precision: the constructions here routinely produce runs far longer than
/// any addressable array.
struct Run {
  std::int64_t digit = 0;
  BigInt count = 0;

  friend bool operator==(const Run&, const Run&) = default;
};

/// Run-length-encoded digit string, little-endian (runs_[0] covers the
/// lowest positions).  Canonical form: counts >= 1, adjacent runs have
/// distinct digits, and the top run is nonzero.  Zero is the empty run list.
class RleDigits {
 public:
  RleDigits() = default;

  /// Validates digits against the base, merges adjacent equal runs, drops
  /// zero-count runs, and strips the high zero run if present.
  static RleDigits from_runs(std::vector<Run> runs, Base b) {
    RleDigits out;
    for (Run& r : runs) {
      if (r.count < 0) throw std::invalid_argument("negative run count");
      if (r.count == 0) continue;
      if (r.digit < 0 || r.digit >= b.magnitude()) {
        throw std::invalid_argument("run digit " + std::to_string(r.digit) +
                                    " out of range for base " +
                                    std::to_string(b.value()));
      }
      out.append(r.digit, std::move(r.count));
    }
    out.strip_high_zeros();
    return out;
  }

  static RleDigits from_digits(const DigitVec& d, Base b) {
    RleDigits out;
    for (std::int64_t digit : d.digits) {
      if (digit < 0 || digit >= b.magnitude()) {
        throw std::invalid_argument("digit " + std::to_string(digit) +
                                    " out of range for base " +
                                    std::to_string(b.value()));
      }
      out.append(digit, 1);
    }
    out.strip_high_zeros();
    return out;
  }

  template <typename Int>
  static RleDigits from_value(Int a, Base b) {
    return from_digits(expand(std::move(a), b), b);
  }

  const std::vector<Run>& runs() const { return runs_; }
  bool is_zero() const { return runs_.empty(); }

  BigInt total_digits() const {
    BigInt n = 0;
    for (const Run& r : runs_) n += r.count;
    return n;
  }

  /// Sign of the encoded value: positive iff the digit count is odd.
  bool value_is_positive() const {
    return !runs_.empty() && total_digits() % 2 != 0;
  }

  /// Explicit little-endian digits; throws budget_exceeded_error if the
  /// digit count exceeds the budget.
  DigitVec to_digits(std::size_t budget = kDefaultDigitBudget) const {
    if (total_digits() > budget) {
      throw budget_exceeded_error("digit string of length " +
                                  total_digits().str() +
                                  " exceeds budget " + std::to_string(budget));
    }
    DigitVec out;
    for (const Run& r : runs_) {
      const auto n = static_cast<std::size_t>(r.count);
      out.digits.insert(out.digits.end(), n, r.digit);
    }
    return out;
  }

  friend bool operator==(const RleDigits&, const RleDigits&) = default;

  /// Appends `count` copies of `digit` at the high end, merging with the
  /// current top run when the digits match.  No validation; callers ensure
  /// range and finish with strip_high_zeros().
  void append(std::int64_t digit, BigInt count) {
    if (count == 0) return;
    if (!runs_.empty() && runs_.back().digit == digit) {
      runs_.back().count += count;
    } else {
      runs_.push_back(Run{digit, std::move(count)});
    }
  }

  void strip_high_zeros() {
    if (!runs_.empty() && runs_.back().digit == 0) runs_.pop_back();
  }

 private:
  std::vector<Run> runs_;
};

/// Value of x in base b via per-run geometric sums:
/// sum over runs of digit * (b^end - b^start) / (b - 1).  Cost grows with
/// the digit count (through the power sizes), so a budget applies.
inline BigInt rle_evaluate(const RleDigits& x, Base b,
                           std::size_t budget = kDefaultDigitBudget) {
  if (x.total_digits() > budget) {
    throw budget_exceeded_error("evaluating " + x.total_digits().str() +
                                " digits exceeds budget " +
                                std::to_string(budget));
  }
  const BigInt base{b.value()};
  BigInt acc = 0;
  std::uint64_t position = 0;
  for (const Run& r : x.runs()) {
    const auto end = position + static_cast<std::uint64_t>(r.count);
    acc += r.digit * (ipow(base, end) - ipow(base, position)) / (base - 1);
    position = end;
  }
  return acc;
}

/// x + m in digit form, for any integer m with value(x) + m >= 0.  The
/// addend is expanded exactly; carries (always -1, 0, or +1) die out within
/// two positions of entering a uniform run, so the cost is proportional to
/// the number of runs touched plus the addend's length, never to the run
/// lengths themselves.  A negative sum surfaces as negative_result_error.
inline RleDigits rle_add_int(const RleDigits& x, const BigInt& m, Base b) {
  const DigitVec addend = expand(m, b);
  RleDigits out;
  std::size_t pos = 0;  // next addend position to consume
  std::int64_t carry = 0;
  const std::int64_t mag = b.magnitude();

  auto absorb_one = [&](std::int64_t digit) {
    std::int64_t s = digit + carry;
    if (pos < addend.size()) s += addend.digits[pos++];
    std::int64_t r = s % mag;
    if (r < 0) r += mag;
    carry = (s - r) / b.value();  // always in {-1, 0, +1}
    out.append(r, 1);
  };

  for (const Run& run : x.runs()) {
    BigInt remaining = run.count;
    while (remaining > 0 && (pos < addend.size() || carry != 0)) {
      absorb_one(run.digit);
      --remaining;
    }
    out.append(run.digit, std::move(remaining));
  }
  while (pos < addend.size() || carry != 0) absorb_one(0);
  out.strip_high_zeros();

  if (!out.is_zero() && out.total_digits() % 2 == 0) {
    throw negative_result_error("rle_add_int: value(x) + m is negative");
  }
  return out;
}

/// Overwrites the low-order zero run of n with the digits of t.  No carries
/// can occur: t must fit entirely inside that zero run.  t is given
/// little-endian and must be normalized (empty t returns n unchanged).
inline RleDigits rle_splice_low(const RleDigits& n, const DigitVec& t,
                                Base b) {
  if (t.empty()) return n;
  if (!t.digits.empty() && t.digits.back() == 0) {
    throw std::invalid_argument("splice digits must be normalized");
  }
  if (n.is_zero() || n.runs().front().digit != 0 ||
      n.runs().front().count < t.size()) {
    throw std::invalid_argument(
        "splice target lacks a low zero run of length >= " +
        std::to_string(t.size()));
  }
  RleDigits out;
  for (std::int64_t digit : t.digits) {
    if (digit < 0 || digit >= b.magnitude()) {
      throw std::invalid_argument("splice digit " + std::to_string(digit) +
                                  " out of range for base " +
                                  std::to_string(b.value()));
    }
    out.append(digit, 1);
  }
  out.append(0, n.runs().front().count - t.size());
  for (std::size_t i = 1; i < n.runs().size(); ++i) {
    out.append(n.runs()[i].digit, n.runs()[i].count);
  }
  out.strip_high_zeros();
  return out;
}

/// Human-oriented rendering, most significant run first: "1^40 0^6".
inline std::string format_rle(const RleDigits& x) {
  if (x.is_zero()) return "0";
  std::string out;
  for (auto it = x.runs().rbegin(); it != x.runs().rend(); ++it) {
    if (!out.empty()) out += ' ';
    out += std::to_string(it->digit) + "^" + it->count.str();
  }
  return out;
}

}  // namespace neghappy
