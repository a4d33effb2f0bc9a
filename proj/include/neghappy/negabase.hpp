#pragma once

#include <cctype>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "neghappy/bigint.hpp"

namespace neghappy {

/// A negative radix b <= -2.  Every integer has exactly one expansion over
/// the digit set {0, ..., |b|-1} in such a base; no sign is ever needed.
class Base {
 public:
  explicit Base(std::int64_t b) : b_(b) {
    if (b > -2) {
      throw std::invalid_argument("base must be <= -2, got " +
                                  std::to_string(b));
    }
  }

  std::int64_t value() const { return b_; }
  std::int64_t magnitude() const { return -b_; }
  bool is_odd() const { return (b_ & 1) != 0; }

  friend bool operator==(const Base&, const Base&) = default;

 private:
  std::int64_t b_;
};

/// Digit sequence in little-endian order: digits[i] is the coefficient of
/// b^i.  Zero is the empty sequence.  For a normalized expansion the top
/// digit is nonzero, and the digit count is odd exactly when the value is
/// positive (the leading term dominates the alternating tail).
struct DigitVec {
  std::vector<std::int64_t> digits;

  std::size_t size() const { return digits.size(); }
  bool empty() const { return digits.empty(); }

  friend bool operator==(const DigitVec&, const DigitVec&) = default;
};

/// Splits a into (next, digit) with a == next * b + digit and
/// 0 <= digit < |b|.  Uses truncated division plus a correction step so the
/// int64 instantiation cannot overflow even at the extremes.
template <typename Int>
std::pair<Int, std::int64_t> split_lsd(const Int& a, Base b) {
  Int q = a / b.value();
  Int r = a % b.value();
  if (r < 0) {
    r += b.magnitude();
    q += 1;
  }
  return {q, static_cast<std::int64_t>(r)};
}

/// Expansion of any integer a (positive, negative, or zero) in base b.
/// Each step takes the unique nonnegative remainder a0 = a mod |b| and
/// continues with (a - a0) / b; the quotient shrinks in magnitude, so the
/// loop terminates with the canonical digit string.
template <typename Int>
DigitVec expand(Int a, Base b) {
  DigitVec out;
  while (a != 0) {
    auto [q, digit] = split_lsd(a, b);
    out.digits.push_back(digit);
    a = std::move(q);
  }
  return out;
}

/// Value of a digit sequence (digits need not be normalized, but must lie
/// in [0, |b|-1]).  Horner evaluation from the most significant end.
template <typename Int = BigInt>
Int evaluate(const DigitVec& d, Base b) {
  Int acc{0};
  for (auto it = d.digits.rbegin(); it != d.digits.rend(); ++it) {
    if (*it < 0 || *it >= b.magnitude()) {
      throw std::invalid_argument("digit " + std::to_string(*it) +
                                  " out of range for base " +
                                  std::to_string(b.value()));
    }
    acc = acc * b.value() + *it;
  }
  return acc;
}

/// Number of digits in the expansion of a (0 has zero digits).
template <typename Int>
std::size_t digit_count(const Int& a, Base b) {
  Int v = a;
  std::size_t n = 0;
  while (v != 0) {
    v = split_lsd(v, b).first;
    ++n;
  }
  return n;
}

/// Range-checks digits and strips leading (high-order) zeros.
inline DigitVec normalized(DigitVec d, Base b) {
  for (std::int64_t digit : d.digits) {
    if (digit < 0 || digit >= b.magnitude()) {
      throw std::invalid_argument("digit " + std::to_string(digit) +
                                  " out of range for base " +
                                  std::to_string(b.value()));
    }
  }
  while (!d.digits.empty() && d.digits.back() == 0) d.digits.pop_back();
  return d;
}

/// Renders digits most-significant-first; digits >= 10 appear in bracketed
/// decimal, e.g. 1[12]7.  Zero renders as "0".
inline std::string format_digits(const DigitVec& d) {
  if (d.empty()) return "0";
  std::string out;
  for (auto it = d.digits.rbegin(); it != d.digits.rend(); ++it) {
    if (*it < 10) {
      out.push_back(static_cast<char>('0' + *it));
    } else {
      out += "[" + std::to_string(*it) + "]";
    }
  }
  return out;
}

struct ParsedDigits {
  std::optional<std::int64_t> base;  // present when the text carried a prefix
  DigitVec digits;                   // little-endian, not yet range-checked
};

/// Parses a digit string as produced by format_digits, with an optional
/// "<base>:" prefix (e.g. "-10:18197").  Digits ten and above must be
/// bracketed.  Throws on malformed text.
inline ParsedDigits parse_digits(const std::string& text) {
  ParsedDigits out;
  std::string body = text;
  if (auto colon = text.find(':'); colon != std::string::npos) {
    const std::string head = text.substr(0, colon);
    try {
      std::size_t used = 0;
      out.base = std::stoll(head, &used);
      if (used != head.size()) throw std::invalid_argument(head);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad base prefix '" + head + "'");
    }
    body = text.substr(colon + 1);
  }
  if (body.empty()) throw std::invalid_argument("empty digit string");
  std::vector<std::int64_t> msb_first;
  for (std::size_t i = 0; i < body.size();) {
    const char c = body[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      msb_first.push_back(c - '0');
      ++i;
    } else if (c == '[') {
      const auto close = body.find(']', i);
      if (close == std::string::npos || close == i + 1) {
        throw std::invalid_argument("unterminated bracketed digit");
      }
      const std::string inner = body.substr(i + 1, close - i - 1);
      for (char d : inner) {
        if (!std::isdigit(static_cast<unsigned char>(d))) {
          throw std::invalid_argument("bad bracketed digit '" + inner + "'");
        }
      }
      msb_first.push_back(std::stoll(inner));
      i = close + 1;
    } else {
      throw std::invalid_argument(std::string("unexpected character '") + c +
                                  "' in digit string");
    }
  }
  out.digits.digits.assign(msb_first.rbegin(), msb_first.rend());
  // "0" (or "000") denotes zero: normalize to the empty sequence.
  while (!out.digits.digits.empty() && out.digits.digits.back() == 0) {
    out.digits.digits.pop_back();
  }
  return out;
}

}  // namespace neghappy
