#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "neghappy/bigint.hpp"
#include "neghappy/negabase.hpp"
#include "neghappy/rle.hpp"

namespace neghappy {

/// A numeral that can name numbers far too large to write down:
///   Exact(v)            — an explicit nonnegative integer;
///   Repunit(c, l)       — value(c) ones followed by l zeros in base b,
///                         i.e. sum of b^i for l <= i < value(c) + l;
///   Offset(x, d)        — value(x) + d.
/// The shape is closed under the witness constructions, and parity and
/// digit counts are answerable structurally, without evaluating anything.
/// Immutable; copies share children.
class TowerNumeral {
 public:
  enum class Kind { exact, repunit, offset };

  TowerNumeral() = default;  // Exact(0)

  static TowerNumeral exact(BigInt value) {
    if (value < 0) {
      throw std::invalid_argument("exact tower value must be >= 0");
    }
    TowerNumeral t;
    t.kind_ = Kind::exact;
    t.scalar_ = std::move(value);
    return t;
  }

  static TowerNumeral repunit(TowerNumeral count, std::int64_t shift) {
    if (shift < 0) throw std::invalid_argument("repunit shift must be >= 0");
    if (count.kind_ == Kind::exact && count.scalar_ < 1) {
      throw std::invalid_argument("repunit count must be >= 1");
    }
    TowerNumeral t;
    t.kind_ = Kind::repunit;
    t.child_ = std::make_shared<const TowerNumeral>(std::move(count));
    t.shift_ = shift;
    return t;
  }

  static TowerNumeral offset(TowerNumeral base, BigInt delta) {
    TowerNumeral t;
    t.kind_ = Kind::offset;
    t.child_ = std::make_shared<const TowerNumeral>(std::move(base));
    t.scalar_ = std::move(delta);
    return t;
  }

  Kind kind() const { return kind_; }

  const BigInt& exact_value() const {
    require(Kind::exact);
    return scalar_;
  }
  const TowerNumeral& count() const {
    require(Kind::repunit);
    return *child_;
  }
  std::int64_t shift() const {
    require(Kind::repunit);
    return shift_;
  }
  const TowerNumeral& inner() const {
    require(Kind::offset);
    return *child_;
  }
  const BigInt& delta() const {
    require(Kind::offset);
    return scalar_;
  }

  /// Value parity (0 or 1), decided structurally.  A repunit is a sum of
  /// value(count) powers of b: with b odd each power is odd, so the parity
  /// is the count's; with b even only the b^0 term (present iff shift = 0)
  /// is odd.
  int parity(Base b) const {
    switch (kind_) {
      case Kind::exact:
        return static_cast<int>(scalar_ % 2 != 0);
      case Kind::repunit:
        if (b.is_odd()) return child_->parity(b);
        return shift_ == 0 ? 1 : 0;
      case Kind::offset:
        return (child_->parity(b) + static_cast<int>(scalar_ % 2 != 0)) % 2;
    }
    return 0;  // unreachable
  }

  int depth() const {
    return kind_ == Kind::exact ? 0 : 1 + child_->depth();
  }

  /// The value as a plain integer, if its digit string fits the budget;
  /// otherwise nullopt.  Exact nodes always materialize (they are already
  /// explicit).
  std::optional<BigInt> try_value(Base b,
                                  std::size_t budget = kDefaultDigitBudget) const {
    switch (kind_) {
      case Kind::exact:
        return scalar_;
      case Kind::repunit: {
        const auto count_value = child_->try_value(b, budget);
        if (!count_value) return std::nullopt;
        if (*count_value < 1) {
          throw std::invalid_argument("repunit count evaluated to " +
                                      count_value->str() + "; must be >= 1");
        }
        const BigInt digits = *count_value + shift_;
        if (digits > budget) return std::nullopt;
        const BigInt base{b.value()};
        return (ipow(base, static_cast<std::uint64_t>(digits)) -
                ipow(base, static_cast<std::uint64_t>(shift_))) /
               (base - 1);
      }
      case Kind::offset: {
        const auto inner_value = child_->try_value(b, budget);
        if (!inner_value) return std::nullopt;
        return *inner_value + scalar_;
      }
    }
    return std::nullopt;  // unreachable
  }

  /// Run-length digits of the value, when reachable within the budget.
  /// The budget constrains the *count values* that must be made explicit
  /// (a repunit's runs are two entries however long it is), which is what
  /// lets certificates about numbers with ~10^19 digits stay checkable.
  std::optional<RleDigits> try_rle(Base b,
                                   std::size_t budget = kDefaultDigitBudget) const {
    switch (kind_) {
      case Kind::exact: {
        // Digit count is at least bits / log2(|b|); refuse clearly absurd
        // explicit values instead of expanding them for minutes.
        const std::size_t bits =
            scalar_ == 0 ? 0 : boost::multiprecision::msb(scalar_) + 1;
        const std::size_t base_bits = boost::multiprecision::msb(
                                          BigInt{b.magnitude()}) + 1;
        if (bits > budget * base_bits) return std::nullopt;
        return RleDigits::from_value(scalar_, b);
      }
      case Kind::repunit: {
        const auto count_value = child_->try_value(b, budget);
        if (!count_value) return std::nullopt;
        if (*count_value < 1) {
          throw std::invalid_argument("repunit count evaluated to " +
                                      count_value->str() + "; must be >= 1");
        }
        return RleDigits::from_runs({{0, shift_}, {1, *count_value}}, b);
      }
      case Kind::offset: {
        const auto inner_rle = child_->try_rle(b, budget);
        if (!inner_rle) return std::nullopt;
        return rle_add_int(*inner_rle, scalar_, b);
      }
    }
    return std::nullopt;  // unreachable
  }

  /// Digit count of the value when computable within budget (repunits
  /// only need their count's value, not their own digits).
  std::optional<BigInt> try_digit_count(Base b,
                                        std::size_t budget = kDefaultDigitBudget) const {
    switch (kind_) {
      case Kind::exact:
        return BigInt{digit_count(scalar_, b)};
      case Kind::repunit: {
        const auto count_value = child_->try_value(b, budget);
        if (!count_value) return std::nullopt;
        if (*count_value < 1) {
          throw std::invalid_argument("repunit count evaluated to " +
                                      count_value->str() + "; must be >= 1");
        }
        return *count_value + shift_;
      }
      case Kind::offset: {
        const auto rle = try_rle(b, budget);
        if (!rle) return std::nullopt;
        return rle->total_digits();
      }
    }
    return std::nullopt;  // unreachable
  }

  /// Structural description, e.g. "(repunit(23, shift=6) + 584)".
  std::string describe() const {
    switch (kind_) {
      case Kind::exact:
        return scalar_.str();
      case Kind::repunit:
        return "repunit(" + child_->describe() +
               ", shift=" + std::to_string(shift_) + ")";
      case Kind::offset:
        return "(" + child_->describe() + " + " + scalar_.str() + ")";
    }
    return "";  // unreachable
  }

  friend bool operator==(const TowerNumeral& x, const TowerNumeral& y) {
    if (x.kind_ != y.kind_ || x.scalar_ != y.scalar_ || x.shift_ != y.shift_) {
      return false;
    }
    if (!x.child_ && !y.child_) return true;
    if (!x.child_ || !y.child_) return false;
    return *x.child_ == *y.child_;
  }

 private:
  void require(Kind k) const {
    if (kind_ != k) throw std::logic_error("tower numeral kind mismatch");
  }

  Kind kind_ = Kind::exact;
  BigInt scalar_ = 0;  // exact value or offset delta
  std::shared_ptr<const TowerNumeral> child_;
  std::int64_t shift_ = 0;
};

}  // namespace neghappy
