#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "neghappy/atlas.hpp"
#include "neghappy/bigint.hpp"
#include "neghappy/errors.hpp"
#include "neghappy/happy.hpp"
#include "neghappy/negabase.hpp"
#include "neghappy/rle.hpp"
#include "neghappy/runs.hpp"
#include "neghappy/tower.hpp"

namespace neghappy {

// ---------------------------------------------------------------------------
// F-words: finite compositions of S and the increment map.
// ---------------------------------------------------------------------------

/// One step of an F-word: apply S, or add m (the m-fold increment I^m).
struct FStep {
  enum class Kind { s, i };
  Kind kind = Kind::s;
  BigInt m = 0;

  static FStep S() { return {}; }
  static FStep I(BigInt m) {
    if (m < 1) throw std::invalid_argument("increment step requires m >= 1");
    FStep st;
    st.kind = Kind::i;
    st.m = std::move(m);
    return st;
  }

  friend bool operator==(const FStep&, const FStep&) = default;
};

/// Steps applied left to right; the empty word is the identity.
struct FWord {
  std::vector<FStep> steps;

  friend bool operator==(const FWord&, const FWord&) = default;
};

inline BigInt apply_fword(const PowerParams& p, const FWord& f, BigInt a) {
  if (a < 1) throw std::invalid_argument("F-words act on positive integers");
  for (const FStep& st : f.steps) {
    if (st.kind == FStep::Kind::s) {
      a = power_sum(p, a);
    } else {
      a += st.m;
    }
  }
  return a;
}

/// Rendered in application order, e.g. "I(1353) S I(584) S".
inline std::string format_fword(const FWord& f) {
  if (f.steps.empty()) return "(identity)";
  std::string out;
  for (const FStep& st : f.steps) {
    if (!out.empty()) out += ' ';
    out += st.kind == FStep::Kind::s ? "S" : "I(" + st.m.str() + ")";
  }
  return out;
}

/// Bases whose merge machinery exists: every odd base <= -5, and the four
/// even bases with hand-built merge tails.  (-3 is handled separately by
/// build_run_witness; -2 has none: happiness there pins a residue mod 3.)
inline bool qualifying_base(Base b) {
  if (b.is_odd()) return b.value() <= -5;
  const std::int64_t v = b.value();
  return v == -4 || v == -6 || v == -8 || v == -10;
}

// ---------------------------------------------------------------------------
// Even-base merges.
// ---------------------------------------------------------------------------

namespace detail {

/// Designated landing elements and the finishing words that merge {1, v}.
/// Each cycle (and the non-1 fixed point of -8) contains one, so walking S
/// always reaches a key.  The tails were found with the anchored element
/// sitting at 1, which the b^2 anchor guarantees.
inline const std::vector<std::pair<std::int64_t, std::vector<FStep>>>&
even_merge_tails(std::int64_t base) {
  auto word = [](BigInt m, int s_count) {
    std::vector<FStep> steps{FStep::I(std::move(m))};
    steps.insert(steps.end(), s_count, FStep::S());
    return steps;
  };
  static const auto* tails = new std::map<
      std::int64_t, std::vector<std::pair<std::int64_t, std::vector<FStep>>>>{
      {-6, {{2, word(7, 6)}}},
      {-8, {{30, word(2, 8)}, {59, word(2, 8)}, {46, word(7, 9)}}},
      {-10, {{19, word(22, 3)}, {35, word(1, 16)}}},
  };
  return tails->at(base);
}

}  // namespace detail

/// Merge word for an even qualifying base: S until both values are
/// periodic, then (for -4) a fixed per-pair tail over U = {1,6,14}, or
/// (for -6/-8/-10) I^(b^2 - u1) parking the first value on "100" (so one
/// more S pins it at 1) followed by S-steps until the second value walks
/// its cycle into a designated element, then that element's tail.  The
/// returned word is replayed on both inputs before returning.
inline FWord merge_even(const CycleAtlas& atlas, const BigInt& t1,
                        const BigInt& t2) {
  const std::int64_t bval = atlas.base;
  if (bval != -4 && bval != -6 && bval != -8 && bval != -10) {
    throw std::invalid_argument(
        "even-base merges exist only for -4, -6, -8, -10");
  }
  if (atlas.exponent != 2) {
    throw std::invalid_argument("merge machinery is tied to e = 2");
  }
  if (!(t2 >= 1 && t1 > t2)) {
    throw std::invalid_argument("merge requires t1 > t2 >= 1");
  }
  const Base b{bval};
  const PowerParams p{2, b};
  const std::int64_t bsq = b.magnitude() * b.magnitude();

  FWord word;
  BigInt x1 = t1, x2 = t2;
  auto push_s = [&] {
    word.steps.push_back(FStep::S());
    x1 = power_sum(p, x1);
    x2 = power_sum(p, x2);
  };
  auto push_i = [&](BigInt m) {
    x1 += m;
    x2 += m;
    word.steps.push_back(FStep::I(std::move(m)));
  };
  auto in_u = [&](const BigInt& v) {
    return v <= atlas.u_set.back() &&
           atlas.in_u(static_cast<std::int64_t>(v));
  };
  auto merged = [&] { return x1 == x2; };

  std::size_t guard = 0;
  auto tick = [&guard] {
    if (++guard > 100000) {
      throw std::logic_error("merge walk failed to terminate; this is a bug");
    }
  };

  while (!merged() && !(in_u(x1) && in_u(x2))) {
    push_s();
    tick();
  }
  // The proof's "making l larger, if necessary": advance along the cycle
  // until the anchored value drops below b^2 (needed so the anchor shift
  // stays positive; at most one full cycle).
  while (!merged() && x1 >= bsq) {
    push_s();
    tick();
  }
  if (!merged()) {
    if (bval == -4) {
      // U = {1, 6, 14}; everything reduces to two pairs.
      auto lo = static_cast<std::int64_t>(std::min(x1, x2));
      auto hi = static_cast<std::int64_t>(std::max(x1, x2));
      if (lo == 1 && hi == 14) {
        push_s();  // S(14) = 6
        lo = 1;
        hi = 6;
      }
      if (lo == 1 && hi == 6) {
        push_i(1);
        push_s();
        push_s();
      } else if (lo == 6 && hi == 14) {
        push_i(3);
        for (int i = 0; i < 5; ++i) push_s();
      } else {
        throw std::logic_error("unexpected periodic pair at base -4");
      }
    } else {
      push_i(bsq - x1);  // x1 is now b^2 = "100", one S from resting at 1
      const auto& tails = detail::even_merge_tails(bval);
      for (;;) {
        push_s();
        tick();
        if (merged()) break;
        const auto hit =
            std::find_if(tails.begin(), tails.end(), [&](const auto& t) {
              return x2 == t.first;
            });
        if (hit != tails.end()) {
          for (const FStep& st : hit->second) {
            if (st.kind == FStep::Kind::s) {
              push_s();
            } else {
              push_i(st.m);
            }
          }
          break;
        }
      }
    }
  }

  if (apply_fword(p, word, t1) != apply_fword(p, word, t2)) {
    throw std::logic_error("even merge failed its replay check; this is a bug");
  }
  return word;
}

inline FWord merge_even(Base b, const BigInt& t1, const BigInt& t2) {
  return merge_even(enumerate(PowerParams(2, b)), t1, t2);
}

// ---------------------------------------------------------------------------
// Odd-base merges.
// ---------------------------------------------------------------------------

/// The digit constant c entering the odd-base case-(iii) shift.  Chosen as
/// the smallest nonnegative solution of the congruence
///   2c = 4r' - S(X) - 1  (mod b - 1),
/// where X = (|b|-1) * sum of b^(2i+1) for i < r', plus v' - 1.  The right
/// side is always even (X is odd, and power sums preserve parity in odd
/// bases), so c is well defined modulo (|b|+1)/2 and lies below |b| - 1.
inline std::int64_t odd_c(Base b, const BigInt& v_prime,
                          std::int64_t r_prime) {
  if (!b.is_odd() || b.value() > -5) {
    throw std::invalid_argument("odd_c requires an odd base <= -5");
  }
  if (v_prime < 2 || v_prime % 2 != 0) {
    throw std::invalid_argument("v' must be positive and even");
  }
  if (r_prime < 1) throw std::invalid_argument("r' must be >= 1");
  const std::int64_t mag = b.magnitude();
  const BigInt bsq{mag * mag};
  const BigInt b2r = ipow(bsq, static_cast<std::uint64_t>(r_prime));
  if (b2r <= v_prime) {
    throw std::invalid_argument("hypothesis b^(2r') > v' violated");
  }

  const PowerParams p{2, b};
  const BigInt odd_power_sum = b.value() * (b2r - 1) / (bsq - 1);
  const BigInt x = (mag - 1) * odd_power_sum + v_prime - 1;
  const BigInt rhs = 4 * BigInt{r_prime} - power_sum(p, x) - 1;
  if (rhs % 2 != 0) {
    throw std::logic_error(
        "odd_c right-hand side came out odd, contradicting the parity "
        "invariant; this is a bug");
  }
  const BigInt half = rhs / 2;
  const std::int64_t modulus = (mag + 1) / 2;
  const auto c =
      static_cast<std::int64_t>(((half % modulus) + modulus) % modulus);
  if ((2 * BigInt{c} - rhs) % (mag + 1) != 0) {
    throw std::logic_error("odd_c congruence re-check failed; this is a bug");
  }
  return c;
}

namespace detail {

inline std::vector<std::int64_t> nonzero_digit_multiset(const BigInt& v,
                                                        Base b) {
  auto digits = expand(v, b).digits;
  std::erase(digits, 0);
  std::sort(digits.begin(), digits.end());
  return digits;
}

inline FWord merge_odd_impl(const PowerParams& p, const BigInt& t1,
                            const BigInt& t2, bool allow_case_iii) {
  const Base b = p.base;
  const std::int64_t mag = b.magnitude();
  const BigInt bsq{mag * mag};

  // Case (i): the nonzero digits agree as multisets, so one S merges.
  if (nonzero_digit_multiset(t1, b) == nonzero_digit_multiset(t2, b)) {
    return FWord{{FStep::S()}};
  }

  // Case (ii): t1 = t2 (mod b-1).  Shift both to numbers sharing their
  // nonzero digits: t1+m becomes b^(2r) + v and t2+m carries the same
  // digits rearranged, so one S after the shift merges.
  if ((t1 - t2) % (mag + 1) == 0) {
    const BigInt v = (t2 - t1) / (b.value() - 1);
    std::int64_t r = 1;
    BigInt b2r = bsq;
    while (b2r <= bsq * v + t1) {
      b2r *= bsq;
      ++r;
    }
    return FWord{{FStep::I(b2r + v - t1), FStep::S()}};
  }

  if (!allow_case_iii) {
    throw std::logic_error(
        "odd merge case (iii) failed to land in case (ii); this is a bug");
  }

  // Case (iii): shift by m' so that one S brings the pair into case (ii).
  const BigInt v_prime = t1 - t2;
  std::int64_t r_prime = 1;
  BigInt b2r = bsq;
  while (b2r <= bsq * t1) {
    b2r *= bsq;
    ++r_prime;
  }
  const std::int64_t c = odd_c(b, v_prime, r_prime);
  const BigInt geometric = (mag - 1) * (b2r - 1) / (bsq - 1);
  const BigInt m_prime = c * b2r + geometric - t2;

  FWord word;
  if (m_prime > 0) word.steps.push_back(FStep::I(m_prime));
  word.steps.push_back(FStep::S());
  const BigInt s1 = power_sum(p, BigInt{t1 + m_prime});
  const BigInt s2 = power_sum(p, BigInt{t2 + m_prime});
  if (s1 != s2) {
    const FWord rest = merge_odd_impl(p, std::max(s1, s2), std::min(s1, s2),
                                      /*allow_case_iii=*/false);
    word.steps.insert(word.steps.end(), rest.steps.begin(), rest.steps.end());
  }
  return word;
}

}  // namespace detail

/// Merge word for an odd base <= -5.  The two inputs must share parity —
/// power sums preserve parity in odd bases, so no word exists otherwise.
inline FWord merge_odd(Base b, const BigInt& t1, const BigInt& t2) {
  if (!b.is_odd() || b.value() > -5) {
    throw std::invalid_argument("odd-base merges require odd b <= -5");
  }
  if (!(t2 >= 1 && t1 > t2)) {
    throw std::invalid_argument("merge requires t1 > t2 >= 1");
  }
  if ((t1 - t2) % 2 != 0) {
    throw std::invalid_argument(
        "t1 and t2 must share parity; odd-base power sums preserve parity");
  }
  const PowerParams p{2, b};
  FWord word = detail::merge_odd_impl(p, t1, t2, /*allow_case_iii=*/true);
  if (apply_fword(p, word, t1) != apply_fword(p, word, t2)) {
    throw std::logic_error("odd merge failed its replay check; this is a bug");
  }
  return word;
}

/// Dispatch on base parity; inputs must already satisfy t1 > t2 >= 1.
inline FWord merge(const CycleAtlas& atlas, const BigInt& t1,
                   const BigInt& t2) {
  const Base b{atlas.base};
  return b.is_odd() ? merge_odd(b, t1, t2) : merge_even(atlas, t1, t2);
}

// ---------------------------------------------------------------------------
// Witness construction: singleton base, peels, induction, certificates.
// ---------------------------------------------------------------------------

/// Base case of the induction: for a one-element set {t}, pick x with
/// S(x) = u (the predecessor of u on its orbit; u itself for fixed points)
/// and the smallest even r >= 2 with b^r * x > t.  Then n = b^r*x - t is
/// positive and t + n = b^r*x is x's digits shifted up r places, so a
/// single S lands exactly on u.
struct SingletonWitness {
  BigInt n;
  std::int64_t k = 1;
  std::int64_t x = 1;
  std::int64_t r = 2;
};

inline SingletonWitness singleton_witness(const PowerParams& p,
                                          const CycleAtlas& atlas,
                                          const BigInt& t, std::int64_t u) {
  if (atlas.exponent != p.exponent || atlas.base != p.base.value()) {
    throw std::invalid_argument("atlas does not match the given parameters");
  }
  if (t < 1) throw std::invalid_argument("t must be positive");
  if (!atlas.in_u(u)) {
    throw std::invalid_argument("u must lie in the periodic set");
  }
  SingletonWitness w;
  w.x = u;
  if (!std::binary_search(atlas.fixed_points.begin(),
                          atlas.fixed_points.end(), u)) {
    for (const auto& cycle : atlas.cycles) {
      auto at = std::find(cycle.begin(), cycle.end(), u);
      if (at == cycle.end()) continue;
      w.x = at == cycle.begin() ? cycle.back() : *(at - 1);
      break;
    }
  }
  const BigInt bsq{p.base.magnitude() * p.base.magnitude()};
  BigInt shifted = bsq * w.x;
  w.r = 2;
  while (shifted <= t) {
    shifted *= bsq;
    w.r += 2;
  }
  w.n = shifted - t;
  if (power_sum(p, BigInt{t + w.n}) != u) {
    throw std::logic_error("singleton witness failed its check; this is a bug");
  }
  return w;
}

/// One inductive peel.  Given (n', k') good for the image set, produce
/// (n, k) good for the preimage:
///   S-peel: n = Repunit(n', l') with l' >= every member's digit count and
///           parity(n') + l' odd, so t + n is t's digits, padding zeros,
///           then value(n') ones — S(t + n) = S(t) + value(n').  k' + 1.
///   I-peel(m): n = Offset(n', m), k unchanged.
struct PeelOutcome {
  TowerNumeral n;
  std::int64_t k = 1;
  std::int64_t shift = 0;  // the chosen l' (S-peel only)
};

inline PeelOutcome peel_s(const PowerParams& p, const std::vector<BigInt>& T,
                          const TowerNumeral& inner_n, std::int64_t inner_k) {
  if (T.empty()) throw std::invalid_argument("peel requires a nonempty set");
  std::size_t ell = 0;
  for (const BigInt& t : T) {
    if (t < 1) throw std::invalid_argument("set members must be positive");
    ell = std::max(ell, digit_count(t, p.base));
  }
  auto shift = static_cast<std::int64_t>(ell);
  if ((inner_n.parity(p.base) + shift) % 2 != 1) ++shift;
  return {TowerNumeral::repunit(inner_n, shift), inner_k + 1, shift};
}

inline PeelOutcome peel_i(const BigInt& m, const TowerNumeral& inner_n,
                          std::int64_t inner_k) {
  if (m < 1) throw std::invalid_argument("I-peel requires m >= 1");
  return {TowerNumeral::offset(inner_n, m), inner_k, 0};
}

/// Tagged peel selector matching the certificate's step vocabulary.
struct PeelKind {
  enum class Tag { s, i };
  Tag tag = Tag::s;
  BigInt m = 0;

  static PeelKind s() { return {}; }
  static PeelKind i(BigInt m) { return {Tag::i, std::move(m)}; }
};

inline PeelOutcome peel(const PowerParams& p, const PeelKind& kind,
                        const std::vector<BigInt>& T,
                        const TowerNumeral& inner_n, std::int64_t inner_k) {
  return kind.tag == PeelKind::Tag::s ? peel_s(p, T, inner_n, inner_k)
                                      : peel_i(kind.m, inner_n, inner_k);
}

// ---------------------------------------------------------------------------
// Certificates.
// ---------------------------------------------------------------------------

struct CertStep {
  enum class Kind { s_peel, i_peel, singleton_base };
  Kind kind = Kind::singleton_base;
  std::int64_t shift = 0;  // s_peel: l'
  BigInt m = 0;            // i_peel
  std::int64_t x = 1;      // singleton_base
  std::int64_t r = 2;      // singleton_base

  static CertStep s_peel(std::int64_t shift) {
    CertStep st;
    st.kind = Kind::s_peel;
    st.shift = shift;
    return st;
  }
  static CertStep i_peel(BigInt m) {
    CertStep st;
    st.kind = Kind::i_peel;
    st.m = std::move(m);
    return st;
  }
  static CertStep singleton(std::int64_t x, std::int64_t r) {
    CertStep st;
    st.x = x;
    st.r = r;
    return st;
  }

  friend bool operator==(const CertStep&, const CertStep&) = default;
};

struct CertLevel {
  std::vector<BigInt> set;  // sorted, strictly increasing, positive
  TowerNumeral n;
  std::int64_t k = 1;
  CertStep step;  // links this level to the next (or closes the chain)

  friend bool operator==(const CertLevel&, const CertLevel&) = default;
};

struct WitnessCertificate {
  int exponent = 2;
  std::int64_t base = -2;
  std::int64_t target = 1;  // u
  std::vector<CertLevel> levels;

  friend bool operator==(const WitnessCertificate&,
                         const WitnessCertificate&) = default;
};

struct GoodWitness {
  TowerNumeral n;
  std::int64_t k = 1;
  std::int64_t u = 1;

  friend bool operator==(const GoodWitness&, const GoodWitness&) = default;
};

struct VerifyReport {
  bool ok = true;
  std::vector<std::string> issues;
  std::int64_t levels_checked = 0;
  std::int64_t splices_checked = 0;      // exact splice identities replayed
  std::int64_t end_to_end_checked = 0;   // members iterated to u via RLE

  explicit operator bool() const { return ok; }
};

/// Re-validates a certificate level by level.  Structure (set images,
/// digit-count room, parity, numeral linkage, k-chain) is always checked
/// exactly on the small set members; the splice identity and the full
/// S^k(t+n) = u iteration are additionally replayed in exact arithmetic
/// whenever the numerals materialize within the digit budget.
inline VerifyReport verify_certificate(
    const WitnessCertificate& cert,
    std::size_t digit_budget = kDefaultDigitBudget) {
  VerifyReport report;
  auto fail = [&report](std::size_t level, const std::string& what) {
    report.ok = false;
    report.issues.push_back("level " + std::to_string(level) + ": " + what);
  };

  if (cert.base > -2) {
    report.ok = false;
    report.issues.push_back("base must be <= -2");
    return report;
  }
  if (cert.exponent < 2) {
    report.ok = false;
    report.issues.push_back("exponent must be >= 2");
    return report;
  }
  if (cert.levels.empty()) {
    report.ok = false;
    report.issues.push_back("certificate has no levels");
    return report;
  }
  const Base b{cert.base};
  const PowerParams p{cert.exponent, b};

  const std::size_t last = cert.levels.size() - 1;
  for (std::size_t i = 0; i < cert.levels.size(); ++i) {
    const CertLevel& lvl = cert.levels[i];
    ++report.levels_checked;

    if (lvl.set.empty()) {
      fail(i, "empty set");
      continue;
    }
    bool set_ok = lvl.set.front() >= 1;
    for (std::size_t j = 1; j < lvl.set.size(); ++j) {
      set_ok = set_ok && lvl.set[j - 1] < lvl.set[j];
    }
    if (!set_ok) {
      fail(i, "set must be strictly increasing and positive");
      continue;
    }
    if (lvl.k < 1) fail(i, "k must be >= 1");

    if (i == last) {
      if (lvl.step.kind != CertStep::Kind::singleton_base) {
        fail(i, "innermost level must close with a singleton base");
        continue;
      }
      if (lvl.set.size() != 1) {
        fail(i, "singleton base level must have a one-element set");
        continue;
      }
      const CertStep& st = lvl.step;
      if (st.r < 2 || st.r % 2 != 0) fail(i, "r must be even and >= 2");
      if (st.x < 1) fail(i, "x must be positive");
      if (power_sum(p, BigInt{st.x}) != cert.target) {
        fail(i, "S(x) does not equal the target");
      }
      if (lvl.k != 1) fail(i, "singleton base must have k = 1");
      if (lvl.n.kind() != TowerNumeral::Kind::exact) {
        fail(i, "singleton base numeral must be exact");
        continue;
      }
      const BigInt expected =
          ipow(BigInt{b.value()}, static_cast<std::uint64_t>(st.r)) * st.x -
          lvl.set.front();
      if (lvl.n.exact_value() != expected) {
        fail(i, "n does not equal b^r * x - t");
      }
      if (lvl.n.exact_value() < 1) fail(i, "n must be positive");
      if (power_sum(p, BigInt{lvl.set.front() + lvl.n.exact_value()}) !=
          cert.target) {
        fail(i, "S(t + n) does not equal the target");
      }
      continue;
    }

    if (lvl.step.kind == CertStep::Kind::singleton_base) {
      fail(i, "singleton base may only close the chain");
      continue;
    }
    const CertLevel& next = cert.levels[i + 1];

    if (lvl.step.kind == CertStep::Kind::s_peel) {
      const std::int64_t shift = lvl.step.shift;
      std::set<BigInt> image;
      for (const BigInt& t : lvl.set) image.insert(power_sum(p, t));
      if (std::vector<BigInt>(image.begin(), image.end()) != next.set) {
        fail(i, "next set is not the S-image of this set");
      }
      for (const BigInt& t : lvl.set) {
        if (static_cast<std::int64_t>(digit_count(t, b)) > shift) {
          fail(i, "member " + t.str() + " has more than " +
                      std::to_string(shift) + " digits");
        }
      }
      if ((next.n.parity(b) + shift) % 2 != 1) {
        fail(i, "parity(n') + l' must be odd");
      }
      if (lvl.n.kind() != TowerNumeral::Kind::repunit ||
          lvl.n.shift() != shift || !(lvl.n.count() == next.n)) {
        fail(i, "numeral is not Repunit(next n, l')");
      }
      if (lvl.k != next.k + 1) fail(i, "k must increase by 1 across an S-peel");

      if (auto rle = lvl.n.try_rle(b, digit_budget)) {
        const auto inner_value = next.n.try_value(b, digit_budget);
        if (!inner_value) {
          fail(i, "numeral RLE materialized but its count value did not");
        } else {
          for (const BigInt& t : lvl.set) {
            const RleDigits spliced = rle_splice_low(*rle, expand(t, b), b);
            if (power_sum_rle(p, spliced) !=
                power_sum(p, t) + *inner_value) {
              fail(i, "splice identity S(t+n) = S(t) + n' fails at t = " +
                          t.str());
            }
            ++report.splices_checked;
          }
        }
      }
    } else {  // i_peel
      if (lvl.step.m < 1) fail(i, "I-peel offset must be >= 1");
      std::vector<BigInt> image;
      image.reserve(lvl.set.size());
      for (const BigInt& t : lvl.set) image.push_back(t + lvl.step.m);
      if (image != next.set) {
        fail(i, "next set is not this set translated by m");
      }
      if (lvl.n.kind() != TowerNumeral::Kind::offset ||
          lvl.n.delta() != lvl.step.m || !(lvl.n.inner() == next.n)) {
        fail(i, "numeral is not Offset(next n, m)");
      }
      if (lvl.k != next.k) fail(i, "k must be unchanged across an I-peel");
    }
  }

  // End-to-end replay: when the outermost numeral materializes as runs,
  // iterate S^k from every t + n in exact arithmetic and demand u.
  if (report.ok) {
    const CertLevel& outer = cert.levels.front();
    if (auto rle = outer.n.try_rle(b, digit_budget)) {
      for (const BigInt& t : outer.set) {
        BigInt v = power_sum_rle(p, rle_add_int(*rle, t, b));
        for (std::int64_t step = 1; step < outer.k; ++step) {
          v = power_sum(p, v);
        }
        if (v != cert.target) {
          fail(0, "direct iteration of t = " + t.str() +
                      " did not reach the target");
        } else {
          ++report.end_to_end_checked;
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// The induction of the main construction.
// ---------------------------------------------------------------------------

struct WitnessOptions {
  std::int64_t max_levels = 10000;  // certificate depth budget
  std::size_t digit_budget = kDefaultDigitBudget;
};

namespace detail {

inline std::vector<BigInt> apply_step_set(const PowerParams& p,
                                          const FStep& st,
                                          const std::vector<BigInt>& set) {
  std::set<BigInt> out;
  for (const BigInt& t : set) {
    out.insert(st.kind == FStep::Kind::s ? power_sum(p, t) : t + st.m);
  }
  return {out.begin(), out.end()};
}

}  // namespace detail

/// Constructs a witness (n, k) with S^k(t + n) = u for every t in T, plus
/// the checkable certificate.  Induction: a singleton closes directly;
/// otherwise merge the two largest elements with an F-word, apply it to
/// the whole set, recurse, and peel the word's steps off right-to-left,
/// recording each level.  For odd bases all of T must share parity (the
/// machinery cannot exist otherwise — S preserves parity there).
inline std::pair<GoodWitness, WitnessCertificate> good_witness(
    const PowerParams& p, std::vector<BigInt> T, std::int64_t u,
    const WitnessOptions& opts = {}) {
  if (p.exponent != 2) {
    throw std::invalid_argument("good-set machinery is tied to e = 2");
  }
  if (!qualifying_base(p.base)) {
    throw std::invalid_argument(
        "base must be odd <= -5 or one of -4, -6, -8, -10");
  }
  std::sort(T.begin(), T.end());
  T.erase(std::unique(T.begin(), T.end()), T.end());
  if (T.empty()) {
    throw std::invalid_argument(
        "empty sets are vacuously good; a concrete witness needs a member");
  }
  if (T.front() < 1) throw std::invalid_argument("T members must be positive");
  if (p.base.is_odd()) {
    for (const BigInt& t : T) {
      if ((t - T.front()) % 2 != 0) {
        throw std::invalid_argument(
            "for odd bases all members must share parity (S preserves "
            "parity, so mixed sets have no witness)");
      }
    }
  }
  const CycleAtlas atlas = enumerate(p);
  if (!atlas.in_u(u)) {
    throw std::invalid_argument("u must lie in the periodic set");
  }

  std::vector<std::pair<std::vector<BigInt>, FStep>> stages;
  std::vector<BigInt> current = T;
  while (current.size() > 1) {
    const FWord f = merge(atlas, current[current.size() - 1],
                          current[current.size() - 2]);
    if (static_cast<std::int64_t>(stages.size() + f.steps.size() + 1) >
        opts.max_levels) {
      throw depth_exceeded_error(
          "certificate would exceed the level budget of " +
          std::to_string(opts.max_levels));
    }
    for (const FStep& st : f.steps) {
      stages.emplace_back(current, st);
      current = detail::apply_step_set(p, st, current);
    }
  }

  const SingletonWitness sw = singleton_witness(p, atlas, current.front(), u);
  std::vector<CertLevel> levels;
  levels.reserve(stages.size() + 1);
  TowerNumeral n = TowerNumeral::exact(sw.n);
  std::int64_t k = 1;
  levels.push_back(CertLevel{current, n, k, CertStep::singleton(sw.x, sw.r)});
  for (auto it = stages.rbegin(); it != stages.rend(); ++it) {
    if (it->second.kind == FStep::Kind::s) {
      const PeelOutcome out = peel_s(p, it->first, n, k);
      n = out.n;
      k = out.k;
      levels.push_back(CertLevel{it->first, n, k, CertStep::s_peel(out.shift)});
    } else {
      const PeelOutcome out = peel_i(it->second.m, n, k);
      n = out.n;
      k = out.k;
      levels.push_back(
          CertLevel{it->first, n, k, CertStep::i_peel(it->second.m)});
    }
  }
  std::reverse(levels.begin(), levels.end());

  WitnessCertificate cert{p.exponent, p.base.value(), u, std::move(levels)};
  GoodWitness witness{cert.levels.front().n, cert.levels.front().k, u};
  const VerifyReport report = verify_certificate(cert, opts.digit_budget);
  if (!report.ok) {
    throw std::logic_error("constructed certificate failed verification: " +
                           (report.issues.empty() ? std::string("?")
                                                  : report.issues.front()));
  }
  return {std::move(witness), std::move(cert)};
}

// ---------------------------------------------------------------------------
// Runs of happy numbers, constructively.
// ---------------------------------------------------------------------------

/// Witness that {1 + n + d*t : 0 <= t < N} are simultaneously happy — an
/// N-term progression of d-consecutive happy numbers.
struct RunWitness {
  std::int64_t base = -2;
  std::int64_t count = 1;       // N
  std::int64_t difference = 1;  // d
  GoodWitness witness;          // u = 1
  std::optional<WitnessCertificate> certificate;  // absent for base -3

  /// The i-th member, 1 + d*i + n, as a numeral.
  TowerNumeral member(std::int64_t i) const {
    if (i < 0 || i >= count) throw std::out_of_range("member index");
    return TowerNumeral::offset(witness.n, 1 + difference * i);
  }
};

inline RunWitness build_run_witness(Base b, std::int64_t N,
                                    const WitnessOptions& opts = {}) {
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  RunWitness rw;
  rw.base = b.value();
  rw.count = N;
  rw.difference = default_difference(b);

  if (b.value() == -3) {
    // Every positive odd number is happy here, so no shift is needed:
    // n = 0 and k = the longest time-to-1 among the members (1 is fixed,
    // so any larger k also works).
    const PowerParams p{2, b};
    std::int64_t k = 1;
    for (std::int64_t i = 0; i < N; ++i) {
      BigInt v = 1 + 2 * i;
      std::int64_t steps = 0;
      while (v != 1) {
        v = power_sum(p, v);
        if (++steps > 1000000) {
          throw std::logic_error("odd member failed to reach 1; this is a bug");
        }
      }
      k = std::max(k, steps);
    }
    rw.witness = GoodWitness{TowerNumeral::exact(0), k, 1};
    return rw;
  }

  if (!qualifying_base(b)) {
    throw std::invalid_argument(
        b.value() == -2
            ? "no run witness exists for base -2: happiness there pins the "
              "residue 1 mod 3, and consecutive integers leave it"
            : "no merge machinery exists for this base");
  }
  std::vector<BigInt> T;
  T.reserve(static_cast<std::size_t>(N));
  for (std::int64_t i = 0; i < N; ++i) T.push_back(1 + rw.difference * i);
  auto [witness, cert] = good_witness(PowerParams(2, b), std::move(T), 1, opts);
  rw.witness = std::move(witness);
  rw.certificate = std::move(cert);
  return rw;
}

}  // namespace neghappy
