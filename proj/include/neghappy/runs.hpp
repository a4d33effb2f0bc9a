#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "neghappy/atlas.hpp"
#include "neghappy/happy.hpp"

namespace neghappy {

/// gcd(2, b-1): the progression difference the constructions support —
/// 2 for odd bases (happiness fixes parity there), 1 for even bases.
inline std::int64_t default_difference(Base b) {
  return std::gcd<std::int64_t, std::int64_t>(2, b.value() - 1);
}

/// Happiness testing with a bounded memo.  Verdicts for values below the
/// cap are stored in a flat table; larger values are simply recomputed, so
/// memory stays bounded no matter the scan range.  The useful hits are the
/// small values every trajectory collapses into after one S step.
/// Not safe for concurrent use; give each worker its own instance.
class HappyCache {
 public:
  explicit HappyCache(const PowerParams& p, std::size_t cap = 1u << 20)
      : p_(p), table_(std::max<std::size_t>(cap, 2), kUnknown) {
    table_[0] = 0;
    table_[1] = 1;
    // With e = 2 the threshold bound makes the periodic set enumerable,
    // which turns cycle detection into a membership test.
    if (p.exponent == 2 && threshold<BigInt>(p.base) <= (1 << 26)) {
      const auto u = u_set(p);
      u_mask_.assign(static_cast<std::size_t>(u.back()) + 1, 0);
      for (std::int64_t v : u) u_mask_[static_cast<std::size_t>(v)] = 1;
      u_available_ = true;
    }
  }

  const PowerParams& params() const { return p_; }

  bool is_happy(std::int64_t a) {
    if (a == 0) return false;
    path_.clear();
    std::int64_t v = a;
    bool verdict;
    for (;;) {
      if (v >= 0 && static_cast<std::size_t>(v) < table_.size() &&
          table_[static_cast<std::size_t>(v)] != kUnknown) {
        verdict = table_[static_cast<std::size_t>(v)] != 0;
        break;
      }
      if (u_available_ && v >= 0 &&
          static_cast<std::size_t>(v) < u_mask_.size() &&
          u_mask_[static_cast<std::size_t>(v)]) {
        verdict = v == 1;
        break;
      }
      if (!u_available_) {
        verdict = neghappy::is_happy(p_, v);
        break;
      }
      path_.push_back(v);
      v = power_sum(p_, v);
    }
    for (std::int64_t x : path_) {
      if (x >= 0 && static_cast<std::size_t>(x) < table_.size()) {
        table_[static_cast<std::size_t>(x)] = verdict ? 1 : 0;
      }
    }
    return verdict;
  }

 private:
  static constexpr signed char kUnknown = -1;
  PowerParams p_;
  std::vector<signed char> table_;
  std::vector<char> u_mask_;
  bool u_available_ = false;
  std::vector<std::int64_t> path_;
};

struct CharacterizationReport {
  bool ok = true;
  std::optional<std::int64_t> counterexample;
  std::int64_t checked = 0;
};

/// Exhaustively checks the closed-form happiness tests for the two bases
/// that have one: b = -2 (happy iff a = 1 mod 3) and b = -3 (happy iff a
/// odd), over 1 <= |a| <= limit.
inline CharacterizationReport verify_characterization(Base b,
                                                      std::int64_t limit) {
  if (b.value() != -2 && b.value() != -3) {
    throw std::invalid_argument(
        "characterization is only known for bases -2 and -3");
  }
  if (limit < 1) throw std::invalid_argument("limit must be >= 1");
  HappyCache cache{PowerParams(2, b),
                   static_cast<std::size_t>(std::min<std::int64_t>(
                       limit + 1, std::int64_t{1} << 24))};
  CharacterizationReport report;
  auto expected = [&](std::int64_t a) {
    if (b.value() == -2) return ((a % 3) + 3) % 3 == 1;
    return a % 2 != 0;
  };
  for (std::int64_t mag = 1; mag <= limit; ++mag) {
    for (std::int64_t a : {mag, -mag}) {
      ++report.checked;
      if (cache.is_happy(a) != expected(a)) {
        report.ok = false;
        report.counterexample = a;
        return report;
      }
    }
  }
  return report;
}

struct RunQuery {
  PowerParams params{2, Base{-2}};
  std::int64_t difference = 1;  // d >= 1
  std::int64_t length = 1;      // L >= 1
  std::int64_t start = 1;
  std::int64_t budget = 1;      // how many starts to test
  int jobs = 1;                 // worker threads; result is job-independent
  std::size_t memo_cap = 1u << 20;
};

struct RunResult {
  bool found = false;
  std::optional<std::int64_t> first_start;
  std::int64_t checked = 0;
};

namespace detail {

/// First start in [first, first+count) whose whole progression is happy.
inline std::optional<std::int64_t> scan_chunk(const RunQuery& q,
                                              HappyCache& cache,
                                              std::int64_t first,
                                              std::int64_t count) {
  for (std::int64_t s = first; s < first + count; ++s) {
    bool all = true;
    for (std::int64_t j = 0; j < q.length; ++j) {
      if (!cache.is_happy(s + j * q.difference)) {
        all = false;
        break;
      }
    }
    if (all) return s;
  }
  return std::nullopt;
}

}  // namespace detail

/// Scans starts ascending from q.start, testing whether s, s+d, ...,
/// s+(L-1)d are all happy.  Returns the minimal hit (re-verified without
/// the memo) or an honest not-found with the full budget consumed.  With
/// jobs > 1 the range is sharded into ordered chunks and reduced to the
/// same minimal answer the sequential scan gives.
inline RunResult find_run(const RunQuery& q) {
  if (q.difference < 1) throw std::invalid_argument("difference must be >= 1");
  if (q.length < 1) throw std::invalid_argument("length must be >= 1");
  if (q.budget < 1) throw std::invalid_argument("budget must be >= 1");
  if (q.jobs < 1) throw std::invalid_argument("jobs must be >= 1");

  std::optional<std::int64_t> hit;
  if (q.jobs == 1 || q.budget < 4096) {
    HappyCache cache{q.params, q.memo_cap};
    hit = detail::scan_chunk(q, cache, q.start, q.budget);
  } else {
    const std::int64_t chunk =
        std::max<std::int64_t>(1024, q.budget / (std::int64_t{q.jobs} * 64));
    const std::int64_t n_chunks = (q.budget + chunk - 1) / chunk;
    std::atomic<std::int64_t> next{0};
    std::mutex mu;
    std::int64_t best_chunk = n_chunks;  // sentinel: none found
    std::int64_t best_start = 0;
    auto worker = [&] {
      HappyCache cache{q.params, q.memo_cap};
      for (;;) {
        const std::int64_t c = next.fetch_add(1);
        if (c >= n_chunks) return;
        {
          std::lock_guard lock(mu);
          if (c > best_chunk) return;  // an earlier chunk already hit
        }
        const std::int64_t lo = q.start + c * chunk;
        const std::int64_t count = std::min(chunk, q.budget - c * chunk);
        if (auto s = detail::scan_chunk(q, cache, lo, count)) {
          std::lock_guard lock(mu);
          if (c < best_chunk) {
            best_chunk = c;
            best_start = *s;
          }
        }
      }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < q.jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (best_chunk < n_chunks) hit = best_start;
  }

  RunResult result;
  if (!hit) {
    result.checked = q.budget;
    return result;
  }
  // Re-verify the report with the memo out of the loop.
  for (std::int64_t j = 0; j < q.length; ++j) {
    if (!is_happy(q.params, *hit + j * q.difference)) {
      throw std::logic_error("memoized scan and direct recomputation "
                             "disagree; this is a bug");
    }
  }
  result.found = true;
  result.first_start = *hit;
  result.checked = *hit - q.start + 1;
  return result;
}

}  // namespace neghappy
