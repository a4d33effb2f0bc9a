#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "neghappy/happy.hpp"
#include "neghappy/negabase.hpp"

namespace neghappy {

/// Everything periodic about one (e, b): fixed points, cycles, their union
/// U, and the extremal happy numbers reported per base.
struct CycleAtlas {
  int exponent = 2;
  std::int64_t base = -2;
  std::vector<std::int64_t> fixed_points;         // ascending; contains 1
  std::vector<std::vector<std::int64_t>> cycles;  // min first, sorted by min
  std::vector<std::int64_t> u_set;                // ascending union
  std::int64_t smallest_happy_gt1 = 0;
  std::optional<std::int64_t> largest_negative_happy;  // absent if floor hit

  bool in_u(std::int64_t v) const {
    return std::binary_search(u_set.begin(), u_set.end(), v);
  }
};

struct AtlasOptions {
  /// Start values scanned are [1, search_bound].  Defaults to threshold(b)
  /// when e = 2; mandatory otherwise (no proven bound exists).
  std::optional<std::int64_t> search_bound;
  /// The downward scan for the largest negative happy number stops here.
  std::int64_t negative_floor = -1'000'000;
};

/// Rotates a cycle so its minimum element comes first.
inline std::vector<std::int64_t> min_first(std::vector<std::int64_t> cycle) {
  if (cycle.empty()) return cycle;
  auto at = std::min_element(cycle.begin(), cycle.end());
  std::rotate(cycle.begin(), at, cycle.end());
  return cycle;
}

/// The positive integers on periodic orbits, found by walking the orbit of
/// every start in [1, bound] and classifying each visited value.  Every
/// cycle contains an element <= threshold (its elements recur forever, and
/// values above the threshold strictly decrease), so the scan is complete.
inline std::vector<std::int64_t> periodic_values(const PowerParams& p,
                                                 std::int64_t bound) {
  std::unordered_map<std::int64_t, bool> verdict;  // value -> periodic?
  std::vector<std::int64_t> path;
  std::unordered_map<std::int64_t, std::size_t> position;
  for (std::int64_t a = 1; a <= bound; ++a) {
    path.clear();
    position.clear();
    std::int64_t v = a;
    for (;;) {
      if (verdict.contains(v)) {
        for (std::int64_t x : path) verdict[x] = false;
        break;
      }
      auto [it, fresh] = position.emplace(v, path.size());
      if (!fresh) {
        for (std::size_t i = 0; i < it->second; ++i) verdict[path[i]] = false;
        for (std::size_t i = it->second; i < path.size(); ++i) {
          verdict[path[i]] = true;
        }
        break;
      }
      path.push_back(v);
      v = power_sum(p, v);
    }
  }
  std::vector<std::int64_t> u;
  for (const auto& [value, periodic] : verdict) {
    if (periodic) u.push_back(value);
  }
  std::sort(u.begin(), u.end());
  return u;
}

/// Full enumeration for one (e, b).  Deterministic canonical ordering:
/// fixed points ascending, cycles rotated min-first and sorted by minimum.
/// Also scans upward from 2 for the smallest happy number and downward
/// from -1 for the largest negative happy number.
inline CycleAtlas enumerate(const PowerParams& p, const AtlasOptions& opts = {}) {
  std::int64_t bound;
  if (opts.search_bound) {
    bound = *opts.search_bound;
    if (bound < 1) throw std::invalid_argument("search bound must be >= 1");
  } else if (p.exponent == 2) {
    bound = threshold<std::int64_t>(p.base);
  } else {
    throw std::invalid_argument(
        "no decrease threshold is proven for e != 2; pass an explicit "
        "search bound");
  }

  CycleAtlas atlas;
  atlas.exponent = p.exponent;
  atlas.base = p.base.value();
  atlas.u_set = periodic_values(p, bound);

  std::set<std::int64_t> assigned;
  for (std::int64_t v : atlas.u_set) {
    if (assigned.contains(v)) continue;
    std::vector<std::int64_t> orbit{v};
    for (std::int64_t w = power_sum(p, v); w != v; w = power_sum(p, w)) {
      orbit.push_back(w);
    }
    assigned.insert(orbit.begin(), orbit.end());
    if (orbit.size() == 1) {
      atlas.fixed_points.push_back(v);
    } else {
      atlas.cycles.push_back(min_first(std::move(orbit)));
    }
  }
  std::sort(atlas.fixed_points.begin(), atlas.fixed_points.end());
  std::sort(atlas.cycles.begin(), atlas.cycles.end(),
            [](const auto& x, const auto& y) { return x.front() < y.front(); });

  for (std::int64_t a = 2;; ++a) {
    if (is_happy(p, a)) {
      atlas.smallest_happy_gt1 = a;
      break;
    }
  }
  for (std::int64_t a = -1; a >= opts.negative_floor; --a) {
    if (is_happy(p, a)) {
      atlas.largest_negative_happy = a;
      break;
    }
  }
  return atlas;
}

/// Just the U-set (ascending).
inline std::vector<std::int64_t> u_set(const PowerParams& p,
                                       const AtlasOptions& opts = {}) {
  std::int64_t bound;
  if (opts.search_bound) {
    bound = *opts.search_bound;
  } else if (p.exponent == 2) {
    bound = threshold<std::int64_t>(p.base);
  } else {
    throw std::invalid_argument(
        "no decrease threshold is proven for e != 2; pass an explicit "
        "search bound");
  }
  return periodic_values(p, bound);
}

/// Rows for bases first..last inclusive (both <= -2, first >= last is not
/// required; rows always run from the base closest to zero downward, the
/// order the published table uses).
inline std::vector<CycleAtlas> atlas_range(std::int64_t lo, std::int64_t hi,
                                           int exponent = 2,
                                           const AtlasOptions& opts = {}) {
  if (lo > hi) std::swap(lo, hi);
  std::vector<CycleAtlas> rows;
  for (std::int64_t b = hi; b >= lo; --b) {
    rows.push_back(enumerate(PowerParams(exponent, Base(b)), opts));
  }
  return rows;
}

/// True when the two atlases agree with cycles compared as rotation
/// classes (robust against fixtures written with a different starting
/// element).
inline bool same_up_to_rotation(const CycleAtlas& x, const CycleAtlas& y) {
  auto canon = [](const CycleAtlas& a) {
    std::vector<std::vector<std::int64_t>> c;
    c.reserve(a.cycles.size());
    for (const auto& cycle : a.cycles) c.push_back(min_first(cycle));
    std::sort(c.begin(), c.end());
    return c;
  };
  return x.exponent == y.exponent && x.base == y.base &&
         x.fixed_points == y.fixed_points && canon(x) == canon(y) &&
         x.smallest_happy_gt1 == y.smallest_happy_gt1 &&
         x.largest_negative_happy == y.largest_negative_happy;
}

inline std::string render_row_cycles(const CycleAtlas& row) {
  if (row.cycles.empty()) return "None";
  std::string out;
  for (const auto& cycle : row.cycles) {
    if (!out.empty()) out += ", ";
    out += "(";
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      if (i > 0) out += ",";
      out += std::to_string(cycle[i]);
    }
    out += ")";
  }
  return out;
}

/// Aligned-text rendering, one row per base, five columns as published.
inline std::string render_table(const std::vector<CycleAtlas>& rows) {
  std::vector<std::array<std::string, 5>> cells;
  cells.push_back({"Base", "Fixed Points", "Cycles", "Smallest happy > 1",
                   "Largest happy < 0"});
  for (const CycleAtlas& row : rows) {
    std::string fixed;
    for (std::size_t i = 0; i < row.fixed_points.size(); ++i) {
      if (i > 0) fixed += ",";
      fixed += std::to_string(row.fixed_points[i]);
    }
    cells.push_back({std::to_string(row.base), fixed, render_row_cycles(row),
                     std::to_string(row.smallest_happy_gt1),
                     row.largest_negative_happy
                         ? std::to_string(*row.largest_negative_happy)
                         : "none found"});
  }
  std::array<std::size_t, 5> width{};
  for (const auto& r : cells) {
    for (std::size_t c = 0; c < 5; ++c) width[c] = std::max(width[c], r[c].size());
  }
  std::string out;
  for (const auto& r : cells) {
    for (std::size_t c = 0; c < 5; ++c) {
      out += r[c];
      if (c + 1 < 5) out += std::string(width[c] - r[c].size() + 2, ' ');
    }
    out += '\n';
  }
  return out;
}

}  // namespace neghappy
