#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "neghappy/atlas.hpp"
#include "neghappy/goodset.hpp"
#include "neghappy/happy.hpp"
#include "neghappy/rle.hpp"
#include "neghappy/runs.hpp"
#include "neghappy/tower.hpp"

// JSON bindings.  Arbitrary-precision integers travel as decimal strings;
// everything guaranteed to fit an int64 travels as a JSON number.  Numeral
// and certificate readers go through the library constructors, so malformed
// documents are rejected with the same errors as malformed arguments.

namespace neghappy {

using nlohmann::json;

inline json to_json_bigint(const BigInt& v) { return v.str(); }

inline BigInt bigint_from_json(const json& j) {
  if (j.is_number_integer()) return BigInt{j.get<std::int64_t>()};
  if (j.is_string()) return BigInt{j.get<std::string>()};
  throw std::invalid_argument("expected an integer or decimal string");
}

// --- run-length digits (write-only: readers always rebuild from values) ---

inline void to_json(json& j, const Run& r) {
  j = json{{"digit", r.digit}, {"count", to_json_bigint(r.count)}};
}

inline void to_json(json& j, const RleDigits& x) {
  j = json{{"runs", x.runs()}};  // little-endian, lowest positions first
}

// --- tower numerals ---

inline void to_json(json& j, const TowerNumeral& n) {
  switch (n.kind()) {
    case TowerNumeral::Kind::exact:
      j = json{{"kind", "exact"}, {"value", to_json_bigint(n.exact_value())}};
      return;
    case TowerNumeral::Kind::repunit:
      j = json{{"kind", "repunit"}, {"count", n.count()}, {"shift", n.shift()}};
      return;
    case TowerNumeral::Kind::offset:
      j = json{{"kind", "offset"},
               {"inner", n.inner()},
               {"delta", to_json_bigint(n.delta())}};
      return;
  }
  throw std::logic_error("unreachable");
}

inline void from_json(const json& j, TowerNumeral& n) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "exact") {
    n = TowerNumeral::exact(bigint_from_json(j.at("value")));
  } else if (kind == "repunit") {
    n = TowerNumeral::repunit(j.at("count").get<TowerNumeral>(),
                              j.at("shift").get<std::int64_t>());
  } else if (kind == "offset") {
    n = TowerNumeral::offset(j.at("inner").get<TowerNumeral>(),
                             bigint_from_json(j.at("delta")));
  } else {
    throw std::invalid_argument("unknown numeral kind '" + kind + "'");
  }
}

// --- atlas rows ---

inline void to_json(json& j, const CycleAtlas& a) {
  j = json{{"exponent", a.exponent},
           {"base", a.base},
           {"fixed_points", a.fixed_points},
           {"cycles", a.cycles},
           {"u", a.u_set},
           {"smallest_happy_gt1", a.smallest_happy_gt1}};
  j["largest_negative_happy"] =
      a.largest_negative_happy ? json(*a.largest_negative_happy) : json();
}

inline void from_json(const json& j, CycleAtlas& a) {
  a = CycleAtlas{};
  j.at("exponent").get_to(a.exponent);
  j.at("base").get_to(a.base);
  j.at("fixed_points").get_to(a.fixed_points);
  j.at("cycles").get_to(a.cycles);
  j.at("u").get_to(a.u_set);
  j.at("smallest_happy_gt1").get_to(a.smallest_happy_gt1);
  const auto& largest = j.at("largest_negative_happy");
  a.largest_negative_happy =
      largest.is_null() ? std::nullopt
                        : std::optional(largest.get<std::int64_t>());
}

// --- certificates ---

inline void to_json(json& j, const CertStep& st) {
  switch (st.kind) {
    case CertStep::Kind::s_peel:
      j = json{{"kind", "s_peel"}, {"shift", st.shift}};
      return;
    case CertStep::Kind::i_peel:
      j = json{{"kind", "i_peel"}, {"m", to_json_bigint(st.m)}};
      return;
    case CertStep::Kind::singleton_base:
      j = json{{"kind", "singleton_base"}, {"x", st.x}, {"r", st.r}};
      return;
  }
  throw std::logic_error("unreachable");
}

inline void from_json(const json& j, CertStep& st) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "s_peel") {
    st = CertStep::s_peel(j.at("shift").get<std::int64_t>());
  } else if (kind == "i_peel") {
    st = CertStep::i_peel(bigint_from_json(j.at("m")));
  } else if (kind == "singleton_base") {
    st = CertStep::singleton(j.at("x").get<std::int64_t>(),
                             j.at("r").get<std::int64_t>());
  } else {
    throw std::invalid_argument("unknown step kind '" + kind + "'");
  }
}

inline void to_json(json& j, const CertLevel& lvl) {
  json set = json::array();
  for (const BigInt& t : lvl.set) set.push_back(to_json_bigint(t));
  j = json{{"set", std::move(set)},
           {"n", lvl.n},
           {"k", lvl.k},
           {"step", lvl.step}};
}

inline void from_json(const json& j, CertLevel& lvl) {
  lvl.set.clear();
  for (const auto& item : j.at("set")) lvl.set.push_back(bigint_from_json(item));
  j.at("n").get_to(lvl.n);
  j.at("k").get_to(lvl.k);
  j.at("step").get_to(lvl.step);
}

inline void to_json(json& j, const WitnessCertificate& cert) {
  j = json{{"exponent", cert.exponent},
           {"base", cert.base},
           {"target", cert.target},
           {"levels", cert.levels}};
}

inline void from_json(const json& j, WitnessCertificate& cert) {
  j.at("exponent").get_to(cert.exponent);
  j.at("base").get_to(cert.base);
  j.at("target").get_to(cert.target);
  j.at("levels").get_to(cert.levels);
}

inline void to_json(json& j, const GoodWitness& w) {
  j = json{{"n", w.n}, {"k", w.k}, {"u", w.u}};
}

inline void from_json(const json& j, GoodWitness& w) {
  j.at("n").get_to(w.n);
  j.at("k").get_to(w.k);
  j.at("u").get_to(w.u);
}

inline void to_json(json& j, const VerifyReport& r) {
  j = json{{"ok", r.ok},
           {"issues", r.issues},
           {"levels_checked", r.levels_checked},
           {"splices_checked", r.splices_checked},
           {"end_to_end_checked", r.end_to_end_checked}};
}

inline void to_json(json& j, const RunWitness& rw) {
  j = json{{"base", rw.base},
           {"count", rw.count},
           {"difference", rw.difference},
           {"witness", rw.witness}};
  j["certificate"] = rw.certificate ? json(*rw.certificate) : json();
}

inline void from_json(const json& j, RunWitness& rw) {
  j.at("base").get_to(rw.base);
  j.at("count").get_to(rw.count);
  j.at("difference").get_to(rw.difference);
  j.at("witness").get_to(rw.witness);
  const auto& cert = j.at("certificate");
  rw.certificate = cert.is_null()
                       ? std::nullopt
                       : std::optional(cert.get<WitnessCertificate>());
}

// --- scans ---

inline void to_json(json& j, const Trajectory<BigInt>& t) {
  json iterates = json::array();
  for (const BigInt& v : t.iterates) iterates.push_back(to_json_bigint(v));
  j = json{{"start", to_json_bigint(t.start)},
           {"iterates", std::move(iterates)},
           {"entry_index", t.entry_index}};
}

inline void to_json(json& j, const RunResult& r) {
  j = json{{"found", r.found}, {"checked", r.checked}};
  j["first_start"] = r.first_start ? json(*r.first_start) : json();
}

inline void to_json(json& j, const CharacterizationReport& r) {
  j = json{{"ok", r.ok}, {"checked", r.checked}};
  j["counterexample"] = r.counterexample ? json(*r.counterexample) : json();
}

}  // namespace neghappy
