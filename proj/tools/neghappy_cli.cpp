// Command-line front end.  Exit codes: 0 on success, 1 for malformed
// input or domain errors, 2 for honest negative answers (value unhappy,
// no run found, certificate rejected).  Results go to stdout; progress
// and diagnostics go to stderr.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "neghappy/neghappy.hpp"

namespace {

using namespace neghappy;

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kNegative = 2;

std::size_t digit_budget_default() {
  if (const char* env = std::getenv("NEGHAPPY_BUDGET")) {
    try {
      const long long v = std::stoll(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring unparsable NEGHAPPY_BUDGET='" << env
              << "'\n";
  }
  return kDefaultDigitBudget;
}

BigInt parse_int(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty integer");
  std::size_t i = text[0] == '-' ? 1 : 0;
  if (i == text.size()) throw std::invalid_argument("bad integer '" + text + "'");
  for (; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      throw std::invalid_argument("bad integer '" + text + "'");
    }
  }
  return BigInt{text};
}

std::vector<BigInt> parse_int_list(const std::string& text) {
  std::vector<BigInt> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_int(item));
  }
  if (out.empty()) throw std::invalid_argument("empty set '" + text + "'");
  return out;
}

// "-10..-2" (either order), or a single base.
std::pair<std::int64_t, std::int64_t> parse_base_range(const std::string& text) {
  const auto dots = text.find("..", 1);  // skip a leading '-'
  if (dots == std::string::npos) {
    const std::int64_t b = std::stoll(text);
    return {b, b};
  }
  return {std::stoll(text.substr(0, dots)), std::stoll(text.substr(dots + 2))};
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

std::string join64(const std::vector<std::int64_t>& xs) {
  std::string out;
  for (std::int64_t x : xs) {
    if (!out.empty()) out += ", ";
    out += std::to_string(x);
  }
  return out;
}

int cmd_expand(std::int64_t base, const std::string& value, bool as_json) {
  const Base b{base};
  const DigitVec d = expand(parse_int(value), b);
  if (as_json) {
    json digits = json::array();
    for (auto it = d.digits.rbegin(); it != d.digits.rend(); ++it) {
      digits.push_back(*it);
    }
    emit(json{{"base", base}, {"value", value}, {"digits", digits}});
  } else {
    std::cout << format_digits(d) << "\n";
  }
  return kOk;
}

int cmd_eval(std::optional<std::int64_t> base, const std::string& text,
             bool as_json) {
  const ParsedDigits parsed = parse_digits(text);
  std::int64_t bval;
  if (parsed.base && base && *parsed.base != *base) {
    throw std::invalid_argument("digit string prefix disagrees with --base");
  } else if (parsed.base) {
    bval = *parsed.base;
  } else if (base) {
    bval = *base;
  } else {
    throw std::invalid_argument("no base: pass --base or prefix '<base>:'");
  }
  const Base b{bval};
  const BigInt v = evaluate(normalized(parsed.digits, b), b);
  if (as_json) {
    emit(json{{"base", bval}, {"value", v.str()}});
  } else {
    std::cout << v.str() << "\n";
  }
  return kOk;
}

int cmd_step(std::int64_t base, int exponent, const std::string& value,
             bool as_json) {
  const PowerParams p{exponent, Base{base}};
  const BigInt s = power_sum(p, parse_int(value));
  if (as_json) {
    emit(json{{"base", base}, {"exponent", exponent}, {"value", value},
              {"step", s.str()}});
  } else {
    std::cout << s.str() << "\n";
  }
  return kOk;
}

int cmd_trajectory(std::int64_t base, int exponent, const std::string& value,
                   bool as_json) {
  const PowerParams p{exponent, Base{base}};
  const BigInt start = parse_int(value);
  if (start == 0) throw std::invalid_argument("trajectory is undefined at 0");
  const auto t = trajectory(p, start);
  if (as_json) {
    emit(json(t));
    return kOk;
  }
  std::cout << "start: " << t.start.str() << "\n";
  for (std::size_t i = 0; i < t.iterates.size(); ++i) {
    std::cout << "S^" << i + 1 << ": " << t.iterates[i].str() << "\n";
  }
  std::cout << "cycle entry: S^" << t.entry_index + 1 << "\n";
  return kOk;
}

int cmd_happy(std::int64_t base, int exponent, const std::string& value,
              bool as_json) {
  const PowerParams p{exponent, Base{base}};
  const BigInt a = parse_int(value);
  const bool happy = is_happy(p, a);
  std::optional<std::int64_t> steps;
  if (happy) {
    std::int64_t k = 0;
    BigInt v = a;
    while (v != 1) {
      v = power_sum(p, v);
      ++k;
    }
    steps = k;
  }
  if (as_json) {
    json j{{"base", base}, {"exponent", exponent}, {"value", value},
           {"happy", happy}};
    j["steps"] = steps ? json(*steps) : json();
    emit(j);
  } else if (happy) {
    std::cout << value << " is happy in base " << base << " (" << *steps
              << " steps to 1)\n";
  } else {
    std::cout << value << " is unhappy in base " << base << "\n";
  }
  return happy ? kOk : kNegative;
}

int cmd_cycles(std::int64_t base, int exponent,
               std::optional<std::int64_t> bound, bool as_json) {
  AtlasOptions opts;
  opts.search_bound = bound;
  const CycleAtlas atlas = enumerate(PowerParams(exponent, Base{base}), opts);
  if (as_json) {
    emit(json(atlas));
    return kOk;
  }
  std::cout << "exponent: " << atlas.exponent << "\n"
            << "base: " << atlas.base << "\n"
            << "fixed points: " << join64(atlas.fixed_points) << "\n"
            << "cycles: " << render_row_cycles(atlas) << "\n"
            << "u: " << join64(atlas.u_set) << "\n"
            << "smallest happy > 1: " << atlas.smallest_happy_gt1 << "\n"
            << "largest negative happy: "
            << (atlas.largest_negative_happy
                    ? std::to_string(*atlas.largest_negative_happy)
                    : std::string("none above the floor"))
            << "\n";
  return kOk;
}

int cmd_table(const std::string& range, int exponent, bool as_json) {
  auto [lo, hi] = parse_base_range(range);
  const auto rows = atlas_range(lo, hi, exponent);
  if (as_json) {
    emit(json(rows));
  } else {
    std::cout << render_table(rows);
  }
  return kOk;
}

int cmd_characterize(std::int64_t base, std::int64_t limit, bool as_json) {
  const Base b{base};
  const auto report = verify_characterization(b, limit);
  if (as_json) {
    emit(json(report));
  } else if (report.ok) {
    std::cout << "base " << base << ": happy iff "
              << (base == -2 ? "a = 1 (mod 3)" : "a is odd")
              << ", verified for 1 <= |a| <= " << limit << "\n";
  } else {
    std::cout << "counterexample: " << *report.counterexample << "\n";
  }
  return report.ok ? kOk : kNegative;
}

int cmd_runs(std::int64_t base, int exponent, std::int64_t difference,
             std::int64_t length, std::int64_t start, std::int64_t budget,
             int jobs, bool as_json) {
  RunQuery q{PowerParams(exponent, Base{base}), difference, length, start,
             budget, jobs};
  std::cerr << "scanning base " << base << ", d = " << difference
            << ", L = " << length << ", starts " << start << ".."
            << start + budget - 1 << "\n";
  const RunResult r = find_run(q);
  if (as_json) {
    json j(r);
    j["base"] = base;
    j["difference"] = difference;
    j["length"] = length;
    emit(j);
  } else if (r.found) {
    std::cout << "first start: " << *r.first_start << " (checked " << r.checked
              << " starts)\n";
  } else {
    std::cout << "no run of " << length << " found in " << r.checked
              << " starts\n";
  }
  return r.found ? kOk : kNegative;
}

int cmd_witness(std::int64_t base, std::optional<std::int64_t> count,
                const std::string& set_text, std::int64_t target,
                std::size_t budget, const std::string& out_path,
                bool as_json) {
  const Base b{base};
  WitnessOptions opts;
  opts.digit_budget = budget;

  json doc;
  const GoodWitness* w = nullptr;
  const WitnessCertificate* cert = nullptr;

  std::optional<RunWitness> run_witness;
  std::optional<std::pair<GoodWitness, WitnessCertificate>> set_witness;
  if (!set_text.empty()) {
    if (count) {
      throw std::invalid_argument("pass either --count or --set, not both");
    }
    set_witness = good_witness(PowerParams(2, b), parse_int_list(set_text),
                               target, opts);
    w = &set_witness->first;
    cert = &set_witness->second;
    doc = json{{"exponent", 2}, {"base", base}, {"target", target},
               {"witness", *w}, {"certificate", *cert}};
  } else {
    run_witness = build_run_witness(b, count.value_or(2), opts);
    w = &run_witness->witness;
    if (run_witness->certificate) cert = &*run_witness->certificate;
    doc = json(*run_witness);
  }

  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot write '" + out_path + "'");
    out << doc.dump(2) << "\n";
  }
  if (as_json) {
    emit(doc);
    return kOk;
  }

  std::cout << "base: " << base << "\n";
  if (run_witness) {
    std::cout << "count: " << run_witness->count
              << "\ndifference: " << run_witness->difference << "\n";
  }
  std::cout << "u: " << w->u << "\n"
            << "n: " << w->n.describe() << "\n"
            << "k: " << w->k << "\n";
  if (const auto digits = w->n.try_digit_count(b, budget)) {
    std::cout << "digits(n): " << digits->str() << "\n";
  } else {
    std::cout << "digits(n): beyond the digit budget\n";
  }
  if (cert) {
    const auto report = verify_certificate(*cert, budget);
    std::cout << "levels: " << cert->levels.size() << "\n"
              << "verified: " << (report.ok ? "yes" : "NO") << " (splices "
              << report.splices_checked << ", end-to-end "
              << report.end_to_end_checked << ")\n";
    if (!report.ok) return kNegative;
  } else {
    std::cout << "certificate: none needed (every odd value is happy)\n";
  }
  return kOk;
}

int cmd_verify(const std::string& path, std::size_t budget, bool as_json) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read '" + path + "'");
  json doc = json::parse(in);
  if (doc.contains("certificate")) {
    if (doc["certificate"].is_null()) {
      throw std::invalid_argument("document carries no certificate");
    }
    doc = doc["certificate"];
  }
  const auto cert = doc.get<WitnessCertificate>();
  const VerifyReport report = verify_certificate(cert, budget);
  if (as_json) {
    emit(json(report));
  } else {
    std::cout << "levels checked: " << report.levels_checked << "\n"
              << "splice identities replayed: " << report.splices_checked
              << "\n"
              << "members iterated to target: " << report.end_to_end_checked
              << "\n";
    for (const std::string& issue : report.issues) {
      std::cout << "issue: " << issue << "\n";
    }
    std::cout << (report.ok ? "ok" : "REJECTED") << "\n";
  }
  return report.ok ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"happy numbers in negative bases"};
  app.require_subcommand(1);

  const std::size_t default_budget = digit_budget_default();

  // expand
  std::string expand_value;
  bool expand_json = false;
  std::int64_t expand_base = 0;
  auto* expand_cmd = app.add_subcommand("expand", "digits of a value");
  expand_cmd->add_option("-b,--base", expand_base, "base <= -2")->required();
  expand_cmd->add_option("value", expand_value, "integer to expand")
      ->required();
  expand_cmd->add_flag("--json", expand_json);

  // eval
  std::string eval_digits;
  bool eval_json = false;
  std::optional<std::int64_t> eval_base;
  auto* eval_cmd = app.add_subcommand("eval", "value of a digit string");
  eval_cmd->add_option("-b,--base", eval_base, "base <= -2");
  eval_cmd->add_option("digits", eval_digits,
                       "digit string, optionally '<base>:' prefixed")
      ->required();
  eval_cmd->add_flag("--json", eval_json);

  // step
  std::int64_t step_base = 0;
  int step_exp = 2;
  std::string step_value;
  bool step_json = false;
  auto* step_cmd = app.add_subcommand("step", "one application of S");
  step_cmd->add_option("-b,--base", step_base)->required();
  step_cmd->add_option("-e,--exponent", step_exp);
  step_cmd->add_option("value", step_value)->required();
  step_cmd->add_flag("--json", step_json);

  // trajectory
  std::int64_t traj_base = 0;
  int traj_exp = 2;
  std::string traj_value;
  bool traj_json = false;
  auto* traj_cmd = app.add_subcommand("trajectory", "orbit until it repeats");
  traj_cmd->add_option("-b,--base", traj_base)->required();
  traj_cmd->add_option("-e,--exponent", traj_exp);
  traj_cmd->add_option("value", traj_value)->required();
  traj_cmd->add_flag("--json", traj_json);

  // happy
  std::int64_t happy_base = 0;
  int happy_exp = 2;
  std::string happy_value;
  bool happy_json = false;
  auto* happy_cmd = app.add_subcommand("happy", "test one value");
  happy_cmd->add_option("-b,--base", happy_base)->required();
  happy_cmd->add_option("-e,--exponent", happy_exp);
  happy_cmd->add_option("value", happy_value)->required();
  happy_cmd->add_flag("--json", happy_json);

  // cycles
  std::int64_t cyc_base = 0;
  int cyc_exp = 2;
  std::optional<std::int64_t> cyc_bound;
  bool cyc_json = false;
  auto* cyc_cmd =
      app.add_subcommand("cycles", "fixed points and cycles for one base");
  cyc_cmd->add_option("-b,--base", cyc_base)->required();
  cyc_cmd->add_option("-e,--exponent", cyc_exp);
  cyc_cmd->add_option("--bound", cyc_bound,
                      "search bound (mandatory when e > 2)");
  cyc_cmd->add_flag("--json", cyc_json);

  // table
  std::string table_range;
  int table_exp = 2;
  bool table_json = false;
  auto* table_cmd = app.add_subcommand("table", "atlas rows for a base range");
  table_cmd->add_option("-b,--bases", table_range, "range like '-10..-2'")
      ->required();
  table_cmd->add_option("-e,--exponent", table_exp);
  table_cmd->add_flag("--json", table_json);

  // characterize
  std::int64_t char_base = 0;
  std::int64_t char_limit = 1000000;
  bool char_json = false;
  auto* char_cmd = app.add_subcommand(
      "characterize", "verify the closed-form tests for -2 and -3");
  char_cmd->add_option("-b,--base", char_base)->required();
  char_cmd->add_option("--limit", char_limit);
  char_cmd->add_flag("--json", char_json);

  // runs
  std::int64_t runs_base = 0;
  int runs_exp = 2;
  std::int64_t runs_d = 1, runs_len = 2, runs_start = 1, runs_budget = 1000000;
  int runs_jobs = 1;
  bool runs_json = false;
  auto* runs_cmd =
      app.add_subcommand("runs", "search for d-consecutive happy runs");
  runs_cmd->add_option("-b,--base", runs_base)->required();
  runs_cmd->add_option("-e,--exponent", runs_exp);
  runs_cmd->add_option("-d,--difference", runs_d);
  runs_cmd->add_option("-L,--length", runs_len);
  runs_cmd->add_option("--start", runs_start);
  runs_cmd->add_option("--budget", runs_budget, "how many starts to test");
  runs_cmd->add_option("--jobs", runs_jobs);
  runs_cmd->add_flag("--json", runs_json);

  // witness
  std::int64_t wit_base = 0;
  std::optional<std::int64_t> wit_count;
  std::string wit_set, wit_out;
  std::int64_t wit_target = 1;
  std::size_t wit_budget = default_budget;
  bool wit_json = false;
  auto* wit_cmd = app.add_subcommand(
      "witness", "shift a finite set into simultaneous happiness");
  wit_cmd->add_option("-b,--base", wit_base)->required();
  wit_cmd->add_option("-N,--count", wit_count,
                      "witness the default progression of this length");
  wit_cmd->add_option("--set", wit_set, "comma-separated positive integers");
  wit_cmd->add_option("-u,--target", wit_target);
  wit_cmd->add_option("--digit-budget", wit_budget);
  wit_cmd->add_option("-o,--out", wit_out, "write the JSON document here");
  wit_cmd->add_flag("--json", wit_json);

  // verify
  std::string ver_path;
  std::size_t ver_budget = default_budget;
  bool ver_json = false;
  auto* ver_cmd = app.add_subcommand("verify", "re-check a certificate");
  ver_cmd->add_option("file", ver_path, "certificate JSON")->required();
  ver_cmd->add_option("--digit-budget", ver_budget);
  ver_cmd->add_flag("--json", ver_json);

  CLI11_PARSE(app, argc, argv);

  try {
    if (expand_cmd->parsed()) {
      return cmd_expand(expand_base, expand_value, expand_json);
    }
    if (eval_cmd->parsed()) return cmd_eval(eval_base, eval_digits, eval_json);
    if (step_cmd->parsed()) {
      return cmd_step(step_base, step_exp, step_value, step_json);
    }
    if (traj_cmd->parsed()) {
      return cmd_trajectory(traj_base, traj_exp, traj_value, traj_json);
    }
    if (happy_cmd->parsed()) {
      return cmd_happy(happy_base, happy_exp, happy_value, happy_json);
    }
    if (cyc_cmd->parsed()) {
      return cmd_cycles(cyc_base, cyc_exp, cyc_bound, cyc_json);
    }
    if (table_cmd->parsed()) {
      return cmd_table(table_range, table_exp, table_json);
    }
    if (char_cmd->parsed()) {
      return cmd_characterize(char_base, char_limit, char_json);
    }
    if (runs_cmd->parsed()) {
      return cmd_runs(runs_base, runs_exp, runs_d, runs_len, runs_start,
                      runs_budget, runs_jobs, runs_json);
    }
    if (wit_cmd->parsed()) {
      return cmd_witness(wit_base, wit_count, wit_set, wit_target, wit_budget,
                         wit_out, wit_json);
    }
    if (ver_cmd->parsed()) return cmd_verify(ver_path, ver_budget, ver_json);
  } catch (const budget_exceeded_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  } catch (const depth_exceeded_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
