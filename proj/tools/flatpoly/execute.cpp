#include "execute.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <cmath>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "flatpoly/flatpoly.h"
#include "json.hpp"

namespace flatpoly_cli {
namespace {

using nlohmann::json;

struct ComputationError {
  fp_status status;
  std::string message;
};

void check(fp_status s) {
  if (s != FP_OK) throw ComputationError{s, fp_last_error()};
}

template <class T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};

using SingerPtr = std::unique_ptr<fp_singer, Deleter<fp_singer, fp_singer_destroy>>;
using PolyPtr = std::unique_ptr<fp_poly, Deleter<fp_poly, fp_poly_destroy>>;
using PlanPtr = std::unique_ptr<fp_plan, Deleter<fp_plan, fp_plan_destroy>>;
using RankOnePtr = std::unique_ptr<fp_rankone, Deleter<fp_rankone, fp_rankone_destroy>>;

// Takes ownership of a library string and parses it.
json take_json(char* text) {
  std::unique_ptr<char, void (*)(char*)> guard(text, fp_string_free);
  return json::parse(text);
}

json call_json(const std::function<fp_status(char**)>& fn) {
  char* text = nullptr;
  check(fn(&text));
  return take_json(text);
}

json error_json(const ComputationError& e) {
  return json{{"status", fp_status_name(e.status)}, {"message", e.message}};
}

// Optional analyses record their own failure instead of aborting the report.
json slot(const std::function<json()>& fn) {
  try {
    return fn();
  } catch (const ComputationError& e) {
    return json{{"error", error_json(e)}};
  }
}

SingerPtr make_singer(std::uint64_t p, unsigned m) {
  fp_singer* s = nullptr;
  check(fp_singer_create(p, m, &s));
  return SingerPtr(s);
}

PolyPtr make_poly(const fp_singer* s) {
  fp_poly* poly = nullptr;
  check(fp_poly_create(s, &poly));
  return PolyPtr(poly);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ComputationError{FP_ERR_INVALID_ARGUMENT, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw ComputationError{FP_ERR_INVALID_ARGUMENT, "cannot write " + path};
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// RFC 4180: CRLF records, fields quoted only when they need it.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header) { row(std::move(header)); }
  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) text_ += ',';
      text_ += quote(fields[i]);
    }
    text_ += "\r\n";
  }
  const std::string& text() const { return text_; }

 private:
  static std::string quote(const std::string& f) {
    if (f.find_first_of(",\"\r\n ") == std::string::npos) return f;
    std::string q = "\"";
    for (char c : f) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + '"';
  }
  std::string text_;
};

struct Output {
  json result;
  json tolerances = json::object();
  std::string csv;
};

// --- subcommands --------------------------------------------------------

Output run_singer(const Command& cmd) {
  Output o;
  Csv csv({"p", "m", "q", "size", "gap", "valid", "residues"});
  json sets = json::array();
  for (std::uint64_t p : cmd.primes) {
    SingerPtr s = make_singer(p, cmd.m);
    json j = call_json([&](char** t) { return fp_singer_json(s.get(), t); });
    std::string residues;
    for (const auto& r : j["set"]["residues"]) residues += (residues.empty() ? "" : " ") + std::to_string(r.get<std::int64_t>());
    csv.row({std::to_string(p), std::to_string(cmd.m), std::to_string(j["set"]["q"].get<std::int64_t>()),
             std::to_string(j["set"]["size"].get<std::int64_t>()), std::to_string(j["set"]["gap"].get<std::int64_t>()),
             j["verification"]["valid"].get<bool>() ? "true" : "false", residues});
    sets.push_back(std::move(j));
  }
  o.result = json{{"sets", sets}};
  o.tolerances = json{{"arithmetic", "exact"}, {"factorization", "trial_division"}};
  o.csv = csv.text();
  return o;
}

Output run_flat(const Command& cmd) {
  Output o;
  Csv csv({"p", "q", "alpha", "grid", "defect_sq", "defect_abs", "l1", "mahler", "s3_bound"});
  json rows = json::array();
  for (std::uint64_t p : cmd.primes) {
    SingerPtr s = make_singer(p, cmd.m);
    PolyPtr poly = make_poly(s.get());
    fp_mahler_report mahler{};
    check(fp_mahler(poly.get(), FP_MAHLER_LOG_INTEGRAL, 0, &mahler));
    fp_l2_exact_report l2{};
    check(fp_l2_defect_exact(poly.get(), &l2));
    const std::size_t grid = cmd.grid_mult * static_cast<std::size_t>(fp_singer_modulus(s.get()));
    for (double alpha : cmd.alphas) {
      fp_flatness_report r{};
      check(fp_flatness(poly.get(), alpha, grid, &r));
      rows.push_back(json{{"p", p},
                          {"m", cmd.m},
                          {"q", r.q},
                          {"alpha", r.alpha},
                          {"grid", r.grid_size},
                          {"defect_sq", r.defect_sq},
                          {"defect_abs", r.defect_abs},
                          {"l1", r.l1_norm},
                          {"mahler", mahler.value},
                          {"mahler_grid", mahler.grid_size},
                          {"s3_bound", r.s3_bound},
                          {"l2_defect_closed", r.l2_defect_closed},
                          {"l2_defect_exact",
                           {{"value", l2.value},
                            {"squared", {{"num", std::to_string(l2.squared_num)}, {"den", std::to_string(l2.squared_den)}}},
                            {"perfect_difference", l2.perfect_difference != 0}}},
                          {"methods",
                           {{"defects", "riemann_mean_fft"},
                            {"mahler", "log_integral_midpoint"},
                            {"l2_defect_exact", "correlation_parseval"}}}});
      csv.row({std::to_string(p), std::to_string(r.q), csv_number(r.alpha), std::to_string(r.grid_size),
               csv_number(r.defect_sq), csv_number(r.defect_abs), csv_number(r.l1_norm), csv_number(mahler.value),
               csv_number(r.s3_bound)});
    }
  }
  o.result = json{{"rows", rows}};
  o.tolerances = json{{"grid_multiplier", cmd.grid_mult},
                      {"min_grid_multiplier", FP_MIN_GRID_MULTIPLIER},
                      {"summation", "neumaier_blocks"},
                      {"mahler_near_zero_modulus", FP_NEAR_ZERO_MODULUS}};
  o.csv = csv.text();
  return o;
}

json mahler_json(const fp_mahler_report& r) {
  json j{{"method", r.method == FP_MAHLER_JENSEN ? "jensen" : "log_integral"}, {"degree", r.degree},
         {"value", r.value}, {"l1", r.l1}};
  if (r.method == FP_MAHLER_JENSEN) {
    j["roots_outside"] = r.roots_outside;
  } else {
    j["grid"] = r.grid_size;
    j["perturbed_points"] = r.perturbed_points;
  }
  return j;
}

std::size_t mahler_grid(const Command& cmd, std::int64_t degree) {
  return cmd.grid_mult == FP_DEFAULT_GRID_MULTIPLIER ? 0 : cmd.grid_mult * static_cast<std::size_t>(degree);
}

Output run_mahler(const Command& cmd) {
  Output o;
  Csv csv({"p", "q", "degree", "mahler_log", "mahler_jensen", "difference", "l1"});
  json rows = json::array();
  for (std::uint64_t p : cmd.primes) {
    SingerPtr s = make_singer(p, cmd.m);
    PolyPtr poly = make_poly(s.get());
    const std::int64_t degree = fp_poly_degree(poly.get());
    json row{{"p", p}, {"q", fp_singer_modulus(s.get())}, {"degree", degree}};
    std::optional<fp_mahler_report> log, jensen;
    if (cmd.method != "jensen") {
      fp_mahler_report r{};
      check(fp_mahler(poly.get(), FP_MAHLER_LOG_INTEGRAL, mahler_grid(cmd, degree), &r));
      log = r;
      row["log_integral"] = mahler_json(r);
    }
    if (cmd.method != "log") {
      if (degree <= FP_MAX_JENSEN_DEGREE) {
        fp_mahler_report r{};
        check(fp_mahler(poly.get(), FP_MAHLER_JENSEN, 0, &r));
        jensen = r;
        row["jensen"] = mahler_json(r);
      } else {
        row["jensen"] = json{{"skipped", "degree above " + std::to_string(FP_MAX_JENSEN_DEGREE)}};
      }
    }
    std::string diff;
    if (log && jensen) {
      row["difference"] = std::abs(log->value - jensen->value);
      diff = csv_number(std::abs(log->value - jensen->value));
    }
    csv.row({std::to_string(p), row["q"].dump(), std::to_string(degree), log ? csv_number(log->value) : "",
             jensen ? csv_number(jensen->value) : "", diff, csv_number(log ? log->l1 : jensen->l1)});
    rows.push_back(std::move(row));
  }
  o.result = json{{"rows", rows}};
  o.tolerances = json{{"grid_multiplier", cmd.grid_mult},
                      {"near_zero_modulus", FP_NEAR_ZERO_MODULUS},
                      {"max_jensen_degree", FP_MAX_JENSEN_DEGREE},
                      {"cross_method_target", 1e-6}};
  o.csv = csv.text();
  return o;
}

Output run_beta(const Command& cmd) {
  Output o;
  Csv csv({"p", "q", "l1", "mahler", "mahler_jensen"});
  json rows = json::array();
  for (std::uint64_t p : cmd.primes) {
    SingerPtr s = make_singer(p, cmd.m);
    PolyPtr poly = make_poly(s.get());
    const std::int64_t degree = fp_poly_degree(poly.get());
    fp_mahler_report log{};
    check(fp_mahler(poly.get(), FP_MAHLER_LOG_INTEGRAL, mahler_grid(cmd, degree), &log));
    json row{{"p", p}, {"q", fp_singer_modulus(s.get())}, {"l1", log.l1}, {"mahler", log.value}, {"grid", log.grid_size}};
    std::string jensen_text;
    if (degree <= FP_MAX_JENSEN_DEGREE) {
      fp_mahler_report j{};
      check(fp_mahler(poly.get(), FP_MAHLER_JENSEN, 0, &j));
      row["mahler_jensen"] = j.value;
      jensen_text = csv_number(j.value);
    } else {
      row["mahler_jensen"] = nullptr;
    }
    csv.row({std::to_string(p), row["q"].dump(), csv_number(log.l1), csv_number(log.value), jensen_text});
    rows.push_back(std::move(row));
  }
  o.result = json{{"rows", rows}, {"note", "tabulated only; no limit is asserted"}};
  o.tolerances = json{{"grid_multiplier", cmd.grid_mult},
                      {"near_zero_modulus", FP_NEAR_ZERO_MODULUS},
                      {"max_jensen_degree", FP_MAX_JENSEN_DEGREE},
                      {"l1_method", "riemann_mean_midpoint"},
                      {"mahler_method", "log_integral_midpoint"}};
  o.csv = csv.text();
  return o;
}

Output run_realline(const Command& cmd) {
  Output o;
  Csv csv({"p", "q", "alpha", "s", "truncation", "grid", "value", "tail_bound"});
  json rows = json::array();
  for (std::uint64_t p : cmd.primes) {
    SingerPtr s = make_singer(p, cmd.m);
    PolyPtr poly = make_poly(s.get());
    const std::int64_t q = fp_singer_modulus(s.get());
    const std::size_t grid = cmd.grid_mult * static_cast<std::size_t>(q);
    for (double alpha : cmd.alphas) {
      for (double ks : cmd.kernel_s) {
        fp_realline_report r{};
        check(fp_realline(poly.get(), alpha, ks, cmd.truncation, grid, &r));
        rows.push_back(json{{"p", p}, {"q", q}, {"alpha", r.alpha}, {"s", r.s}, {"truncation", r.truncation},
                            {"grid", r.grid_size}, {"value", r.value}, {"tail_bound", r.tail_bound},
                            {"method", "periodized_kernel_circle"}});
        csv.row({std::to_string(p), std::to_string(q), csv_number(r.alpha), csv_number(r.s),
                 std::to_string(r.truncation), std::to_string(r.grid_size), csv_number(r.value),
                 csv_number(r.tail_bound)});
      }
    }
  }
  o.result = json{{"rows", rows}};
  o.tolerances = json{{"grid_multiplier", cmd.grid_mult},
                      {"max_kernel_tail", FP_MAX_KERNEL_TAIL},
                      {"default_truncation_tail", FP_KERNEL_TRUNCATION_TOLERANCE},
                      {"min_truncation", FP_MIN_KERNEL_TRUNCATION}};
  o.csv = csv.text();
  return o;
}

PlanPtr make_plan(const Command& cmd) {
  fp_plan* plan = nullptr;
  if (!cmd.plan_in.empty()) {
    check(fp_plan_from_json(read_file(cmd.plan_in).c_str(), &plan));
    return PlanPtr(plan);
  }
  const std::size_t k = cmd.stages == 0 ? cmd.primes.size() : cmd.stages;
  if (cmd.unchecked) {
    check(fp_plan_create_unchecked(cmd.primes.data(), k, cmd.m, cmd.scales.data(), &plan));
  } else {
    check(fp_plan_create(cmd.primes.data(), k, cmd.m, cmd.rule.c_str(), cmd.scales.data(),
                         cmd.scales.empty() ? 0 : k, &plan));
  }
  return PlanPtr(plan);
}

std::size_t stages_of(const Command& cmd, const fp_plan* plan) {
  const std::size_t total = fp_plan_stage_count(plan);
  if (cmd.stages == 0) return total;
  if (cmd.stages > total) {
    throw ComputationError{FP_ERR_PRECONDITION, "plan has only " + std::to_string(total) + " stages"};
  }
  return cmd.stages;
}

std::vector<std::int64_t> plan_vector(const fp_plan* plan, fp_status (*get)(const fp_plan*, int64_t*, size_t)) {
  std::vector<std::int64_t> v(fp_plan_stage_count(plan));
  check(get(plan, v.data(), v.size()));
  return v;
}

Output run_riesz(const Command& cmd) {
  Output o;
  PlanPtr plan = make_plan(cmd);
  const fp_plan* p = plan.get();
  const std::size_t k = stages_of(cmd, p);
  char* text = nullptr;
  check(fp_plan_to_json(p, &text));
  std::unique_ptr<char, void (*)(char*)> plan_text(text, fp_string_free);
  if (!cmd.plan_out.empty()) write_file(cmd.plan_out, std::string(plan_text.get()) + "\n");

  json r;
  r["plan"] = json::parse(plan_text.get());
  r["stages"] = k;
  r["heights"] = plan_vector(p, fp_plan_heights);
  r["scales"] = plan_vector(p, fp_plan_scales);
  r["dissociation"] = json{
      {"frequency_sums",
       slot([&] { return call_json([&](char** t) { return fp_plan_dissociation_json(p, k, FP_DISSOCIATION_FREQUENCY_SUMS, 0, t); }); })},
      {"difference_blocks",
       slot([&] { return call_json([&](char** t) { return fp_plan_dissociation_json(p, k, FP_DISSOCIATION_DIFFERENCE, 0, t); }); })}};
  r["coefficients"] = slot([&] {
    json c = call_json([&](char** t) { return fp_plan_coefficients_json(p, k, t); });
    if (!cmd.coefficients) {
      c.erase("frequencies");
      c.erase("counts");
    }
    return c;
  });
  r["ergodicity"] = k >= 2 ? slot([&] { return call_json([&](char** t) { return fp_plan_ergodicity_json(p, t); }); })
                           : json(nullptr);
  if (!cmd.x.empty()) {
    r["quasi_invariance"] =
        slot([&] { return call_json([&](char** t) { return fp_plan_quasi_invariance_json(p, cmd.x.c_str(), t); }); });
  }
  r["mahler"] = slot([&] { return call_json([&](char** t) { return fp_plan_mahler_json(p, k, 0, t); }); });
  o.result = std::move(r);
  o.tolerances = json{{"arithmetic", "exact_rational"},
                      {"enumeration_budget", FP_ENUMERATION_BUDGET},
                      {"mahler_grid_multiplier", FP_DEFAULT_GRID_MULTIPLIER},
                      {"weak_limit", "not certified"}};
  return o;
}

Output run_rankone(const Command& cmd) {
  Output o;
  PlanPtr plan = make_plan(cmd);
  const std::size_t K = stages_of(cmd, plan.get());
  fp_rankone* raw = nullptr;
  check(fp_rankone_from_plan(plan.get(), &raw));
  RankOnePtr r1(raw);

  json params = call_json([&](char** t) { return fp_rankone_json(r1.get(), t); });
  json heights = json::array();
  for (std::size_t j = 1; j <= K; ++j) {
    std::int64_t h = 0;
    check(fp_rankone_height(r1.get(), j, &h));
    heights.push_back(h);
  }
  json r;
  r["h"] = heights;
  r["stages"] = K;
  r["scales"] = plan_vector(plan.get(), fp_plan_scales);
  r["params"] = std::move(params);
  r["growth"] = call_json([&](char** t) { return fp_rankone_growth_json(r1.get(), t); });
  r["tower"] = slot([&] { return call_json([&](char** t) { return fp_rankone_tower_json(r1.get(), K, t); }); });
  if (!cmd.tau.empty()) {
    r["flow"] = call_json([&](char** t) { return fp_rankone_flow_json(plan.get(), cmd.tau.c_str(), t); });
  }
  if (cmd.lag >= 0) {
    fp_correlation_report c{};
    check(fp_rankone_correlation(r1.get(), cmd.base_stage, K, cmd.lag, cmd.sim_stage, &c));
    auto frac = [](std::int64_t n, std::int64_t d) {
      return json{{"num", std::to_string(n)}, {"den", std::to_string(d)}};
    };
    r["correlation"] = json{{"k", c.k},
                            {"K", c.K},
                            {"sim_stage", c.sim_stage},
                            {"n", c.n},
                            {"predicted", frac(c.predicted_num, c.predicted_den)},
                            {"empirical", frac(c.empirical_num, c.empirical_den)},
                            {"tolerance", frac(c.tolerance_num, c.tolerance_den)},
                            {"within_tolerance", c.within_tolerance != 0},
                            {"label", "finite-tower correlation; no spectral claim"}};
  }
  o.result = std::move(r);
  o.tolerances = json{{"arithmetic", "exact_rational"},
                      {"max_tower_levels", FP_MAX_TOWER_LEVELS},
                      {"exported_origin_levels", 10000},
                      {"correlation_tolerance", "n / h_sim"}};
  return o;
}

json input_echo(const Command& cmd) {
  json j{{"subcommand", cmd.subcommand}, {"primes", cmd.primes}, {"m", cmd.m}};
  if (!cmd.alphas.empty()) j["alpha"] = cmd.alphas;
  if (!cmd.kernel_s.empty()) j["s"] = cmd.kernel_s;
  if (cmd.truncation != 0) j["truncation"] = cmd.truncation;
  if (!cmd.method.empty()) j["method"] = cmd.method;
  if (cmd.subcommand == "riesz" || cmd.subcommand == "rankone") {
    j["rule"] = cmd.rule.empty() ? json(nullptr) : json(cmd.rule);
    j["scales"] = cmd.scales;
    j["stages"] = cmd.stages;
    j["unchecked"] = cmd.unchecked;
    if (!cmd.plan_in.empty()) j["plan"] = cmd.plan_in;
    if (!cmd.x.empty()) j["x"] = cmd.x;
    if (!cmd.tau.empty()) j["tau"] = cmd.tau;
    if (cmd.lag >= 0) {
      j["lag"] = cmd.lag;
      j["base_stage"] = cmd.base_stage;
      j["sim_stage"] = cmd.sim_stage;
    }
  } else {
    j["grid_mult"] = cmd.grid_mult;
  }
  j["format"] = cmd.format == Format::csv ? "csv" : "json";
  return j;
}

Output dispatch(const Command& cmd) {
  const std::string& s = cmd.subcommand;
  if (s == "singer") return run_singer(cmd);
  if (s == "flat") return run_flat(cmd);
  if (s == "mahler") return run_mahler(cmd);
  if (s == "beta") return run_beta(cmd);
  if (s == "riesz") return run_riesz(cmd);
  if (s == "rankone") return run_rankone(cmd);
  if (s == "realline") return run_realline(cmd);
  throw ComputationError{FP_ERR_INVALID_ARGUMENT, "unknown subcommand " + s};
}

void emit(const Command& cmd, const std::string& text, std::ostream& out) {
  if (cmd.output.empty()) {
    out << text;
  } else {
    write_file(cmd.output, text);
  }
}

}  // namespace

int execute(const Command& cmd, std::ostream& out, std::ostream& err) {
  json report{{"tool", "flatpoly"}, {"version", fp_version()}, {"command", canonical(cmd)},
              {"input", input_echo(cmd)}};
  if (cmd.timestamp) report["timestamp"] = utc_timestamp();
  int code = exit_ok;
  Output result;
  try {
    result = dispatch(cmd);
    report["status"] = "ok";
    report["result"] = result.result;
    report["tolerances"] = result.tolerances;
  } catch (const ComputationError& e) {
    report["status"] = "error";
    report["error"] = error_json(e);
    err << "flatpoly: " << fp_status_name(e.status) << ": " << e.message << "\n";
    code = exit_computation;
  }
  try {
    if (code == exit_ok && cmd.format == Format::csv) {
      emit(cmd, result.csv, out);
    } else {
      emit(cmd, report.dump(2) + "\n", out);
    }
  } catch (const ComputationError& e) {
    err << "flatpoly: " << e.message << "\n";
    return exit_computation;
  }
  return code;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Command cmd;
  try {
    cmd = parse(args);
  } catch (const HelpRequested& h) {
    out << h.what() << "\n";
    return exit_ok;
  } catch (const UsageError& e) {
    err << "flatpoly: usage error: " << e.what() << "\n";
    return exit_usage;
  }
  return execute(cmd, out, err);
}

}  // namespace flatpoly_cli
