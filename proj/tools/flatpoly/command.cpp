#include "command.hpp"

#include <charconv>
#include <cmath>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "flatpoly/flatpoly.h"

namespace flatpoly_cli {
namespace {

const char* const subcommands[] = {"singer", "flat", "mahler", "beta", "riesz", "rankone", "realline"};

std::vector<std::string> split_list(const std::string& text, const std::string& flag) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw UsageError(flag + ": empty list item in '" + text + "'");
    items.push_back(item);
  }
  if (items.empty()) throw UsageError(flag + ": empty list");
  return items;
}

template <class T>
T parse_integer(const std::string& text, const std::string& flag) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw UsageError(flag + ": '" + text + "' is not an integer");
  }
  return value;
}

double parse_real(const std::string& text, const std::string& flag) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw UsageError(flag + ": '" + text + "' is not a finite number");
  }
  return value;
}

// "2,3,5" or inclusive ranges such as "2-97", mixed freely.
std::vector<std::uint64_t> parse_primes(const std::string& text, const std::string& flag) {
  std::vector<std::uint64_t> out;
  for (const std::string& item : split_list(text, flag)) {
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      const auto p = parse_integer<std::uint64_t>(item, flag);
      if (!fp_is_prime(p)) throw UsageError(flag + ": " + item + " is not prime");
      out.push_back(p);
      continue;
    }
    const auto lo = parse_integer<std::uint64_t>(item.substr(0, dash), flag);
    const auto hi = parse_integer<std::uint64_t>(item.substr(dash + 1), flag);
    if (lo > hi || hi - lo > 1'000'000) throw UsageError(flag + ": bad range '" + item + "'");
    const std::size_t before = out.size();
    for (std::uint64_t n = lo; n <= hi; ++n) {
      if (fp_is_prime(n)) out.push_back(n);
    }
    if (out.size() == before) throw UsageError(flag + ": range '" + item + "' holds no primes");
  }
  return out;
}

std::vector<double> parse_reals(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  for (const std::string& item : split_list(text, flag)) out.push_back(parse_real(item, flag));
  return out;
}

std::vector<std::int64_t> parse_scales(const std::string& text, const std::string& flag) {
  std::vector<std::int64_t> out;
  for (const std::string& item : split_list(text, flag)) out.push_back(parse_integer<std::int64_t>(item, flag));
  return out;
}

void check_rational_text(const std::string& text, const std::string& flag) {
  static const std::regex pattern(R"(^-?[0-9]+(/[0-9]+|\.[0-9]+)?$)");
  if (!std::regex_match(text, pattern)) throw UsageError(flag + ": '" + text + "' is not a rational number");
}

template <class T>
std::string join(const std::vector<T>& v, std::string (*fmt)(T)) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    out += fmt(v[i]);
  }
  return out;
}

std::string fmt_u64(std::uint64_t v) { return std::to_string(v); }
std::string fmt_i64(std::int64_t v) { return std::to_string(v); }

struct RawFlags {
  std::string p, primes, m, alpha, grid_mult, rule, scales, stages, s, truncation, method, tau, x, lag,
      base_stage, sim_stage, plan_in, plan_out, output, format;
  bool unchecked = false;
  bool coefficients = false;
  bool no_timestamp = false;
};

void add_common(CLI::App* sub, RawFlags& f) {
  sub->add_option("-o,--output", f.output, "Report path (default: standard output)");
  sub->add_option("--format", f.format, "json or csv");
  sub->add_flag("--no-timestamp", f.no_timestamp, "Omit the timestamp field");
}

void add_primes(CLI::App* sub, RawFlags& f) {
  sub->add_option("--primes", f.primes, "Comma list of primes or ranges such as 2-97");
  sub->add_option("--m", f.m, "Field degree exponent (default 1)");
}

bool is_tabular(const std::string& sub) { return sub != "riesz" && sub != "rankone"; }

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

Command parse(const std::vector<std::string>& args) {
  CLI::App app{"flatpoly: Singer polynomials, flatness, Mahler measures, Riesz products and rank-one towers",
               "flatpoly"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", std::string(fp_version()));
  RawFlags f;

  CLI::App* singer = app.add_subcommand("singer", "Canonical Singer perfect difference sets");
  singer->add_option("--p", f.p, "Prime");
  add_primes(singer, f);

  CLI::App* flat = app.add_subcommand("flat", "Flatness defects on a uniform grid");
  add_primes(flat, f);
  flat->add_option("--alpha", f.alpha, "Exponent list in (0, 2] (default 1)");
  flat->add_option("--grid-mult", f.grid_mult, "Grid size as a multiple of q (default 16, minimum 8)");

  CLI::App* mahler = app.add_subcommand("mahler", "Mahler measure by log-integral and Jensen methods");
  add_primes(mahler, f);
  mahler->add_option("--method", f.method, "log, jensen or both (default both)");
  mahler->add_option("--grid-mult", f.grid_mult, "Log-integral grid as a multiple of the degree (default 16)");

  CLI::App* beta = app.add_subcommand("beta", "L1 norm and Mahler measure table");
  add_primes(beta, f);
  beta->add_option("--grid-mult", f.grid_mult, "Grid as a multiple of the degree (default 16)");

  CLI::App* riesz = app.add_subcommand("riesz", "Generalized Riesz product plans");
  add_primes(riesz, f);
  riesz->add_option("--rule", f.rule, "default, margin:<c> or explicit");
  riesz->add_option("--scales", f.scales, "Explicit scales N_1,N_2,...");
  riesz->add_flag("--unchecked", f.unchecked, "Accept explicit scales without growth checks");
  riesz->add_option("--stages", f.stages, "Number of stages (default: one per prime)");
  riesz->add_option("--x", f.x, "Quasi-invariance probe point, rational");
  riesz->add_flag("--coefficients", f.coefficients, "Emit every partial-product coefficient");
  riesz->add_option("--plan", f.plan_in, "Read the plan from a JSON file");
  riesz->add_option("--plan-out", f.plan_out, "Write the plan to a JSON file");

  CLI::App* rankone = app.add_subcommand("rankone", "Rank-one map and flow parameters, towers, correlations");
  add_primes(rankone, f);
  rankone->add_option("--rule", f.rule, "default, margin:<c> or explicit (default margin:2)");
  rankone->add_option("--scales", f.scales, "Explicit scales N_1,N_2,...");
  rankone->add_option("--stages", f.stages, "Number of stages (default: one per prime)");
  rankone->add_option("--tau", f.tau, "Flow scale, positive rational");
  rankone->add_option("--lag", f.lag, "Correlation lag n");
  rankone->add_option("--base-stage", f.base_stage, "Correlation base stage k (default 0)");
  rankone->add_option("--sim-stage", f.sim_stage, "Simulation stage (default: --stages)");
  rankone->add_option("--plan", f.plan_in, "Read the plan from a JSON file");

  CLI::App* realline = app.add_subcommand("realline", "Real-line flatness through the periodized Fejer kernel");
  add_primes(realline, f);
  realline->add_option("--alpha", f.alpha, "Exponent list in (0, 2] (default 1)");
  realline->add_option("--s", f.s, "Kernel scale list (default 1)");
  realline->add_option("--truncation", f.truncation, "Periodization terms (default: per-s minimum)");
  realline->add_option("--grid-mult", f.grid_mult, "Circle grid as a multiple of q (default 16, minimum 8)");

  for (const char* name : subcommands) add_common(app.get_subcommand(name), f);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
  } catch (const CLI::CallForVersion&) {
    throw HelpRequested(std::string(fp_version()));
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  Command cmd;
  cmd.subcommand = app.get_subcommands().front()->get_name();
  const std::string& sub = cmd.subcommand;

  if (!f.p.empty() && !f.primes.empty()) throw UsageError("--p: give either --p or --primes");
  if (!f.p.empty()) {
    const auto p = parse_integer<std::uint64_t>(f.p, "--p");
    if (!fp_is_prime(p)) throw UsageError("--p: " + f.p + " is not prime");
    cmd.primes = {p};
  } else if (!f.primes.empty()) {
    cmd.primes = parse_primes(f.primes, "--primes");
  }
  if (!f.plan_in.empty()) {
    if (!cmd.primes.empty() || !f.rule.empty() || !f.scales.empty()) {
      throw UsageError("--plan: cannot be combined with --primes, --rule or --scales");
    }
    cmd.plan_in = f.plan_in;
  }

  if (!f.m.empty()) {
    cmd.m = parse_integer<unsigned>(f.m, "--m");
    if (cmd.m < 1) throw UsageError("--m: must be at least 1");
  }

  if (sub == "flat" || sub == "realline") {
    cmd.alphas = f.alpha.empty() ? std::vector<double>{1.0} : parse_reals(f.alpha, "--alpha");
    for (double a : cmd.alphas) {
      if (!(a > 0 && a <= 2)) throw UsageError("--alpha: " + format_double(a) + " is outside (0, 2]");
    }
  }
  if (sub == "flat" || sub == "realline" || sub == "mahler" || sub == "beta") {
    if (!f.grid_mult.empty()) cmd.grid_mult = parse_integer<std::size_t>(f.grid_mult, "--grid-mult");
    const std::size_t floor = (sub == "flat" || sub == "realline") ? FP_MIN_GRID_MULTIPLIER : 16;
    if (cmd.grid_mult < floor) throw UsageError("--grid-mult: must be at least " + std::to_string(floor));
    if (cmd.grid_mult > 4096) throw UsageError("--grid-mult: must be at most 4096");
  }
  if (sub == "mahler") {
    cmd.method = f.method.empty() ? "both" : f.method;
    if (cmd.method != "log" && cmd.method != "jensen" && cmd.method != "both") {
      throw UsageError("--method: expected log, jensen or both");
    }
  }
  if (sub == "realline") {
    cmd.kernel_s = f.s.empty() ? std::vector<double>{1.0} : parse_reals(f.s, "--s");
    for (double s : cmd.kernel_s) {
      if (!(s > 0)) throw UsageError("--s: " + format_double(s) + " is not positive");
    }
    if (!f.truncation.empty()) {
      cmd.truncation = parse_integer<std::int64_t>(f.truncation, "--truncation");
      if (cmd.truncation < FP_MIN_KERNEL_TRUNCATION) {
        throw UsageError("--truncation: must be at least " + std::to_string(FP_MIN_KERNEL_TRUNCATION));
      }
    }
  }

  if (sub == "riesz" || sub == "rankone") {
    if (!f.scales.empty()) cmd.scales = parse_scales(f.scales, "--scales");
    cmd.rule = f.rule;
    if (cmd.rule.empty() && cmd.plan_in.empty()) {
      cmd.rule = !cmd.scales.empty() ? "explicit" : (sub == "rankone" ? "margin:2" : "default");
    }
    if (!cmd.rule.empty()) {
      static const std::regex rule_pattern(R"(^(default|explicit|margin:[1-9][0-9]*)$)");
      if (!std::regex_match(cmd.rule, rule_pattern)) throw UsageError("--rule: unknown rule '" + cmd.rule + "'");
      if (cmd.rule == "explicit" && cmd.scales.empty()) throw UsageError("--scales: required by --rule explicit");
      if (cmd.rule != "explicit" && !cmd.scales.empty()) throw UsageError("--scales: only valid with --rule explicit");
      if (!cmd.scales.empty() && cmd.scales.size() != cmd.primes.size()) {
        throw UsageError("--scales: need one scale per prime");
      }
    }
    cmd.unchecked = f.unchecked;
    if (cmd.unchecked && cmd.scales.empty()) throw UsageError("--unchecked: requires --scales");
    if (!f.stages.empty()) {
      cmd.stages = parse_integer<std::size_t>(f.stages, "--stages");
      if (cmd.stages < 1) throw UsageError("--stages: must be at least 1");
      if (!cmd.primes.empty() && cmd.stages > cmd.primes.size()) {
        throw UsageError("--stages: only " + std::to_string(cmd.primes.size()) + " primes given");
      }
    } else if (!cmd.primes.empty()) {
      cmd.stages = cmd.primes.size();
    }
    if (!f.plan_out.empty()) cmd.plan_out = f.plan_out;
    cmd.coefficients = f.coefficients;
    if (!f.x.empty()) {
      check_rational_text(f.x, "--x");
      cmd.x = f.x;
    }
    if (!f.tau.empty()) {
      check_rational_text(f.tau, "--tau");
      cmd.tau = f.tau;
    }
    if (!f.lag.empty()) {
      cmd.lag = parse_integer<std::int64_t>(f.lag, "--lag");
      if (cmd.lag < 0) throw UsageError("--lag: must be nonnegative");
    }
    if (!f.base_stage.empty()) {
      if (f.lag.empty()) throw UsageError("--base-stage: requires --lag");
      cmd.base_stage = parse_integer<std::size_t>(f.base_stage, "--base-stage");
    }
    if (!f.sim_stage.empty()) {
      if (f.lag.empty()) throw UsageError("--sim-stage: requires --lag");
      cmd.sim_stage = parse_integer<std::size_t>(f.sim_stage, "--sim-stage");
    }
    if (cmd.stages > 0 && cmd.lag >= 0) {
      if (cmd.base_stage >= cmd.stages) throw UsageError("--base-stage: must be below --stages");
      if (cmd.sim_stage != 0 && cmd.sim_stage < cmd.stages) throw UsageError("--sim-stage: must be at least --stages");
      if (!cmd.primes.empty() && cmd.sim_stage > cmd.primes.size()) {
        throw UsageError("--sim-stage: only " + std::to_string(cmd.primes.size()) + " primes given");
      }
    }
  }

  cmd.format = (sub == "flat" || sub == "beta") ? Format::csv : Format::json;
  if (!f.format.empty()) {
    if (f.format == "json") {
      cmd.format = Format::json;
    } else if (f.format == "csv") {
      if (!is_tabular(sub)) throw UsageError("--format: csv is not available for " + sub);
      cmd.format = Format::csv;
    } else {
      throw UsageError("--format: expected json or csv");
    }
  }
  cmd.output = f.output;
  cmd.timestamp = !f.no_timestamp;
  // Missing primes are reported last so that bad values name their own flag.
  if (cmd.plan_in.empty() && cmd.primes.empty()) {
    throw UsageError(sub == "singer" ? "--p: a prime is required" : "--primes: at least one prime is required");
  }
  return cmd;
}

std::vector<std::string> canonical_args(const Command& cmd) {
  const std::string& sub = cmd.subcommand;
  std::vector<std::string> a{sub};
  auto add = [&a](const std::string& flag, const std::string& value) {
    a.push_back(flag);
    a.push_back(value);
  };
  if (!cmd.plan_in.empty()) {
    add("--plan", cmd.plan_in);
  } else if (sub == "singer" && cmd.primes.size() == 1) {
    add("--p", std::to_string(cmd.primes[0]));
  } else {
    add("--primes", join(cmd.primes, fmt_u64));
  }
  add("--m", std::to_string(cmd.m));
  if (!cmd.alphas.empty()) add("--alpha", join(cmd.alphas, format_double));
  if (sub == "flat" || sub == "realline" || sub == "mahler" || sub == "beta") {
    add("--grid-mult", std::to_string(cmd.grid_mult));
  }
  if (!cmd.method.empty()) add("--method", cmd.method);
  if (!cmd.kernel_s.empty()) add("--s", join(cmd.kernel_s, format_double));
  if (cmd.truncation != 0) add("--truncation", std::to_string(cmd.truncation));
  if (sub == "riesz" || sub == "rankone") {
    if (!cmd.rule.empty()) add("--rule", cmd.rule);
    if (!cmd.scales.empty()) add("--scales", join(cmd.scales, fmt_i64));
    if (cmd.unchecked) a.push_back("--unchecked");
    if (cmd.stages != 0) add("--stages", std::to_string(cmd.stages));
    if (!cmd.x.empty()) add("--x", cmd.x);
    if (cmd.coefficients) a.push_back("--coefficients");
    if (!cmd.plan_out.empty()) add("--plan-out", cmd.plan_out);
    if (!cmd.tau.empty()) add("--tau", cmd.tau);
    if (cmd.lag >= 0) {
      add("--lag", std::to_string(cmd.lag));
      add("--base-stage", std::to_string(cmd.base_stage));
      if (cmd.sim_stage != 0) add("--sim-stage", std::to_string(cmd.sim_stage));
    }
  }
  add("--format", cmd.format == Format::csv ? "csv" : "json");
  if (!cmd.output.empty()) add("--output", cmd.output);
  if (!cmd.timestamp) a.push_back("--no-timestamp");
  return a;
}

std::string canonical(const Command& cmd) {
  std::string out;
  for (const std::string& arg : canonical_args(cmd)) {
    if (!out.empty()) out += ' ';
    out += arg;
  }
  return out;
}

}  // namespace flatpoly_cli
