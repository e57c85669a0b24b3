#include "core/riesz.hpp"

#include <algorithm>
#include <charconv>
#include <utility>

#include "core/error.hpp"
#include "core/number_theory.hpp"
#include "core/poly.hpp"
#include "json.hpp"

namespace flatpoly {
namespace {

using nlohmann::json;

std::vector<SingerSet> stage_sets(std::span<const std::uint64_t> primes, unsigned m) {
  if (primes.empty()) fail(ErrorCode::invalid_argument, "a plan needs at least one prime");
  std::map<std::uint64_t, SingerSet> cache;
  std::vector<SingerSet> out;
  for (std::uint64_t p : primes) {
    auto it = cache.find(p);
    if (it == cache.end()) it = cache.emplace(p, construct_singer(p, m)).first;
    out.push_back(it->second);
  }
  return out;
}

RieszPlan assemble(std::span<const std::uint64_t> primes, unsigned m, const ScaleRule& rule, bool check) {
  const std::vector<SingerSet> sets = stage_sets(primes, m);
  RieszPlan plan;
  plan.m = m;
  plan.rule = rule;
  plan.scale_conditions_checked = check;
  if (rule.kind == ScaleRule::Kind::explicit_scales && rule.scales.size() != primes.size()) {
    fail(ErrorCode::invalid_argument, "explicit rule needs one scale per prime");
  }
  if (rule.kind == ScaleRule::Kind::constant_margin && rule.factor < 1) {
    fail(ErrorCode::invalid_argument, "margin factor must be positive");
  }
  std::int64_t prev_height = 1;
  for (std::size_t j = 0; j < sets.size(); ++j) {
    RieszStage st;
    st.p = primes[j];
    st.set = sets[j];
    if (j == 0) {
      st.scale = rule.kind == ScaleRule::Kind::explicit_scales ? rule.scales[0] : 1;
    } else {
      const RieszStage& prev = plan.stages.back();
      switch (rule.kind) {
        case ScaleRule::Kind::default_margin: {
          if (j >= 62) fail(ErrorCode::budget_exceeded, "too many stages for the default rule");
          const auto growth = checked_mul(std::int64_t{1} << j, static_cast<std::int64_t>(prev.set.size()));
          st.scale = checked_mul(growth, prev.height);
          break;
        }
        case ScaleRule::Kind::constant_margin:
          st.scale = checked_mul(rule.factor, prev.height);
          break;
        case ScaleRule::Kind::explicit_scales:
          st.scale = rule.scales[j];
          break;
      }
    }
    if (st.scale < 1) fail(ErrorCode::invalid_argument, "scales must be positive");
    if (check && j > 0) {
      const RieszStage& prev = plan.stages.back();
      const std::int64_t needed = checked_mul(prev.scale, prev.top());
      if (st.scale < needed) {
        fail(ErrorCode::precondition, "scale N_" + std::to_string(j + 1) + " = " + std::to_string(st.scale) +
                                          " violates N_j >= N_{j-1} s_top = " + std::to_string(needed));
      }
    }
    st.height = checked_add(checked_mul(st.top(), st.scale), prev_height);
    prev_height = st.height;
    plan.stages.push_back(std::move(st));
  }
  return plan;
}

std::vector<std::int64_t> distinct_sorted(std::vector<std::int64_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<std::int64_t> decode(std::int64_t index, const std::vector<std::vector<std::int64_t>>& blocks) {
  std::vector<std::int64_t> terms(blocks.size());
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    const auto size = static_cast<std::int64_t>(blocks[j].size());
    terms[j] = blocks[j][static_cast<std::size_t>(index % size)];
    index /= size;
  }
  return terms;
}

BigInt floor_of(const Rational& x) {
  const BigInt num = boost::multiprecision::numerator(x);
  const BigInt den = boost::multiprecision::denominator(x);
  BigInt q = num / den;
  if (num % den != 0 && num < 0) q -= 1;
  return q;
}

}  // namespace

std::string ScaleRule::descriptor() const {
  switch (kind) {
    case Kind::default_margin: return "default";
    case Kind::constant_margin: return "margin:" + std::to_string(factor);
    case Kind::explicit_scales: return "explicit";
  }
  return "default";
}

ScaleRule ScaleRule::parse(std::string_view descriptor, std::vector<std::int64_t> scales) {
  ScaleRule rule;
  if (descriptor == "default") {
    rule.kind = Kind::default_margin;
  } else if (descriptor == "explicit") {
    rule.kind = Kind::explicit_scales;
    rule.scales = std::move(scales);
  } else if (descriptor.starts_with("margin:")) {
    rule.kind = Kind::constant_margin;
    const std::string_view digits = descriptor.substr(7);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), rule.factor);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || rule.factor < 1) {
      fail(ErrorCode::parse_error, "bad margin factor in rule '" + std::string(descriptor) + "'");
    }
  } else {
    fail(ErrorCode::parse_error, "unknown scale rule '" + std::string(descriptor) + "'");
  }
  if (rule.kind != Kind::explicit_scales && !scales.empty()) {
    fail(ErrorCode::invalid_argument, "scales are only accepted with the explicit rule");
  }
  return rule;
}

std::vector<std::int64_t> RieszStage::frequencies() const {
  std::vector<std::int64_t> f;
  f.reserve(set.size());
  for (std::int64_t s : set.residues) f.push_back(checked_mul(s, scale));
  return f;
}

std::vector<std::uint64_t> RieszPlan::primes() const {
  std::vector<std::uint64_t> v;
  for (const auto& s : stages) v.push_back(s.p);
  return v;
}

std::vector<std::int64_t> RieszPlan::scales() const {
  std::vector<std::int64_t> v;
  for (const auto& s : stages) v.push_back(s.scale);
  return v;
}

std::vector<std::int64_t> RieszPlan::heights() const {
  std::vector<std::int64_t> v;
  for (const auto& s : stages) v.push_back(s.height);
  return v;
}

RieszPlan make_plan(std::span<const std::uint64_t> primes, const ScaleRule& rule, unsigned m) {
  RieszPlan plan = assemble(primes, m, rule, /*check=*/true);
  if (rule.kind == ScaleRule::Kind::default_margin) {
    for (std::size_t j = 1; j < plan.stages.size(); ++j) {
      if (plan.stages[j].scale < 2 * plan.stages[j - 1].height) {
        fail(ErrorCode::numeric_failure, "default rule lost its dissociation margin");
      }
    }
  }
  return plan;
}

RieszPlan make_plan_unchecked(std::span<const std::uint64_t> primes, std::span<const std::int64_t> scales,
                              unsigned m) {
  ScaleRule rule;
  rule.kind = ScaleRule::Kind::explicit_scales;
  rule.scales.assign(scales.begin(), scales.end());
  return assemble(primes, m, rule, /*check=*/false);
}

std::string plan_to_json(const RieszPlan& plan) {
  json j;
  j["m"] = plan.m;
  j["primes"] = plan.primes();
  j["rule"] = plan.rule.descriptor();
  j["scales"] = plan.scales();
  j["seeds"] = nullptr;
  return j.dump(2);
}

RieszPlan plan_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::parse_error, std::string("plan file: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::parse_error, "plan file must hold a JSON object");
  for (const auto& item : j.items()) {
    const std::string& key = item.key();
    if (key != "m" && key != "primes" && key != "rule" && key != "scales" && key != "seeds") {
      fail(ErrorCode::parse_error, "unknown plan key '" + key + "'");
    }
  }
  try {
    const auto m = j.at("m").get<unsigned>();
    const auto primes = j.at("primes").get<std::vector<std::uint64_t>>();
    const auto descriptor = j.at("rule").get<std::string>();
    const auto scales = j.at("scales").get<std::vector<std::int64_t>>();
    if (j.contains("seeds") && !j.at("seeds").is_null()) fail(ErrorCode::parse_error, "plan seeds must be null");
    const bool is_explicit = descriptor == "explicit";
    ScaleRule rule = ScaleRule::parse(descriptor, is_explicit ? scales : std::vector<std::int64_t>{});
    RieszPlan plan = make_plan(primes, rule, m);
    if (plan.scales() != scales) fail(ErrorCode::parse_error, "plan scales disagree with rule '" + descriptor + "'");
    return plan;
  } catch (const json::exception& e) {
    fail(ErrorCode::parse_error, std::string("plan file: ") + e.what());
  }
}

const char* to_string(DissociationMode mode) noexcept {
  return mode == DissociationMode::difference_blocks ? "difference_blocks" : "frequency_sums";
}

DissociationCertificate check_dissociated(const RieszPlan& plan, std::size_t stages, DissociationMode mode,
                                          std::int64_t budget) {
  if (stages == 0 || stages > plan.stages.size()) {
    fail(ErrorCode::precondition, "requested " + std::to_string(stages) + " stages of a " +
                                      std::to_string(plan.stages.size()) + "-stage plan");
  }
  std::vector<std::vector<std::int64_t>> blocks;
  std::int64_t combos = 1;
  for (std::size_t j = 0; j < stages; ++j) {
    std::vector<std::int64_t> f = plan.stages[j].frequencies();
    if (mode == DissociationMode::difference_blocks) {
      std::vector<std::int64_t> d;
      for (auto a : f)
        for (auto b : f) d.push_back(a - b);
      f = std::move(d);
    }
    blocks.push_back(distinct_sorted(std::move(f)));
    combos = checked_mul(combos, static_cast<std::int64_t>(blocks.back().size()));
    if (combos > budget) {
      fail(ErrorCode::budget_exceeded, "dissociation check needs more than " + std::to_string(budget) +
                                           " combinations");
    }
  }

  std::vector<std::pair<std::int64_t, std::int64_t>> sums;  // (sum, combination index)
  sums.reserve(static_cast<std::size_t>(combos));
  for (std::int64_t idx = 0; idx < combos; ++idx) {
    std::int64_t rest = idx;
    std::int64_t sum = 0;
    for (const auto& b : blocks) {
      const auto size = static_cast<std::int64_t>(b.size());
      sum = checked_add(sum, b[static_cast<std::size_t>(rest % size)]);
      rest /= size;
    }
    sums.emplace_back(sum, idx);
  }
  std::sort(sums.begin(), sums.end());

  DissociationCertificate cert;
  cert.stages = stages;
  cert.mode = mode;
  cert.combinations = combos;
  for (std::size_t i = 1; i < sums.size(); ++i) {
    if (sums[i].first == sums[i - 1].first) {
      cert.valid = false;
      cert.collision_value = sums[i].first;
      cert.first = decode(sums[i - 1].second, blocks);
      cert.second = decode(sums[i].second, blocks);
      break;
    }
  }
  return cert;
}

Rational SparseCoefficients::coefficient(std::int64_t frequency) const {
  auto it = counts.find(frequency);
  if (it == counts.end()) return Rational(0);
  return make_rational(it->second, denominator);
}

Rational SparseCoefficients::total_mass() const {
  BigInt total = 0;
  for (const auto& [f, c] : counts) total += c;
  return Rational(total, BigInt(denominator));
}

bool SparseCoefficients::zero_coefficient_is_one() const {
  auto it = counts.find(0);
  return it != counts.end() && it->second == denominator;
}

SparseCoefficients partial_coeffs_range(const RieszPlan& plan, std::size_t first, std::size_t last,
                                        std::int64_t budget) {
  if (first > last || last > plan.stages.size()) {
    fail(ErrorCode::precondition, "stage range (" + std::to_string(first) + ", " + std::to_string(last) +
                                      "] is outside the plan");
  }
  SparseCoefficients acc;
  acc.counts[0] = 1;
  for (std::size_t j = first; j < last; ++j) {
    const RieszStage& st = plan.stages[j];
    const CorrelationTable table = correlations(st.set);
    std::vector<std::pair<std::int64_t, std::int64_t>> stage_terms;
    for (std::int64_t d = 1 - table.q; d < table.q; ++d) {
      const std::int64_t c = table.aperiodic(d);
      if (c != 0) stage_terms.emplace_back(checked_mul(d, st.scale), c);
    }
    const auto work = static_cast<double>(acc.counts.size()) * static_cast<double>(stage_terms.size());
    if (work > 100.0 * static_cast<double>(budget)) {
      fail(ErrorCode::budget_exceeded, "sparse convolution exceeds the work budget");
    }
    std::map<std::int64_t, std::int64_t> next;
    for (const auto& [f1, c1] : acc.counts) {
      for (const auto& [f2, c2] : stage_terms) {
        auto& slot = next[checked_add(f1, f2)];
        slot = checked_add(slot, checked_mul(c1, c2));
      }
    }
    if (static_cast<std::int64_t>(next.size()) > budget) {
      fail(ErrorCode::budget_exceeded, "coefficient support exceeds " + std::to_string(budget) + " frequencies");
    }
    acc.counts = std::move(next);
    acc.denominator = checked_mul(acc.denominator, table.support_size);
  }
  return acc;
}

SparseCoefficients partial_coeffs(const RieszPlan& plan, std::size_t k, std::int64_t budget) {
  return partial_coeffs_range(plan, 0, k, budget);
}

ErgodicityReport ergodicity_sum(const RieszPlan& plan) {
  if (plan.stages.size() < 2) fail(ErrorCode::precondition, "ergodicity sums need at least two stages");
  ErgodicityReport r;
  Rational running = 0;
  for (std::size_t j = 0; j + 1 < plan.stages.size(); ++j) {
    const auto& st = plan.stages[j];
    const Rational ratio(BigInt(static_cast<std::int64_t>(st.set.size())) * st.scale,
                         BigInt(plan.stages[j + 1].scale));
    r.terms.push_back(ratio * ratio);
    running += r.terms.back();
    r.partial_sums.push_back(running);
  }
  // Under the default rule term_j = (N_j / (2^j h_j))^2 < 4^-j.
  if (plan.rule.kind == ScaleRule::Kind::default_margin && plan.scale_conditions_checked) {
    r.converged_below = Rational(1, 3);
    r.criterion_met = true;
  }
  return r;
}

Rational distance_to_nearest_integer(const Rational& x) {
  const Rational frac = x - Rational(floor_of(x));
  const Rational other = Rational(1) - frac;
  return frac < other ? frac : other;
}

QuasiInvarianceReport quasi_invariance_sum(const RieszPlan& plan, const Rational& x) {
  QuasiInvarianceReport r;
  r.x = x;
  Rational running = 0;
  for (const auto& st : plan.stages) {
    const Rational d = distance_to_nearest_integer(Rational(BigInt(st.scale)) * x);
    const BigInt k = static_cast<std::int64_t>(st.set.size());
    r.terms.push_back(Rational(k * k) * d * d);
    running += r.terms.back();
    r.partial_sums.push_back(running);
  }
  r.tail_vanishes = !r.terms.empty() && r.terms.back() == 0;
  return r;
}

}  // namespace flatpoly
