#include "core/rankone.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "core/error.hpp"
#include "core/number_theory.hpp"

namespace flatpoly {
namespace {

RankOneStage make_stage(std::vector<std::int64_t> spacers, std::int64_t prev_height) {
  if (spacers.empty()) fail(ErrorCode::invalid_argument, "a stage needs at least one column");
  RankOneStage st;
  st.cuts = static_cast<std::int64_t>(spacers.size());
  st.offsets.reserve(spacers.size());
  std::int64_t pos = 0;
  for (std::int64_t a : spacers) {
    if (a < 0) fail(ErrorCode::negative_spacer, "negative spacer " + std::to_string(a));
    st.offsets.push_back(pos);
    pos = checked_add(pos, checked_add(prev_height, a));
  }
  st.height = pos;
  st.spacers = std::move(spacers);
  return st;
}

// 1 at the stage-k base level inside the stage-K tower, built by stacking.
std::vector<char> base_marker(const RankOneParams& params, std::size_t k, std::size_t K, std::int64_t budget) {
  if (params.height(K) > budget) {
    fail(ErrorCode::budget_exceeded, "tower height " + std::to_string(params.height(K)) + " exceeds budget");
  }
  std::vector<char> mark(static_cast<std::size_t>(params.height(k)), 0);
  mark[0] = 1;
  for (std::size_t j = k; j < K; ++j) {
    const RankOneStage& st = params.stages[j];
    std::vector<char> next;
    next.reserve(static_cast<std::size_t>(st.height));
    for (std::int64_t a : st.spacers) {
      next.insert(next.end(), mark.begin(), mark.end());
      next.insert(next.end(), static_cast<std::size_t>(a), 0);
    }
    mark = std::move(next);
  }
  return mark;
}

void check_stage_range(const RankOneParams& params, std::size_t k, std::size_t K) {
  if (k > K || K > params.size()) {
    fail(ErrorCode::precondition, "stage range k=" + std::to_string(k) + ", K=" + std::to_string(K) +
                                      " outside a " + std::to_string(params.size()) + "-stage construction");
  }
}

}  // namespace

std::int64_t RankOneStage::spacer_total() const {
  std::int64_t total = 0;
  for (std::int64_t a : spacers) total = checked_add(total, a);
  return total;
}

std::int64_t RankOneParams::height(std::size_t k) const {
  if (k > stages.size()) fail(ErrorCode::precondition, "stage " + std::to_string(k) + " not built");
  return k == 0 ? 1 : stages[k - 1].height;
}

RankOneParams RankOneParams::from_cutting(const std::vector<std::vector<std::int64_t>>& spacers) {
  RankOneParams params;
  std::int64_t h = 1;
  for (const auto& list : spacers) {
    params.stages.push_back(make_stage(list, h));
    h = params.stages.back().height;
  }
  return params;
}

RankOneParams derive_map_params(const RieszPlan& plan) {
  RankOneParams params;
  std::int64_t prev = 1;
  for (std::size_t j = 0; j < plan.stages.size(); ++j) {
    const RieszStage& rs = plan.stages[j];
    const auto& s = rs.set.residues;
    if (s.empty() || s.front() != 0) fail(ErrorCode::precondition, "stage sets must be normalized");
    std::vector<std::int64_t> spacers;
    for (std::size_t i = 1; i < s.size(); ++i) {
      const std::int64_t a = checked_mul(s[i] - s[i - 1], rs.scale) - prev;
      if (a < 0) {
        fail(ErrorCode::negative_spacer, "stage " + std::to_string(j + 1) + ": spacer " + std::to_string(a) +
                                             " (scale " + std::to_string(rs.scale) + " below height " +
                                             std::to_string(prev) + ")");
      }
      spacers.push_back(a);
    }
    spacers.push_back(0);
    RankOneStage st = make_stage(std::move(spacers), prev);
    st.scale = rs.scale;
    st.p = rs.p;
    // r_j h_{j-1} + sum a == s_top N_j + h_{j-1}
    if (st.height != rs.height || st.height != checked_add(checked_mul(rs.top(), rs.scale), prev)) {
      fail(ErrorCode::numeric_failure, "height recursions disagree at stage " + std::to_string(j + 1));
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (st.offsets[i] != s[i] * rs.scale) {
        fail(ErrorCode::numeric_failure, "column offsets do not reproduce the frequency set");
      }
    }
    prev = st.height;
    params.stages.push_back(std::move(st));
  }
  return params;
}

FlowParams derive_flow_params(const RieszPlan& plan, const Rational& tau) {
  if (tau <= 0) fail(ErrorCode::invalid_argument, "flow scale tau must be positive");
  const RankOneParams map = derive_map_params(plan);
  FlowParams flow;
  flow.tau = tau;
  flow.base_height = tau;
  Rational prev = tau;
  for (std::size_t j = 0; j < plan.stages.size(); ++j) {
    const RieszStage& rs = plan.stages[j];
    const auto& s = rs.set.residues;
    FlowStage st;
    st.cuts = static_cast<std::int64_t>(s.size());
    st.scale = tau * rs.scale;
    Rational pos = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const Rational a = i + 1 < s.size() ? Rational(BigInt(s[i + 1] - s[i])) * st.scale - prev : Rational(0);
      st.offsets.push_back(pos);
      st.spacers.push_back(a);
      pos += prev + a;
    }
    st.height = pos;
    if (st.height != Rational(BigInt(rs.top())) * st.scale + prev ||
        st.height != tau * map.stages[j].height) {
      fail(ErrorCode::numeric_failure, "flow heights disagree at stage " + std::to_string(j + 1));
    }
    prev = st.height;
    flow.stages.push_back(std::move(st));
  }
  return flow;
}

GrowthReport measure_growth(const RankOneParams& params) {
  if (params.stages.empty()) fail(ErrorCode::precondition, "growth needs at least one stage");
  GrowthReport r;
  Rational sum = 0;
  Rational measure = 1;
  std::int64_t prev = 1;
  for (const auto& st : params.stages) {
    const Rational term(BigInt(st.spacer_total()), BigInt(st.cuts) * prev);
    r.terms.push_back(term);
    sum += term;
    measure *= 1 + term;
    r.partial_sums.push_back(sum);
    r.measures.push_back(measure);
    prev = st.height;
  }
  r.terms_nondecreasing = std::is_sorted(r.terms.begin(), r.terms.end());
  const bool all_zero = std::all_of(r.terms.begin(), r.terms.end(), [](const Rational& t) { return t == 0; });
  bool geometric = r.terms.size() >= 2;
  for (std::size_t j = 1; geometric && j < r.terms.size(); ++j) {
    geometric = 2 * r.terms[j] <= r.terms[j - 1];
  }
  r.finite_measure = all_zero || geometric;
  return r;
}

std::int64_t Tower::shift(std::int64_t level) const {
  if (level < 0 || level + 1 >= levels) {
    fail(ErrorCode::precondition, "level " + std::to_string(level) + " has no image inside the tower");
  }
  return level + 1;
}

Tower build_tower(const RankOneParams& params, std::size_t K, std::int64_t budget) {
  check_stage_range(params, 0, K);
  if (params.height(K) > budget) {
    fail(ErrorCode::budget_exceeded, "tower height " + std::to_string(params.height(K)) + " exceeds budget");
  }
  if (K > 65535) fail(ErrorCode::budget_exceeded, "too many stages for a tower");
  Tower t;
  t.stage = K;
  std::vector<std::uint16_t> levels{0};
  BigInt cuts = 1;
  Rational closed = 1;
  for (std::size_t j = 0; j < K; ++j) {
    const RankOneStage& st = params.stages[j];
    std::vector<std::uint16_t> next;
    next.reserve(static_cast<std::size_t>(st.height));
    for (std::int64_t a : st.spacers) {
      next.insert(next.end(), levels.begin(), levels.end());
      next.insert(next.end(), static_cast<std::size_t>(a), static_cast<std::uint16_t>(j + 1));
    }
    levels = std::move(next);
    cuts *= st.cuts;
    closed += Rational(BigInt(st.spacer_total()), cuts);
  }
  t.levels = static_cast<std::int64_t>(levels.size());
  t.width = Rational(BigInt(1), cuts);
  t.spacer_levels.assign(K, 0);
  for (std::uint16_t o : levels) {
    if (o > 0) ++t.spacer_levels[o - 1];
  }
  t.origin = std::move(levels);
  t.total_measure = t.width * t.levels;
  t.closed_form_measure = closed;
  if (t.levels != params.height(K)) fail(ErrorCode::numeric_failure, "tower height mismatch");
  return t;
}

std::vector<std::int64_t> base_occurrences(const RankOneParams& params, std::size_t k, std::size_t K,
                                           std::int64_t budget) {
  check_stage_range(params, k, K);
  std::vector<std::int64_t> acc{0};
  for (std::size_t j = k; j < K; ++j) {
    const auto& offs = params.stages[j].offsets;
    if (static_cast<double>(acc.size()) * static_cast<double>(offs.size()) > static_cast<double>(budget)) {
      fail(ErrorCode::budget_exceeded, "base occurrence count exceeds " + std::to_string(budget));
    }
    std::vector<std::int64_t> next;
    next.reserve(acc.size() * offs.size());
    for (std::int64_t a : acc)
      for (std::int64_t o : offs) next.push_back(a + o);
    acc = std::move(next);
  }
  std::sort(acc.begin(), acc.end());
  return acc;
}

std::map<std::int64_t, std::int64_t> offset_histogram(const RankOneParams& params, std::size_t k, std::size_t K,
                                                      std::int64_t budget) {
  const std::vector<std::int64_t> occ = base_occurrences(params, k, K);
  if (static_cast<double>(occ.size()) * static_cast<double>(occ.size()) > static_cast<double>(budget)) {
    fail(ErrorCode::budget_exceeded, "offset histogram exceeds " + std::to_string(budget) + " pairs");
  }
  std::map<std::int64_t, std::int64_t> hist;
  for (std::int64_t a : occ)
    for (std::int64_t b : occ) ++hist[b - a];
  return hist;
}

CorrelationReport correlation(const RankOneParams& params, std::size_t k, std::size_t K, std::int64_t n,
                              std::size_t sim_stage, std::int64_t budget) {
  if (sim_stage == 0) sim_stage = K;
  if (k >= K || K > sim_stage) {
    fail(ErrorCode::precondition, "correlation needs k < K <= sim_stage");
  }
  check_stage_range(params, k, sim_stage);
  const std::int64_t h_sim = params.height(sim_stage);
  if (n < 0 || n >= h_sim) {
    fail(ErrorCode::invalid_argument, "lag " + std::to_string(n) + " outside [0, " + std::to_string(h_sim) + ")");
  }

  CorrelationReport r;
  r.k = k;
  r.K = K;
  r.sim_stage = sim_stage;
  r.n = n;

  const std::vector<std::int64_t> occ = base_occurrences(params, k, K);
  std::int64_t pairs = 0;
  for (std::int64_t a : occ) pairs += static_cast<std::int64_t>(std::count(occ.begin(), occ.end(), a + n));
  r.predicted = Rational(BigInt(pairs), BigInt(static_cast<std::int64_t>(occ.size())));

  // Every level has the same width, so measures reduce to level counts.
  const std::vector<char> mark = base_marker(params, k, sim_stage, budget);
  std::int64_t base = 0;
  std::int64_t hits = 0;
  for (std::int64_t l = 0; l < h_sim; ++l) {
    if (!mark[static_cast<std::size_t>(l)]) continue;
    ++base;
    if (l + n < h_sim && mark[static_cast<std::size_t>(l + n)]) ++hits;
  }
  r.empirical = Rational(BigInt(hits), BigInt(base));
  r.tolerance = Rational(BigInt(n), BigInt(h_sim));
  const Rational diff = r.empirical > r.predicted ? r.empirical - r.predicted : r.predicted - r.empirical;
  r.within_tolerance = diff <= r.tolerance;
  return r;
}

}  // namespace flatpoly
