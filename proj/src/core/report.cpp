#include "core/report.hpp"

#include <algorithm>

namespace flatpoly::report {

json rational(const Rational& r) {
  return json{{"num", numerator_string(r)}, {"den", denominator_string(r)}};
}

json rationals(const std::vector<Rational>& v) {
  json out = json::array();
  for (const auto& r : v) out.push_back(rational(r));
  return out;
}

json to_json(const FieldSpec& field) {
  return json{{"p", field.p},
              {"m", field.m},
              {"modulus_poly", field.modulus_poly},
              {"generator", field.generator},
              {"trial_divisions", field.trial_divisions}};
}

json to_json(const SingerSet& set) {
  json j{{"p", set.p}, {"m", set.m}, {"q", set.q}, {"size", set.size()}, {"residues", set.residues},
         {"normalized", set.normalized}};
  if (set.normalized) j["gap"] = gap_statistic(set);
  return j;
}

json to_json(const DifferenceReport& report) {
  std::uint32_t lo = 0;
  std::uint32_t hi = 0;
  if (report.counts.size() > 1) {
    lo = *std::min_element(report.counts.begin() + 1, report.counts.end());
    hi = *std::max_element(report.counts.begin() + 1, report.counts.end());
  }
  json j{{"valid", report.valid}, {"min_count", lo}, {"max_count", hi}};
  j["first_violation"] = report.first_violation ? json(*report.first_violation) : json(nullptr);
  return j;
}

json to_json(const FlatnessReport& r) {
  return json{{"p_power", r.p_power},   {"q", r.q},
              {"alpha", r.alpha},       {"grid", r.grid_size},
              {"defect_sq", r.defect_sq}, {"defect_abs", r.defect_abs},
              {"l1", r.l1_norm},        {"l2_defect_closed", r.l2_defect_closed},
              {"s3_bound", r.s3_bound}, {"method", "riemann_mean_fft"}};
}

json to_json(const L2DefectExact& r) {
  return json{{"value", r.value}, {"squared", rational(r.squared)}, {"perfect_difference", r.perfect_difference},
              {"method", "correlation_parseval"}};
}

json to_json(const MZReport& r) {
  return json{{"alpha", r.alpha},           {"n", r.n},
              {"discrete_mean", r.discrete_mean}, {"integral", r.integral},
              {"ratio", r.ratio},           {"integral_grid", r.integral_grid}};
}

json to_json(const MahlerReport& r) {
  json j{{"method", to_string(r.method)}, {"degree", r.degree}, {"value", r.value}, {"l1", r.l1}};
  if (r.method == MahlerMethod::log_integral) {
    j["grid"] = r.grid_size;
    j["perturbed_points"] = r.perturbed_points;
  } else {
    j["roots_outside"] = r.roots_outside;
  }
  return j;
}

json to_json(const RieszMahlerReport& r) {
  return json{{"factors", r.factors}, {"partial_products", r.partial_products}, {"value", r.value}};
}

json to_json(const RealLineReport& r) {
  return json{{"alpha", r.alpha},       {"s", r.s},     {"truncation", r.truncation},
              {"grid", r.grid_size},    {"value", r.value}, {"tail_bound", r.tail_bound},
              {"method", "periodized_kernel_circle"}};
}

json to_json(const DissociationCertificate& c) {
  json j{{"stages", c.stages}, {"mode", to_string(c.mode)}, {"valid", c.valid}, {"combinations", c.combinations}};
  if (c.collision_value) {
    j["collision"] = json{{"value", *c.collision_value}, {"first", c.first}, {"second", c.second}};
  } else {
    j["collision"] = nullptr;
  }
  return j;
}

json to_json(const SparseCoefficients& c) {
  json freqs = json::array();
  json counts = json::array();
  for (const auto& [f, n] : c.counts) {
    freqs.push_back(f);
    counts.push_back(n);
  }
  return json{{"denominator", c.denominator}, {"frequencies", freqs}, {"counts", counts},
              {"support", c.support_size()}, {"zero_coefficient", rational(c.coefficient(0))},
              {"total_mass", rational(c.total_mass())}, {"zero_coefficient_is_one", c.zero_coefficient_is_one()}};
}

json to_json(const ErgodicityReport& r) {
  json j{{"terms", rationals(r.terms)}, {"partial_sums", rationals(r.partial_sums)},
         {"criterion_met", r.criterion_met}};
  j["converged_below"] = r.converged_below ? rational(*r.converged_below) : json(nullptr);
  return j;
}

json to_json(const QuasiInvarianceReport& r) {
  return json{{"x", rational(r.x)}, {"terms", rationals(r.terms)}, {"partial_sums", rationals(r.partial_sums)},
              {"tail_vanishes", r.tail_vanishes}, {"diagnostic_only", true}};
}

json to_json(const RankOneParams& params) {
  json stages = json::array();
  std::vector<std::int64_t> heights;
  for (const auto& st : params.stages) {
    stages.push_back(json{{"p", st.p}, {"cuts", st.cuts}, {"spacers", st.spacers}, {"offsets", st.offsets},
                          {"height", st.height}, {"scale", st.scale}});
    heights.push_back(st.height);
  }
  return json{{"h", heights}, {"stages", stages}};
}

json to_json(const FlowParams& params) {
  json stages = json::array();
  for (const auto& st : params.stages) {
    stages.push_back(json{{"cuts", st.cuts}, {"spacers", rationals(st.spacers)}, {"offsets", rationals(st.offsets)},
                          {"height", rational(st.height)}, {"scale", rational(st.scale)}});
  }
  return json{{"tau", rational(params.tau)}, {"base_height", rational(params.base_height)}, {"stages", stages}};
}

json to_json(const GrowthReport& r) {
  return json{{"terms", rationals(r.terms)}, {"partial_sums", rationals(r.partial_sums)},
              {"measures", rationals(r.measures)}, {"terms_nondecreasing", r.terms_nondecreasing},
              {"finite_measure", r.finite_measure}};
}

json to_json(const CorrelationReport& r) {
  return json{{"k", r.k}, {"K", r.K}, {"sim_stage", r.sim_stage}, {"n", r.n},
              {"predicted", rational(r.predicted)}, {"empirical", rational(r.empirical)},
              {"tolerance", rational(r.tolerance)}, {"within_tolerance", r.within_tolerance}};
}

json to_json(const Tower& t) {
  json j{{"stage", t.stage}, {"levels", t.levels}, {"width", rational(t.width)},
         {"spacer_levels", t.spacer_levels}, {"total_measure", rational(t.total_measure)},
         {"closed_form_measure", rational(t.closed_form_measure)}};
  if (t.levels <= max_exported_levels) j["origin"] = t.origin;
  return j;
}

}  // namespace flatpoly::report
