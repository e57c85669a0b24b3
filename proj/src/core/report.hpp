#pragma once

#include "core/analysis.hpp"
#include "core/mahler.hpp"
#include "core/rankone.hpp"
#include "core/riesz.hpp"
#include "core/singer.hpp"
#include "json.hpp"

namespace flatpoly::report {

using nlohmann::json;

// Exact rationals travel as {"num": "...", "den": "..."} string pairs.
json rational(const Rational& r);
json rationals(const std::vector<Rational>& v);

json to_json(const FieldSpec& field);
json to_json(const SingerSet& set);
json to_json(const DifferenceReport& report);
json to_json(const FlatnessReport& report);
json to_json(const L2DefectExact& report);
json to_json(const MZReport& report);
json to_json(const MahlerReport& report);
json to_json(const RieszMahlerReport& report);
json to_json(const RealLineReport& report);
json to_json(const DissociationCertificate& cert);
json to_json(const SparseCoefficients& coeffs);
json to_json(const ErgodicityReport& report);
json to_json(const QuasiInvarianceReport& report);
json to_json(const RankOneParams& params);
json to_json(const FlowParams& params);
json to_json(const GrowthReport& report);
json to_json(const CorrelationReport& report);

inline constexpr std::int64_t max_exported_levels = 10'000;
// Level origins are included only for towers of at most max_exported_levels.
json to_json(const Tower& tower);

}  // namespace flatpoly::report
