#include "core/singer.hpp"

#include <algorithm>
#include <sstream>
#include <string>

#include "core/error.hpp"
#include "core/finite_field.hpp"
#include "core/number_theory.hpp"

namespace flatpoly {
namespace {

struct Sizes {
  std::uint64_t pm;     // p^m
  std::uint64_t order;  // p^{3m} - 1
  std::int64_t q;       // p^{2m} + p^m + 1
};

Sizes sizes_for(std::uint64_t p, unsigned m, const SingerBudget& budget) {
  if (m == 0) fail(ErrorCode::invalid_argument, "extension exponent m must be positive");
  if (!is_prime(p)) fail(ErrorCode::not_prime, std::to_string(p) + " is not prime");
  auto pm = checked_pow(p, m);
  auto p3m = checked_pow(p, 3 * m);
  if (!pm || !p3m) fail(ErrorCode::budget_exceeded, "p^{3m} does not fit in 63 bits");
  const auto q = static_cast<std::int64_t>(*pm * *pm + *pm + 1);
  if (q > budget.max_modulus) {
    std::ostringstream msg;
    msg << "modulus q = " << q << " exceeds the budget of " << budget.max_modulus;
    fail(ErrorCode::budget_exceeded, msg.str());
  }
  return {*pm, *p3m - 1, q};
}

}  // namespace

FieldSpec canonical_field(std::uint64_t p, unsigned m, const SingerBudget& budget) {
  const Sizes sz = sizes_for(p, m, budget);
  const unsigned n = 3 * m;

  FieldSpec spec;
  spec.p = p;
  spec.m = m;

  const std::uint64_t lower_codes = sz.order + 1;  // p^n monic candidates
  for (std::uint64_t code = 0; code < lower_codes; ++code) {
    std::vector<std::uint64_t> f(n + 1, 0);
    std::uint64_t c = code;
    for (unsigned i = 0; i < n; ++i) {
      f[i] = c % p;
      c /= p;
    }
    f[n] = 1;
    if (f[0] == 0) continue;  // divisible by x
    if (is_irreducible(p, f)) {
      spec.modulus_poly = std::move(f);
      break;
    }
  }
  if (spec.modulus_poly.empty()) fail(ErrorCode::numeric_failure, "no irreducible polynomial found");

  // p^{3m} - 1 = (p^m - 1)(p^{2m} + p^m + 1); factoring the cofactors keeps
  // trial division at O(p^{m/2} + p^m).
  std::uint64_t used_a = 0, used_b = 0;
  auto divisors = prime_divisors(sz.pm - 1, budget.max_trial_divisions, &used_a);
  auto more = prime_divisors(static_cast<std::uint64_t>(sz.q), budget.max_trial_divisions - used_a, &used_b);
  divisors.insert(divisors.end(), more.begin(), more.end());
  std::sort(divisors.begin(), divisors.end());
  divisors.erase(std::unique(divisors.begin(), divisors.end()), divisors.end());
  spec.trial_divisions = used_a + used_b;

  QuotientRing field(p, spec.modulus_poly);
  for (std::uint64_t code = 1; code <= sz.order; ++code) {
    FieldElement g = field.from_code(code);
    if (is_primitive(field, g, divisors)) {
      spec.generator = std::move(g);
      break;
    }
  }
  if (spec.generator.empty()) fail(ErrorCode::numeric_failure, "no primitive element found");
  return spec;
}

SingerSet construct_singer_raw(const FieldSpec& spec, const SingerBudget& budget) {
  const Sizes sz = sizes_for(spec.p, spec.m, budget);
  QuotientRing field(spec.p, spec.modulus_poly);
  const std::size_t n = field.degree();

  // The relative trace x + x^{p^m} + x^{p^{2m}} onto GF(p^m) is GF(p)-linear,
  // so it is tabulated on the power basis once.
  std::vector<FieldElement> basis_trace;
  for (std::size_t k = 0; k < n; ++k) {
    FieldElement e = field.zero();
    e[k] = 1;
    FieldElement f1 = field.pow(e, sz.pm);
    FieldElement f2 = field.pow(f1, sz.pm);
    basis_trace.push_back(field.add(field.add(e, f1), f2));
  }

  SingerSet set;
  set.p = spec.p;
  set.m = spec.m;
  set.q = sz.q;
  set.residues.reserve(sz.pm + 1);

  const std::uint64_t p = spec.p;
  std::vector<std::uint64_t> tr(n);
  FieldElement x = field.one();
  for (std::int64_t i = 0; i < sz.q; ++i) {
    std::fill(tr.begin(), tr.end(), 0);
    for (std::size_t k = 0; k < n; ++k) {
      const std::uint64_t c = x[k];
      if (c == 0) continue;
      for (std::size_t t = 0; t < n; ++t) tr[t] = (tr[t] + c * basis_trace[k][t]) % p;
    }
    if (std::all_of(tr.begin(), tr.end(), [](std::uint64_t v) { return v == 0; })) {
      set.residues.push_back(i);
    }
    x = field.mul(x, spec.generator);
  }
  if (set.residues.size() != sz.pm + 1) {
    fail(ErrorCode::numeric_failure, "trace-zero index set has the wrong size");
  }
  return set;
}

SingerSet construct_singer(std::uint64_t p, unsigned m, const SingerBudget& budget) {
  return normalize(construct_singer_raw(canonical_field(p, m, budget), budget));
}

DifferenceReport verify_perfect_difference(std::span<const std::int64_t> residues, std::int64_t q) {
  if (q < 1) fail(ErrorCode::invalid_argument, "modulus must be positive");
  std::vector<std::int64_t> sorted(residues.begin(), residues.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] < 0 || sorted[i] >= q) {
      fail(ErrorCode::invalid_argument, "residue " + std::to_string(sorted[i]) + " out of range [0, q)");
    }
    if (i > 0 && sorted[i] == sorted[i - 1]) {
      fail(ErrorCode::invalid_argument, "duplicate residue " + std::to_string(sorted[i]));
    }
  }
  DifferenceReport report;
  report.counts.assign(static_cast<std::size_t>(q), 0);
  for (std::int64_t a : sorted) {
    for (std::int64_t b : sorted) {
      if (a == b) continue;
      std::int64_t d = a - b;
      if (d < 0) d += q;
      ++report.counts[static_cast<std::size_t>(d)];
    }
  }
  for (std::int64_t r = 1; r < q; ++r) {
    if (report.counts[static_cast<std::size_t>(r)] != 1) {
      report.first_violation = r;
      break;
    }
  }
  report.valid = !report.first_violation.has_value();
  return report;
}

SingerSet normalize(const SingerSet& set) {
  const auto report = verify_perfect_difference(set.residues, set.q);
  if (!report.valid) fail(ErrorCode::not_perfect_difference, "cannot normalize: not a perfect difference set");

  std::vector<std::int64_t> sorted = set.residues;
  std::sort(sorted.begin(), sorted.end());
  std::int64_t shift = -1;
  if (sorted.size() == 1) {
    shift = sorted[0];  // q = 1: the lone residue 0
  } else {
    for (std::int64_t y : sorted) {
      const std::int64_t x = (y + 1) % set.q;
      if (std::binary_search(sorted.begin(), sorted.end(), x)) {
        shift = y;
        break;
      }
    }
  }
  SingerSet out = set;
  for (auto& s : out.residues) s = ((s - shift) % set.q + set.q) % set.q;
  std::sort(out.residues.begin(), out.residues.end());
  out.normalized = true;
  return out;
}

std::int64_t gap_statistic(const SingerSet& set) {
  if (set.residues.empty()) fail(ErrorCode::invalid_argument, "empty set");
  return set.q - *std::max_element(set.residues.begin(), set.residues.end());
}

SingerSet singer_from_residues(std::span<const std::int64_t> residues, std::int64_t q) {
  const auto report = verify_perfect_difference(residues, q);
  if (!report.valid) {
    fail(ErrorCode::not_perfect_difference,
         "residue " + std::to_string(*report.first_violation) + " does not occur exactly once as a difference");
  }
  SingerSet set;
  set.q = q;
  set.residues.assign(residues.begin(), residues.end());
  std::sort(set.residues.begin(), set.residues.end());
  // Recover p^m from |S| = p^m + 1 when it is a prime power.
  const std::uint64_t pm = set.residues.size() - 1;
  for (std::uint64_t p = 2; p <= pm; ++p) {
    if (pm % p != 0) continue;
    std::uint64_t v = pm;
    unsigned m = 0;
    while (v % p == 0) {
      v /= p;
      ++m;
    }
    if (v == 1 && is_prime(p)) {
      set.p = p;
      set.m = m;
    }
    break;
  }
  set.normalized = set.residues.size() >= 2 && set.residues[0] == 0 && set.residues[1] == 1;
  return set;
}

}  // namespace flatpoly
