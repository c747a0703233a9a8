#include "cfw/constraints.hpp"

#include <bit>
#include <stdexcept>

namespace cfw {

std::size_t ConstraintSet::type1_count() const {
  std::size_t c = 0;
  for (const Constraint& con : constraints)
    if (con.kind == ConstraintKind::kType1) ++c;
  return c;
}

std::size_t ConstraintSet::type2_count() const {
  return constraints.size() - type1_count();
}

ConstraintSet enumerate_constraints(const InstructionSet& isa,
                                    ConstraintMode mode) {
  ConstraintSet cs;
  cs.mode = mode;
  cs.polarity = isa.polarity;
  const int n = isa.n();
  const int m = isa.width;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < m; ++k)
      cs.constraints.push_back({ConstraintKind::kType1, i, -1, k});
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      if (mode == ConstraintMode::kHd1) {
        const unsigned diff = isa.functions[i].code ^ isa.functions[j].code;
        if (std::popcount(diff) != 1) continue;
      }
      for (int k = 0; k < m; ++k)
        cs.constraints.push_back({ConstraintKind::kType2, i, j, k});
    }
  }
  return cs;
}

bool check_constraint(const Constraint& c, std::span<const word_t> y_all,
                      Polarity polarity) {
  // Active value is 1 for active-high gating, 0 for active-low.
  const bool active_is_one = polarity == Polarity::kActiveHigh;
  const bool yi_k = (y_all[c.i] >> c.k) & 1;
  if (c.kind == ConstraintKind::kType1) return yi_k == active_is_one;
  const bool yj_k = (y_all[c.j] >> c.k) & 1;
  return yi_k != active_is_one && yj_k == active_is_one;
}

ModelMetrics model_size_metrics(std::uint64_t n, std::uint64_t m,
                                std::uint64_t p, double t_saf, double t_cfm) {
  auto mul = [](std::uint64_t a, std::uint64_t b) {
    if (b != 0 && a > ~std::uint64_t{0} / b)
      throw std::overflow_error("model size metric overflows 64 bits");
    return a * b;
  };
  ModelMetrics mm;
  mm.c_saf = mul(mul(mul(2, n), m), p);
  mm.c_cfm = mul(mul(mul(n, n - 1), m), p);
  mm.c_cfm_hd1 = mul(mul(n, m), p);
  mm.tc_saf_estimate = static_cast<double>(mm.c_saf) * t_saf;
  mm.tc_cfm_estimate = static_cast<double>(mm.c_cfm) * t_cfm;
  return mm;
}

}  // namespace cfw
