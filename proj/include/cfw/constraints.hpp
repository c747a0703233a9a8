#pragma once
// High-level control fault model: per-bit constraints on the data results of
// an instruction set.  A TYPE1 constraint asks for an active value in bit k
// of the executed function's result; a TYPE2 constraint asks for a pattern
// on which bit k of function i is inactive while bit k of function j is
// active.  A test satisfying every non-redundant constraint exercises the
// control structure exhaustively.

#include <cstdint>
#include <span>
#include <vector>

#include "cfw/isa.hpp"

namespace cfw {

enum class ConstraintKind { kType1, kType2 };

struct Constraint {
  ConstraintKind kind = ConstraintKind::kType2;
  int i = 0;   // executed function (0-based)
  int j = -1;  // observed function for TYPE2, -1 for TYPE1
  int k = 0;   // bit index, 0..m-1

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

enum class ConstraintMode {
  kFull,  // all ordered function pairs
  kHd1,   // only pairs whose control codes differ in exactly one bit
};

struct ConstraintSet {
  ConstraintMode mode = ConstraintMode::kFull;
  Polarity polarity = Polarity::kActiveHigh;
  std::vector<Constraint> constraints;  // i-major; TYPE1 bits, then (j, k)

  std::size_t type1_count() const;
  std::size_t type2_count() const;
};

ConstraintSet enumerate_constraints(const InstructionSet& isa,
                                    ConstraintMode mode);

// y_all = data results of one pattern (eval_all output).
bool check_constraint(const Constraint& c, std::span<const word_t> y_all,
                      Polarity polarity);

// Model-size bookkeeping.  c_saf counts stuck-at targets of the flat
// netlist view (2nmp), c_cfm the pairwise constraint metric (n(n-1)mp) and
// c_cfm_hd1 its distance-1 relaxation (nmp).  The time estimates are the
// sizes scaled by per-fault simulation times and stay dimensionless until
// real times are supplied.
struct ModelMetrics {
  std::uint64_t c_saf = 0;
  std::uint64_t c_cfm = 0;
  std::uint64_t c_cfm_hd1 = 0;
  double tc_saf_estimate = 0.0;
  double tc_cfm_estimate = 0.0;
};

// Throws std::overflow_error when a product exceeds the 64-bit counter.
ModelMetrics model_size_metrics(std::uint64_t n, std::uint64_t m,
                                std::uint64_t p, double t_saf = 1.0,
                                double t_cfm = 1.0);

}  // namespace cfw
