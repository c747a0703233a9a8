#pragma once
// High-level fault simulation.  The fault table D holds, for every ordered
// function pair (i, j), an m-bit vector whose bit k records that some pattern
// of function i produced an inactive bit k while function j produced an
// active one.  TYPE1 satisfaction is tracked per function alongside.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cfw/constraints.hpp"
#include "cfw/test_set.hpp"

namespace cfw {

struct FaultTable {
  int n = 0;
  int m = 0;
  std::vector<word_t> type1;  // n entries
  std::vector<word_t> d;      // n*n entries, row-major, diagonal unused

  FaultTable() = default;
  FaultTable(int n_, int m_) : n(n_), m(m_), type1(n_, 0), d(n_ * n_, 0) {}

  word_t at(int i, int j) const { return d[static_cast<std::size_t>(i) * n + j]; }
  word_t& at(int i, int j) { return d[static_cast<std::size_t>(i) * n + j]; }

  bool satisfies(const Constraint& c) const;

  friend bool operator==(const FaultTable&, const FaultTable&) = default;
};

// One pass over the test set; each pattern updates row `func` and the TYPE1
// word of `func`.  Re-running over a superset of patterns only adds bits.
FaultTable simulate(const InstructionSet& isa, const TestSet& test);

struct CoverageReport {
  std::uint64_t satisfied = 0;
  std::uint64_t total = 0;               // n(n-1)m TYPE2 targets
  std::uint64_t redundant_excluded = 0;  // proven-unsatisfiable targets
  double raw_pct = 0.0;
  double adjusted_pct = 0.0;  // satisfied / (total - redundant_excluded)
};

// `redundant` must list TYPE2 constraints only; naming a satisfied one is an
// inconsistency and throws std::invalid_argument.
CoverageReport coverage(const FaultTable& table,
                        std::span<const Constraint> redundant);

// Text form: header line, then one "<mn_i> <mn_j> <bits>" line per ordered
// pair, bit m-1 leftmost.
std::string render_fault_table(const FaultTable& table,
                               const InstructionSet& isa);

struct ParsedFaultTable {
  FaultTable table;
  std::vector<std::string> mnemonics;
};
ParsedFaultTable parse_fault_table(std::string_view text);  // throws std::invalid_argument

std::string render_coverage(const CoverageReport& report);

}  // namespace cfw
