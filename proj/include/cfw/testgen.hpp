#pragma once
// Simulation-based test generation.  A greedy search keeps an operand pair
// iff it satisfies at least one still-open constraint of the function being
// targeted; a fixed corner-case deck is tried before uniform random pairs.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cfw/constraints.hpp"
#include "cfw/fault_table.hpp"
#include "cfw/test_set.hpp"

namespace cfw {

// Deterministic operand-pair deck: all ordered pairs over {all-zeros,
// all-ones, 1...110, 0...001, 01-alternating, 10-alternating, one-hot bits},
// duplicates removed keeping first occurrence.  13 values / 169 pairs at m=8.
std::vector<std::pair<word_t, word_t>> corner_case_deck(int m);

struct GenerateResult {
  TestSet test;
  FaultTable table;                    // exactly simulate(isa, test)
  std::vector<Constraint> uncovered;   // cs order, never satisfied
};

// Deterministic for fixed inputs.  `budget` caps the candidate pairs tried
// per function (deck candidates included); the search for a function stops
// early once all of its constraints in `cs` are satisfied.
GenerateResult generate(const InstructionSet& isa, const ConstraintSet& cs,
                        std::uint64_t budget, std::uint64_t seed);

// Reverse-order pass dropping patterns whose cs-coverage is carried by the
// remaining ones; preserves the satisfied-constraint set exactly.
TestSet compact(const TestSet& test, const ConstraintSet& cs,
                const InstructionSet& isa);

// Archival form: "seed <u64>" header then "test <mnemonic> <hex-a> <hex-b>".
std::string render_test_set(const TestSet& test, const InstructionSet& isa);
TestSet parse_test_set(std::string_view text, const InstructionSet& isa);

// Self-test program document: [CORE] templates, [PATTERNS] exec lines,
// [OPERANDS] hex operand pairs, cycled in lockstep by the program core.
std::string emit_test_program(const TestSet& test, const InstructionSet& isa);
std::vector<TestPattern> parse_test_program(std::string_view text,
                                            const InstructionSet& isa);

std::string operand_hex(word_t v, int m);

}  // namespace cfw
