#pragma once
// Constraint-level redundancy proving.  A constraint that no operand pair can
// satisfy is redundant and must be excluded from the coverage denominator.
// The prover escalates: partial truth-table reasoning over truncated
// operands, exhaustive sweep when 2^(2m) stays under a cap, then a
// corner-case deck plus random probing which can certify satisfiable but
// never redundant.

#include <cstdint>
#include <string>
#include <vector>

#include "cfw/constraints.hpp"
#include "cfw/isa.hpp"

namespace cfw {

enum class VerdictStatus { kSatisfiable, kRedundant, kUnknown };
enum class ProofMethod { kExhaustive, kPartialTt, kCornerCase };

struct Verdict {
  VerdictStatus status = VerdictStatus::kUnknown;
  ProofMethod method = ProofMethod::kCornerCase;
  // Witness operands when satisfiable.
  word_t wa = 0, wb = 0;
};

struct ProverConfig {
  std::uint64_t exhaustive_cap = std::uint64_t{1} << 20;
  std::uint64_t sample_budget = 4096;
  std::uint64_t sample_seed = 0x5eedULL;
};

class RedundancyProver {
 public:
  RedundancyProver(const InstructionSet& isa, ProverConfig cfg = {});

  Verdict prove_type2(int i, int j, int k);
  Verdict prove_type1(int i, int k);
  Verdict prove(const Constraint& c);

 private:
  Verdict exhaustive_type2(int i, int j, int k);
  Verdict exhaustive_type1(int i, int k);
  Verdict partial_tt_type2(int i, int j, int k);
  Verdict sample_type2(int i, int j, int k);
  Verdict sample_type1(int i, int k);
  void ensure_sweep();

  const InstructionSet& isa_;
  ProverConfig cfg_;
  bool exhaustive_ok_ = false;

  // Lazy full-sweep memo (ops mode): satisfiability bit plus first witness
  // for every (i, j, k), and per-function active-bit masks for TYPE1.
  bool swept_ = false;
  std::vector<std::uint8_t> sat_;
  std::vector<word_t> wa_, wb_;
  std::vector<word_t> type1_mask_, type1_wa_, type1_wb_;
};

const char* verdict_status_name(VerdictStatus s);
const char* proof_method_name(ProofMethod m);

// "constraint <mn_i> [< <mn_j>] bit <k> : SAT <hexa> <hexb> |
// REDUNDANT <method> | UNKNOWN"
std::string render_constraint_verdict(const Constraint& c, const Verdict& v,
                                      const InstructionSet& isa);

}  // namespace cfw
