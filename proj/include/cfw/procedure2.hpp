#pragma once
// Mixed-level redundancy identification flow: generate high-level control
// tests, prove away unsatisfiable constraints, adjust coverage, then
// fault-simulate the synthesized control structure and reconcile undetected
// gate faults against a ground-truth oracle.  Undetected-but-testable gate
// faults get their oracle witnesses appended to the test set (one
// augmentation round; detection only grows with more patterns), after which
// any remaining undetected fault is expected to be provably redundant --
// a violation after augmentation indicates an internal inconsistency and is
// flagged as a soundness alarm.

#include <cstdint>
#include <string>
#include <vector>

#include "cfw/constraints.hpp"
#include "cfw/fault_table.hpp"
#include "cfw/gate_model.hpp"
#include "cfw/isa.hpp"
#include "cfw/prover.hpp"
#include "cfw/test_set.hpp"
#include "cfw/testgen.hpp"

namespace cfw {

struct RunSettings {
  std::uint64_t budget = 100000;  // generator candidates per function
  std::uint64_t seed = 1;
  ConstraintMode constraint_mode = ConstraintMode::kFull;
  bool lanes = false;
  bool bridges = false;
  int multi = 1;  // > 1 adds multiple stuck-ats up to that size
  std::uint64_t oracle_cap = std::uint64_t{1} << 20;
  std::uint64_t prover_cap = std::uint64_t{1} << 20;
  bool augment_gate_witnesses = true;
};

enum class RunStatus { kOk, kUnresolved };

struct ProvedConstraint {
  Constraint c;
  Verdict v;
};

struct OracleFinding {
  std::size_t fault_index = 0;
  OracleResult r;
};

struct MixedLevelReport {
  TestSet test;                 // final (possibly augmented) test set
  FaultTable table;             // fault table for the final test set
  CoverageReport hl_coverage;   // adjusted for proved-redundant constraints
  std::size_t type1_satisfied = 0, type1_total = 0, type1_redundant = 0;
  std::vector<ProvedConstraint> hl_proofs;  // type1 then type2, model order
  GateControlModel model;
  std::vector<GateFault> gate_faults;
  DetectionReport gate_report;           // final detection state
  std::vector<OracleFinding> gate_oracle;  // undetected faults, final state
  std::size_t pre_aug_detected = 0;
  std::size_t augmented_patterns = 0;
  std::size_t gate_redundant = 0, gate_unknown = 0, gate_testable_gap = 0;
  RunStatus status = RunStatus::kOk;
  bool soundness_alarm = false;

  MixedLevelReport() : table(0, 1) {}
};

MixedLevelReport run_procedure2(const InstructionSet& isa,
                                const RunSettings& settings);

// Human-oriented run summary ending in a stable machine-readable line:
// RESULT hl=<pct> gate_detected=<d> gate_redundant=<r> unknown=<u>
std::string render_summary(const MixedLevelReport& rep,
                           const InstructionSet& isa);

// Constraint-by-constraint and fault-by-fault redundancy listing.
std::string render_redundancy_report(const MixedLevelReport& rep,
                                     const InstructionSet& isa);

}  // namespace cfw
