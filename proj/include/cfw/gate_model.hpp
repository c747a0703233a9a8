#pragma once
// Generic gate-level control structure and its fault machinery.  The control
// part is a sum of products: term i ANDs one literal per control line (the
// line or its inversion, chosen by function i's code) with data word y_i, and
// the term outputs are ORed per bit lane.  Active-low sets dualize this into
// a product of sums with the same literal structure.
//
// Fault sites:
//   stem   cJ      - a control line, shared by every term
//   branch tI.cJ   - the copy of line J feeding term I, before the inverter
//   lane   tI.cJ.bK- the literal input of AND lane K in term I, after the
//                    inverter
// Faults are single/multiple stuck-ats on these sites or wired-AND/OR
// bridges between two sites (inversion is applied after a bridge).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cfw/isa.hpp"
#include "cfw/test_set.hpp"

namespace cfw {

enum class SiteScope { kStem, kBranch, kLane };

struct FaultSite {
  SiteScope scope = SiteScope::kStem;
  int term = -1;  // branch/lane only
  int stem = 0;   // control line, 0-based (rendered 1-based as cJ)
  int lane = -1;  // lane only, bit index 0..m-1

  friend bool operator==(const FaultSite&, const FaultSite&) = default;
};

enum class FaultKind { kSaf, kMultiSaf, kBridge };
enum class BridgeModel { kWiredAnd, kWiredOr };

struct GateFault {
  FaultKind kind = FaultKind::kSaf;
  // kSaf: one entry; kMultiSaf: two or more entries on distinct sites.
  std::vector<std::pair<FaultSite, bool>> stuck;
  // kBridge only.
  FaultSite bridge_a, bridge_b;
  BridgeModel bridge_model = BridgeModel::kWiredAnd;
};

struct GateControlModel {
  int n = 0, m = 0, p = 0;
  Polarity polarity = Polarity::kActiveHigh;
  std::vector<std::uint16_t> codes;  // per term; bit j = literal polarity

  bool literal_positive(int term, int stem) const {
    return (codes[term] >> stem) & 1;
  }
};

GateControlModel synthesize(const InstructionSet& isa);

struct FaultClassSelection {
  bool single = true;
  bool lanes = false;        // include lane-level single stuck-ats
  int multi_up_to = 1;       // >= 2 enables multiple stuck-ats of that size
  bool bridges = false;      // stem pairs and same-term branch pairs
  std::uint64_t multi_cap = 200000;  // enumeration guard for multiples
  bool multi_sample = false;         // sample instead of erroring past the cap
  std::uint64_t multi_sample_size = 5000;
  std::uint64_t multi_sample_seed = 1;
};

// Deterministic order: single stems, single branches, single lanes, multiple
// stuck-ats by size, stem bridges, branch bridges.  Throws std::length_error
// (naming the count) when the multiple-fault universe exceeds the cap and
// sampling is off.
std::vector<GateFault> enumerate_faults(const GateControlModel& model,
                                        const FaultClassSelection& sel);

// Evaluate the control structure on one stimulus; fault == nullptr gives the
// fault-free response (equal to y[selected] for every legal code).
word_t gate_eval(const GateControlModel& model, const GateFault* fault,
                 std::uint16_t code, std::span<const word_t> y);

struct FaultSimVerdict {
  bool detected = false;
  std::size_t pattern = 0;  // first detecting pattern index
};

struct DetectionReport {
  std::vector<FaultSimVerdict> verdicts;  // aligned with the fault list
  std::size_t detected = 0;
  std::size_t total = 0;
};

DetectionReport fault_simulate(const GateControlModel& model,
                               const InstructionSet& isa, const TestSet& test,
                               std::span<const GateFault> faults);

enum class OracleStatus { kTestable, kRedundant, kUnknown };

struct OracleResult {
  OracleStatus status = OracleStatus::kUnknown;
  // Witness stimulus when testable.
  int func = -1;
  word_t a = 0, b = 0;
};

struct OracleConfig {
  std::uint64_t exhaustive_cap = std::uint64_t{1} << 20;  // max 2^(2m) pairs
  std::uint64_t sample_budget = std::uint64_t{1} << 20;   // stimuli when sampling
  std::uint64_t sample_seed = 0x5eedULL;
};

// Ground-truth detectability search over legal codes x operand pairs.
// kRedundant comes only from a proof: the exhaustive sweep, or showing no
// legal code changes the term-selection masks.  Sampling never claims it.
class RedundancyOracle {
 public:
  RedundancyOracle(const GateControlModel& model, const InstructionSet& isa,
                   OracleConfig cfg = {});
  OracleResult classify(const GateFault& fault) const;
  bool exhaustive() const { return exhaustive_; }

 private:
  const GateControlModel& model_;
  const InstructionSet& isa_;
  OracleConfig cfg_;
  bool exhaustive_ = false;
  std::vector<word_t> ytab_;  // per (a,b) pair: n data results (ops mode, small m)
};

// "<kind> <site-descriptor>", e.g. "SAF branch t3.c2 sa1",
// "BRIDGE wired_and(stem c1, stem c2)".
std::string fault_descriptor(const GateFault& fault);

// One line per fault: "fault <kind> <site-descriptor> : detected
// pattern=<idx> | undetected", then a summary line
// "coverage <detected>/<total> = <pct>%".
std::string render_detection_report(std::span<const GateFault> faults,
                                    const DetectionReport& report);

}  // namespace cfw
