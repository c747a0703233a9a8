#include "cfw/procedure2.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <sstream>

namespace cfw {

namespace {

struct HlPass {
  TestSet test;
  FaultTable table;
  std::vector<ProvedConstraint> proofs;
  std::vector<Constraint> redundant_type2;
  std::size_t type1_redundant = 0;
  bool unknown_left = false;

  HlPass() : table(0, 1) {}
};

void append_unique(std::vector<TestPattern>& patterns, const TestPattern& tp) {
  if (std::find(patterns.begin(), patterns.end(), tp) == patterns.end())
    patterns.push_back(tp);
}

// Steps 1-3: generate, prove redundancy of what stayed uncovered, and
// complete the test with prover witnesses for satisfiable stragglers.
HlPass hl_pass(const InstructionSet& isa, const ConstraintSet& cs,
               std::uint64_t budget, const RunSettings& st) {
  HlPass pass;
  GenerateResult gen = generate(isa, cs, budget, st.seed);
  pass.test = std::move(gen.test);
  ProverConfig pcfg;
  pcfg.exhaustive_cap = st.prover_cap;
  RedundancyProver prover(isa, pcfg);
  for (int pass_kind = 0; pass_kind < 2; ++pass_kind) {
    const ConstraintKind want =
        pass_kind == 0 ? ConstraintKind::kType1 : ConstraintKind::kType2;
    for (const Constraint& c : gen.uncovered) {
      if (c.kind != want) continue;
      const Verdict v = prover.prove(c);
      pass.proofs.push_back({c, v});
      switch (v.status) {
        case VerdictStatus::kSatisfiable:
          append_unique(pass.test.patterns, {c.i, v.wa, v.wb});
          break;
        case VerdictStatus::kRedundant:
          if (c.kind == ConstraintKind::kType2)
            pass.redundant_type2.push_back(c);
          else
            ++pass.type1_redundant;
          break;
        case VerdictStatus::kUnknown:
          pass.unknown_left = true;
          break;
      }
    }
  }
  pass.table = simulate(isa, pass.test);
  return pass;
}

std::size_t count_type1(const FaultTable& table) {
  std::size_t s = 0;
  for (word_t v : table.type1) s += std::popcount(v);
  return s;
}

}  // namespace

MixedLevelReport run_procedure2(const InstructionSet& isa,
                                const RunSettings& settings) {
  MixedLevelReport rep;
  const ConstraintSet cs =
      enumerate_constraints(isa, settings.constraint_mode);

  HlPass pass = hl_pass(isa, cs, settings.budget, settings);
  if (pass.unknown_left) {
    // Step 4: one retry with a doubled generation budget.
    const std::uint64_t doubled =
        settings.budget > ~std::uint64_t{0} / 2 ? settings.budget
                                                : settings.budget * 2;
    pass = hl_pass(isa, cs, doubled, settings);
  }

  rep.test = pass.test;
  rep.table = pass.table;
  rep.hl_proofs = pass.proofs;
  rep.status = pass.unknown_left ? RunStatus::kUnresolved : RunStatus::kOk;
  rep.hl_coverage = coverage(pass.table, pass.redundant_type2);
  rep.type1_total = static_cast<std::size_t>(isa.n()) * isa.width;
  rep.type1_satisfied = count_type1(pass.table);
  rep.type1_redundant = pass.type1_redundant;

  rep.model = synthesize(isa);
  FaultClassSelection fsel;
  fsel.single = true;
  fsel.lanes = settings.lanes;
  fsel.bridges = settings.bridges;
  fsel.multi_up_to = settings.multi;
  rep.gate_faults = enumerate_faults(rep.model, fsel);
  rep.gate_report = fault_simulate(rep.model, isa, rep.test, rep.gate_faults);
  rep.pre_aug_detected = rep.gate_report.detected;

  OracleConfig ocfg;
  ocfg.exhaustive_cap = settings.oracle_cap;
  RedundancyOracle oracle(rep.model, isa, ocfg);
  // Classifications are test-independent, so one round per fault suffices.
  std::vector<std::pair<std::size_t, OracleResult>> classified;
  for (std::size_t f = 0; f < rep.gate_faults.size(); ++f)
    if (!rep.gate_report.verdicts[f].detected)
      classified.emplace_back(f, oracle.classify(rep.gate_faults[f]));

  if (settings.augment_gate_witnesses) {
    const std::size_t before = rep.test.patterns.size();
    for (const auto& [f, r] : classified) {
      (void)f;
      if (r.status == OracleStatus::kTestable)
        append_unique(rep.test.patterns, {r.func, r.a, r.b});
    }
    rep.augmented_patterns = rep.test.patterns.size() - before;
    if (rep.augmented_patterns > 0) {
      rep.table = simulate(isa, rep.test);
      rep.hl_coverage = coverage(rep.table, pass.redundant_type2);
      rep.type1_satisfied = count_type1(rep.table);
      rep.gate_report =
          fault_simulate(rep.model, isa, rep.test, rep.gate_faults);
    }
  }

  for (const auto& [f, r] : classified) {
    if (rep.gate_report.verdicts[f].detected) continue;
    rep.gate_oracle.push_back({f, r});
    switch (r.status) {
      case OracleStatus::kRedundant:
        ++rep.gate_redundant;
        break;
      case OracleStatus::kUnknown:
        ++rep.gate_unknown;
        break;
      case OracleStatus::kTestable:
        ++rep.gate_testable_gap;
        break;
    }
  }

  const bool type2_complete =
      rep.hl_coverage.satisfied ==
      rep.hl_coverage.total - rep.hl_coverage.redundant_excluded;
  const bool type1_complete =
      rep.type1_satisfied == rep.type1_total - rep.type1_redundant;
  rep.soundness_alarm =
      type2_complete && type1_complete && rep.gate_testable_gap > 0;
  return rep;
}

std::string render_summary(const MixedLevelReport& rep,
                           const InstructionSet& isa) {
  std::ostringstream out;
  const ModelMetrics mm = model_size_metrics(isa.n(), isa.width, isa.control);
  out << "instruction set: n=" << isa.n() << " m=" << isa.width
      << " p=" << isa.control
      << " mode=" << (isa.mode == IsaMode::kOps ? "ops" : "direct")
      << " polarity="
      << (isa.polarity == Polarity::kActiveHigh ? "active_high"
                                                : "active_low")
      << "\n";
  out << "paper model-size metric: C(SAF)=" << mm.c_saf
      << " C(CFM)=" << mm.c_cfm << " C(CFM,HD1)=" << mm.c_cfm_hd1 << "\n";
  char buf[192];
  std::snprintf(buf, sizeof buf,
                "constraint count: %llu TYPE2 targets, satisfied %llu, "
                "redundant %llu, adjusted coverage %.2f%%",
                static_cast<unsigned long long>(rep.hl_coverage.total),
                static_cast<unsigned long long>(rep.hl_coverage.satisfied),
                static_cast<unsigned long long>(
                    rep.hl_coverage.redundant_excluded),
                rep.hl_coverage.adjusted_pct);
  out << buf << "\n";
  out << "type1 targets: " << rep.type1_total << ", satisfied "
      << rep.type1_satisfied << ", redundant " << rep.type1_redundant << "\n";
  out << "test: " << rep.test.patterns.size() << " patterns ("
      << rep.augmented_patterns << " appended as gate-oracle witnesses)\n";
  out << "gate universe: " << rep.gate_report.total << " faults, detected "
      << rep.gate_report.detected << " (" << rep.pre_aug_detected
      << " before augmentation)\n";
  out << "gate redundancy: " << rep.gate_redundant << " redundant, "
      << rep.gate_unknown << " unknown, " << rep.gate_testable_gap
      << " testable undetected\n";
  out << "status: "
      << (rep.soundness_alarm
              ? "soundness alarm"
              : (rep.status == RunStatus::kOk ? "ok" : "unresolved"))
      << "\n";
  std::snprintf(buf, sizeof buf,
                "RESULT hl=%.1f gate_detected=%zu gate_redundant=%zu "
                "unknown=%zu",
                rep.hl_coverage.adjusted_pct, rep.gate_report.detected,
                rep.gate_redundant, rep.gate_unknown + rep.gate_testable_gap);
  out << buf << "\n";
  return out.str();
}

std::string render_redundancy_report(const MixedLevelReport& rep,
                                     const InstructionSet& isa) {
  std::ostringstream out;
  out << "constraints proved: " << rep.hl_proofs.size() << "\n";
  for (const ProvedConstraint& pc : rep.hl_proofs)
    out << render_constraint_verdict(pc.c, pc.v, isa) << "\n";
  out << "undetected gate faults: " << rep.gate_oracle.size() << "\n";
  for (const OracleFinding& of : rep.gate_oracle) {
    out << "fault " << fault_descriptor(rep.gate_faults[of.fault_index])
        << " : ";
    switch (of.r.status) {
      case OracleStatus::kRedundant:
        out << "REDUNDANT";
        break;
      case OracleStatus::kUnknown:
        out << "UNKNOWN";
        break;
      case OracleStatus::kTestable:
        out << "TESTABLE witness " << isa.functions[of.r.func].mnemonic << " "
            << operand_hex(of.r.a, isa.width) << " "
            << operand_hex(of.r.b, isa.width);
        break;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace cfw
