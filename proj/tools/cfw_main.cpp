// Command-line front end: gen / hlsim / gatesim / prove / run / report.
// Exit codes: 0 success, 2 input error, 3 unresolved coverage,
// 4 internal soundness alarm.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "cfw/constraints.hpp"
#include "cfw/fault_table.hpp"
#include "cfw/gate_model.hpp"
#include "cfw/isa.hpp"
#include "cfw/procedure2.hpp"
#include "cfw/prover.hpp"
#include "cfw/testgen.hpp"

namespace fs = std::filesystem;
using namespace cfw;

namespace {

struct Options {
  std::string isa_path;
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  std::uint64_t budget = 100000;
  std::uint64_t oracle_cap = std::uint64_t{1} << 20;
  std::uint64_t prover_cap = std::uint64_t{1} << 20;
  bool lanes = false;
  bool bridges = false;
  int multi = 1;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

std::string coverage_line(const DetectionReport& rep) {
  const double pct = rep.total ? 100.0 * static_cast<double>(rep.detected) /
                                     static_cast<double>(rep.total)
                               : 100.0;
  char buf[96];
  std::snprintf(buf, sizeof buf, "coverage %zu/%zu = %.2f%%", rep.detected,
                rep.total, pct);
  return buf;
}

FaultClassSelection fault_selection(const Options& o) {
  FaultClassSelection sel;
  sel.single = true;
  sel.lanes = o.lanes;
  sel.bridges = o.bridges;
  sel.multi_up_to = o.multi;
  return sel;
}

int cmd_gen(const Options& o) {
  const InstructionSet isa = load_isa(o.isa_path);
  const ConstraintSet cs = enumerate_constraints(isa, ConstraintMode::kFull);
  const GenerateResult res = generate(isa, cs, o.budget, o.seed);
  fs::create_directories(o.out_dir);
  spit(fs::path(o.out_dir) / "test.txt", render_test_set(res.test, isa));
  spit(fs::path(o.out_dir) / "program.txt", emit_test_program(res.test, isa));
  spit(fs::path(o.out_dir) / "faulttable.txt",
       render_fault_table(res.table, isa));
  const CoverageReport cov = coverage(res.table, {});
  spit(fs::path(o.out_dir) / "coverage.txt", render_coverage(cov) + "\n");
  std::cout << render_coverage(cov) << "\n";
  return 0;
}

int cmd_hlsim(const Options& o) {
  const InstructionSet isa = load_isa(o.isa_path);
  const TestSet test =
      parse_test_set(slurp(fs::path(o.out_dir) / "test.txt"), isa);
  const FaultTable table = simulate(isa, test);
  fs::create_directories(o.out_dir);
  spit(fs::path(o.out_dir) / "faulttable.txt",
       render_fault_table(table, isa));
  const CoverageReport cov = coverage(table, {});
  spit(fs::path(o.out_dir) / "coverage.txt", render_coverage(cov) + "\n");
  std::cout << render_coverage(cov) << "\n";
  return 0;
}

int cmd_gatesim(const Options& o) {
  const InstructionSet isa = load_isa(o.isa_path);
  const TestSet test =
      parse_test_set(slurp(fs::path(o.out_dir) / "test.txt"), isa);
  const GateControlModel model = synthesize(isa);
  const std::vector<GateFault> faults =
      enumerate_faults(model, fault_selection(o));
  const DetectionReport rep = fault_simulate(model, isa, test, faults);
  fs::create_directories(o.out_dir);
  spit(fs::path(o.out_dir) / "gatereport.txt",
       render_detection_report(faults, rep));
  std::cout << coverage_line(rep) << "\n";
  return 0;
}

int cmd_prove(const Options& o) {
  const InstructionSet isa = load_isa(o.isa_path);
  const ConstraintSet cs = enumerate_constraints(isa, ConstraintMode::kFull);
  ProverConfig cfg;
  cfg.exhaustive_cap = o.prover_cap;
  RedundancyProver prover(isa, cfg);
  std::size_t sat = 0, red = 0, unk = 0;
  std::ostringstream out;
  out << "constraints proved: " << cs.constraints.size() << "\n";
  for (const Constraint& c : cs.constraints) {
    const Verdict v = prover.prove(c);
    out << render_constraint_verdict(c, v, isa) << "\n";
    switch (v.status) {
      case VerdictStatus::kSatisfiable:
        ++sat;
        break;
      case VerdictStatus::kRedundant:
        ++red;
        break;
      case VerdictStatus::kUnknown:
        ++unk;
        break;
    }
  }
  fs::create_directories(o.out_dir);
  spit(fs::path(o.out_dir) / "redundancy.txt", out.str());
  std::cout << "proved " << cs.constraints.size() << " constraints: " << sat
            << " satisfiable, " << red << " redundant, " << unk
            << " unknown\n";
  return 0;
}

int cmd_run(const Options& o) {
  const InstructionSet isa = load_isa(o.isa_path);
  RunSettings st;
  st.budget = o.budget;
  st.seed = o.seed;
  st.lanes = o.lanes;
  st.bridges = o.bridges;
  st.multi = o.multi;
  st.oracle_cap = o.oracle_cap;
  st.prover_cap = o.prover_cap;
  const MixedLevelReport rep = run_procedure2(isa, st);
  fs::create_directories(o.out_dir);
  spit(fs::path(o.out_dir) / "test.txt", render_test_set(rep.test, isa));
  spit(fs::path(o.out_dir) / "program.txt", emit_test_program(rep.test, isa));
  spit(fs::path(o.out_dir) / "faulttable.txt",
       render_fault_table(rep.table, isa));
  spit(fs::path(o.out_dir) / "coverage.txt",
       render_coverage(rep.hl_coverage) + "\n");
  spit(fs::path(o.out_dir) / "gatereport.txt",
       render_detection_report(rep.gate_faults, rep.gate_report));
  spit(fs::path(o.out_dir) / "redundancy.txt",
       render_redundancy_report(rep, isa));
  const std::string summary = render_summary(rep, isa);
  spit(fs::path(o.out_dir) / "summary.txt", summary);
  std::cout << summary;
  if (rep.soundness_alarm) return 4;
  if (rep.status == RunStatus::kUnresolved) return 3;
  return 0;
}

std::string bits_string(word_t v, int m) {
  std::string s(m, '0');
  for (int k = 0; k < m; ++k)
    if ((v >> (m - 1 - k)) & 1) s[k] = '1';
  return s;
}

std::string pad(const std::string& s, std::size_t w) {
  return s + std::string(s.size() < w ? w - s.size() : 0, ' ');
}

std::string rtrim(std::string s) {
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

std::string render_matrix(const ParsedFaultTable& pf) {
  const int n = pf.table.n, m = pf.table.m;
  std::size_t w = static_cast<std::size_t>(m);
  for (const std::string& mn : pf.mnemonics) w = std::max(w, mn.size());
  std::ostringstream out;
  std::string row = pad("", w);
  for (int j = 0; j < n; ++j) row += "  " + pad(pf.mnemonics[j], w);
  out << rtrim(row) << "\n";
  for (int i = 0; i < n; ++i) {
    row = pad(pf.mnemonics[i], w);
    for (int j = 0; j < n; ++j)
      row += "  " + pad(i == j ? "-" : bits_string(pf.table.at(i, j), m), w);
    out << rtrim(row) << "\n";
  }
  return out.str();
}

int cmd_report(const Options& o) {
  const fs::path dir(o.out_dir);
  std::ostringstream out;
  out << "== fault table ==\n";
  if (fs::exists(dir / "faulttable.txt"))
    out << render_matrix(parse_fault_table(slurp(dir / "faulttable.txt")));
  if (fs::exists(dir / "coverage.txt")) out << slurp(dir / "coverage.txt");
  out << "== gate detection ==\n";
  if (fs::exists(dir / "gatereport.txt")) {
    const std::string text = slurp(dir / "gatereport.txt");
    // Last non-empty line is the coverage summary.
    std::istringstream in(text);
    std::string line, last;
    while (std::getline(in, line))
      if (!line.empty()) last = line;
    out << last << "\n";
  }
  out << "== redundancy proofs ==\n";
  if (fs::exists(dir / "redundancy.txt")) out << slurp(dir / "redundancy.txt");
  out << "== summary ==\n";
  if (fs::exists(dir / "summary.txt")) out << slurp(dir / "summary.txt");
  std::cout << out.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ALU control-part test workbench"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* c, bool needs_isa) {
    auto* opt = c->add_option("--isa", o.isa_path, "ISA description file");
    if (needs_isa) opt->required();
    c->add_option("--out", o.out_dir, "output/workspace directory");
    c->add_option("--seed", o.seed, "RNG seed");
    c->add_option("--budget", o.budget, "generation candidates per function");
    c->add_option("--oracle-cap", o.oracle_cap,
                  "max operand pairs for the exhaustive gate oracle");
    c->add_option("--prover-cap", o.prover_cap,
                  "max operand pairs for exhaustive constraint proofs");
    c->add_flag("--lanes", o.lanes, "include per-lane fault sites");
    c->add_flag("--bridges", o.bridges, "include bridging faults");
    c->add_option("--multi", o.multi,
                  "multiple stuck-at size (>=2 enables them)");
  };

  CLI::App* gen = app.add_subcommand("gen", "generate a high-level test");
  CLI::App* hlsim =
      app.add_subcommand("hlsim", "high-level fault simulation of test.txt");
  CLI::App* gatesim =
      app.add_subcommand("gatesim", "gate-level fault simulation of test.txt");
  CLI::App* prove =
      app.add_subcommand("prove", "prove constraint satisfiability");
  CLI::App* run = app.add_subcommand("run", "full mixed-level flow");
  CLI::App* report =
      app.add_subcommand("report", "consolidated report from output files");
  for (CLI::App* c : {gen, hlsim, gatesim, prove, run})
    add_common(c, true);
  add_common(report, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) return cmd_gen(o);
    if (hlsim->parsed()) return cmd_hlsim(o);
    if (gatesim->parsed()) return cmd_gatesim(o);
    if (prove->parsed()) return cmd_prove(o);
    if (run->parsed()) return cmd_run(o);
    if (report->parsed()) return cmd_report(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
