#include "cfw/prover.hpp"

#include <bit>
#include <random>
#include <sstream>

#include "cfw/testgen.hpp"

namespace cfw {

namespace {

bool bit_active(word_t v, int k, Polarity pol) {
  const bool b = (v >> k) & 1;
  return pol == Polarity::kActiveHigh ? b : !b;
}

// Largest truncated-operand sweep the partial truth-table path will run:
// 2^(2*kLowSweepMaxBits) evaluations.
constexpr int kLowSweepMaxBits = 12;

}  // namespace

const char* verdict_status_name(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::kSatisfiable:
      return "SATISFIABLE";
    case VerdictStatus::kRedundant:
      return "REDUNDANT";
    case VerdictStatus::kUnknown:
      return "UNKNOWN";
  }
  return "?";
}

const char* proof_method_name(ProofMethod m) {
  switch (m) {
    case ProofMethod::kExhaustive:
      return "EXHAUSTIVE";
    case ProofMethod::kPartialTt:
      return "PARTIAL_TT";
    case ProofMethod::kCornerCase:
      return "CORNER_CASE";
  }
  return "?";
}

std::string render_constraint_verdict(const Constraint& c, const Verdict& v,
                                      const InstructionSet& isa) {
  std::ostringstream out;
  out << "constraint " << isa.functions[c.i].mnemonic;
  if (c.kind == ConstraintKind::kType2)
    out << " < " << isa.functions[c.j].mnemonic;
  out << " bit " << c.k << " : ";
  switch (v.status) {
    case VerdictStatus::kSatisfiable:
      out << "SAT " << operand_hex(v.wa, isa.width) << " "
          << operand_hex(v.wb, isa.width);
      break;
    case VerdictStatus::kRedundant:
      out << "REDUNDANT " << proof_method_name(v.method);
      break;
    case VerdictStatus::kUnknown:
      out << "UNKNOWN";
      break;
  }
  return out.str();
}

RedundancyProver::RedundancyProver(const InstructionSet& isa, ProverConfig cfg)
    : isa_(isa), cfg_(cfg) {
  const int m = isa.width;
  exhaustive_ok_ = isa.mode == IsaMode::kOps && 2 * m < 64 &&
                   (std::uint64_t{1} << (2 * m)) <= cfg_.exhaustive_cap;
}

Verdict RedundancyProver::prove_type2(int i, int j, int k) {
  if (isa_.mode == IsaMode::kDirect) {
    // The pattern supplies y_i = a and y_j = b directly, so any bit values
    // can be witnessed.
    const word_t bk = word_t{1} << k;
    const bool ah = isa_.polarity == Polarity::kActiveHigh;
    const word_t mask = isa_.mask();
    return {VerdictStatus::kSatisfiable, ProofMethod::kPartialTt,
            ah ? 0 : mask, ah ? bk : (mask ^ bk)};
  }
  Verdict v = partial_tt_type2(i, j, k);
  if (v.status != VerdictStatus::kUnknown) return v;
  if (exhaustive_ok_) return exhaustive_type2(i, j, k);
  return sample_type2(i, j, k);
}

Verdict RedundancyProver::prove_type1(int i, int k) {
  const int m = isa_.width;
  const Polarity pol = isa_.polarity;
  if (isa_.mode == IsaMode::kDirect) {
    const word_t bk = word_t{1} << k;
    const bool ah = pol == Polarity::kActiveHigh;
    return {VerdictStatus::kSatisfiable, ProofMethod::kPartialTt,
            ah ? bk : (isa_.mask() ^ bk), 0};
  }
  const Op op = isa_.functions[i].op;
  auto pred = [&](word_t a, word_t b) {
    return bit_active(eval_op(op, a, b, m), k, pol);
  };
  const ConeClass cone = op_info(op).cone;
  if (cone == ConeClass::kBitLocal) {
    const word_t bk = word_t{1} << k;
    for (word_t a : {word_t{0}, bk})
      for (word_t b : {word_t{0}, bk})
        if (pred(a, b))
          return {VerdictStatus::kSatisfiable, ProofMethod::kPartialTt, a, b};
    return {VerdictStatus::kRedundant, ProofMethod::kPartialTt, 0, 0};
  }
  if (cone == ConeClass::kLowCone && k + 1 <= kLowSweepMaxBits) {
    const word_t lim = word_t{1} << (k + 1);
    for (word_t a = 0; a < lim; ++a)
      for (word_t b = 0; b < lim; ++b)
        if (pred(a, b))
          return {VerdictStatus::kSatisfiable, ProofMethod::kPartialTt, a, b};
    return {VerdictStatus::kRedundant, ProofMethod::kPartialTt, 0, 0};
  }
  if (exhaustive_ok_) return exhaustive_type1(i, k);
  return sample_type1(i, k);
}

Verdict RedundancyProver::prove(const Constraint& c) {
  return c.kind == ConstraintKind::kType1 ? prove_type1(c.i, c.k)
                                          : prove_type2(c.i, c.j, c.k);
}

Verdict RedundancyProver::partial_tt_type2(int i, int j, int k) {
  const int m = isa_.width;
  const Polarity pol = isa_.polarity;
  const Op opi = isa_.functions[i].op, opj = isa_.functions[j].op;
  auto pred = [&](word_t a, word_t b) {
    return !bit_active(eval_op(opi, a, b, m), k, pol) &&
           bit_active(eval_op(opj, a, b, m), k, pol);
  };
  const ConeClass ci = op_info(opi).cone, cj = op_info(opj).cone;
  if (ci == ConeClass::kBitLocal && cj == ConeClass::kBitLocal) {
    // Bit k of both results depends only on operand bits k: four combos.
    const word_t bk = word_t{1} << k;
    for (word_t a : {word_t{0}, bk})
      for (word_t b : {word_t{0}, bk})
        if (pred(a, b))
          return {VerdictStatus::kSatisfiable, ProofMethod::kPartialTt, a, b};
    return {VerdictStatus::kRedundant, ProofMethod::kPartialTt, 0, 0};
  }
  if (ci != ConeClass::kFullWord && cj != ConeClass::kFullWord &&
      k + 1 <= kLowSweepMaxBits) {
    // Bit k of both results depends only on operand bits 0..k: the truncated
    // sweep is an exact truth table for the predicate.
    const word_t lim = word_t{1} << (k + 1);
    for (word_t a = 0; a < lim; ++a)
      for (word_t b = 0; b < lim; ++b)
        if (pred(a, b))
          return {VerdictStatus::kSatisfiable, ProofMethod::kPartialTt, a, b};
    return {VerdictStatus::kRedundant, ProofMethod::kPartialTt, 0, 0};
  }
  return {VerdictStatus::kUnknown, ProofMethod::kPartialTt, 0, 0};
}

void RedundancyProver::ensure_sweep() {
  if (swept_) return;
  swept_ = true;
  const int n = isa_.n(), m = isa_.width;
  const word_t mask = isa_.mask();
  const bool ah = isa_.polarity == Polarity::kActiveHigh;
  const std::size_t cells = static_cast<std::size_t>(n) * n * m;
  sat_.assign(cells, 0);
  wa_.assign(cells, 0);
  wb_.assign(cells, 0);
  type1_mask_.assign(n, 0);
  type1_wa_.assign(static_cast<std::size_t>(n) * m, 0);
  type1_wb_.assign(static_cast<std::size_t>(n) * m, 0);
  std::vector<word_t> act(n);
  std::vector<word_t> satmask(static_cast<std::size_t>(n) * n, 0);
  std::uint64_t remaining =
      static_cast<std::uint64_t>(n) * (n - 1) * m + //
      static_cast<std::uint64_t>(n) * m;
  const std::uint64_t npairs = std::uint64_t{1} << (2 * m);
  for (std::uint64_t q = 0; q < npairs && remaining > 0; ++q) {
    const word_t a = (q >> m) & mask, b = q & mask;
    for (int h = 0; h < n; ++h) {
      const word_t y = eval_op(isa_.functions[h].op, a, b, m);
      act[h] = ah ? y : (~y & mask);
    }
    for (int i = 0; i < n; ++i) {
      word_t fresh = act[i] & ~type1_mask_[i];
      while (fresh) {
        const int k = std::countr_zero(fresh);
        fresh &= fresh - 1;
        type1_wa_[static_cast<std::size_t>(i) * m + k] = a;
        type1_wb_[static_cast<std::size_t>(i) * m + k] = b;
        --remaining;
      }
      type1_mask_[i] |= act[i];
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const std::size_t cell = static_cast<std::size_t>(i) * n + j;
        word_t hits = ~act[i] & act[j] & mask & ~satmask[cell];
        satmask[cell] |= hits;
        while (hits) {
          const int k = std::countr_zero(hits);
          hits &= hits - 1;
          const std::size_t idx = cell * m + k;
          sat_[idx] = 1;
          wa_[idx] = a;
          wb_[idx] = b;
          --remaining;
        }
      }
    }
  }
}

Verdict RedundancyProver::exhaustive_type2(int i, int j, int k) {
  ensure_sweep();
  const std::size_t idx =
      (static_cast<std::size_t>(i) * isa_.n() + j) * isa_.width + k;
  if (sat_[idx])
    return {VerdictStatus::kSatisfiable, ProofMethod::kExhaustive, wa_[idx],
            wb_[idx]};
  return {VerdictStatus::kRedundant, ProofMethod::kExhaustive, 0, 0};
}

Verdict RedundancyProver::exhaustive_type1(int i, int k) {
  ensure_sweep();
  if ((type1_mask_[i] >> k) & 1) {
    const std::size_t idx = static_cast<std::size_t>(i) * isa_.width + k;
    return {VerdictStatus::kSatisfiable, ProofMethod::kExhaustive,
            type1_wa_[idx], type1_wb_[idx]};
  }
  return {VerdictStatus::kRedundant, ProofMethod::kExhaustive, 0, 0};
}

Verdict RedundancyProver::sample_type2(int i, int j, int k) {
  const int m = isa_.width;
  const Polarity pol = isa_.polarity;
  const Op opi = isa_.functions[i].op, opj = isa_.functions[j].op;
  auto pred = [&](word_t a, word_t b) {
    return !bit_active(eval_op(opi, a, b, m), k, pol) &&
           bit_active(eval_op(opj, a, b, m), k, pol);
  };
  for (const auto& [a, b] : corner_case_deck(m))
    if (pred(a, b))
      return {VerdictStatus::kSatisfiable, ProofMethod::kCornerCase, a, b};
  const word_t mask = isa_.mask();
  std::mt19937_64 rng(cfg_.sample_seed);
  for (std::uint64_t d = 0; d < cfg_.sample_budget; ++d) {
    const word_t a = rng() & mask, b = rng() & mask;
    if (pred(a, b))
      return {VerdictStatus::kSatisfiable, ProofMethod::kCornerCase, a, b};
  }
  return {VerdictStatus::kUnknown, ProofMethod::kCornerCase, 0, 0};
}

Verdict RedundancyProver::sample_type1(int i, int k) {
  const int m = isa_.width;
  const Polarity pol = isa_.polarity;
  const Op op = isa_.functions[i].op;
  auto pred = [&](word_t a, word_t b) {
    return bit_active(eval_op(op, a, b, m), k, pol);
  };
  for (const auto& [a, b] : corner_case_deck(m))
    if (pred(a, b))
      return {VerdictStatus::kSatisfiable, ProofMethod::kCornerCase, a, b};
  const word_t mask = isa_.mask();
  std::mt19937_64 rng(cfg_.sample_seed);
  for (std::uint64_t d = 0; d < cfg_.sample_budget; ++d) {
    const word_t a = rng() & mask, b = rng() & mask;
    if (pred(a, b))
      return {VerdictStatus::kSatisfiable, ProofMethod::kCornerCase, a, b};
  }
  return {VerdictStatus::kUnknown, ProofMethod::kCornerCase, 0, 0};
}

}  // namespace cfw
