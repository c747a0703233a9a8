#pragma once
// Instruction-set model: operation catalog, ISA description documents and
// word-level semantics.  Everything downstream (constraints, test generation,
// gate-level structure) is derived from an InstructionSet.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cfw {

using word_t = std::uint64_t;

inline constexpr int kMaxWidth = 64;    // data word width m
inline constexpr int kMaxControl = 16;  // control word width p

// Which operand bits can influence result bit k.  Used by the redundancy
// prover to decide when a truncated truth table is an exact proof.
enum class ConeClass {
  kBitLocal,  // bit k depends only on operand bits k
  kLowCone,   // bit k depends only on operand bits 0..k
  kFullWord,  // bit k may depend on any operand bit
};

enum class Op : std::uint8_t {
  kAdd, kSub, kAnd, kOr, kXor, kNor, kSlt, kSltu,
  kSll, kSrl, kSra, kInc, kDec, kOui,
  kDirect,  // direct-mode pseudo-op: patterns supply data results verbatim
};

struct OpInfo {
  Op op;
  const char* name;
  int arity;  // 1 = unary (b ignored by the semantics)
  ConeClass cone;
};

std::span<const OpInfo> op_catalog();  // computable operations (no kDirect)
const OpInfo& op_info(Op op);
std::optional<Op> op_from_name(std::string_view name);  // case-insensitive

word_t width_mask(int m);
// Pure word-level semantics, result masked to m bits.  Unary ops ignore b.
word_t eval_op(Op op, word_t a, word_t b, int m);

enum class Polarity { kActiveHigh, kActiveLow };
enum class IsaMode { kOps, kDirect };

struct FunctionSpec {
  std::string mnemonic;
  std::uint16_t code = 0;  // control code, bit j = value of control line j+1
  Op op = Op::kDirect;
  int arity = 2;
};

struct InstructionSet {
  int width = 0;    // m
  int control = 0;  // p
  IsaMode mode = IsaMode::kOps;
  Polarity polarity = Polarity::kActiveHigh;
  std::vector<FunctionSpec> functions;  // document order is preserved

  int n() const { return static_cast<int>(functions.size()); }
  word_t mask() const { return width_mask(width); }
  int index_of(std::string_view mnemonic) const;  // -1 when absent
};

struct IsaParseError : std::runtime_error {
  IsaParseError(int line, const std::string& msg);
  int line;
};

InstructionSet parse_isa(std::string_view text);               // throws IsaParseError
InstructionSet load_isa(const std::filesystem::path& path);    // reads + parses

word_t eval_function(const InstructionSet& isa, int func, word_t a, word_t b);

// Data results y_1..y_n seen by one test pattern that executes `func` with
// operands (a, b).  In ops mode every function is evaluated on the shared
// pair; in direct mode the executed function's result is a and every other
// function's result is b (the pattern supplies the data inputs verbatim).
void eval_all(const InstructionSet& isa, int func, word_t a, word_t b,
              std::span<word_t> out);
std::vector<word_t> eval_all(const InstructionSet& isa, int func, word_t a,
                             word_t b);

std::set<std::uint16_t> legal_codes(const InstructionSet& isa);

// Canonical one-line-per-item rendering; basis of the digest.
std::string canonical_isa(const InstructionSet& isa);
std::uint64_t isa_digest(const InstructionSet& isa);  // FNV-1a of canonical form

// Control code rendered with line p leftmost, matching document order.
std::string code_bits(std::uint16_t code, int p);

}  // namespace cfw
