#include "cfw/isa.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cfw {

namespace {

constexpr OpInfo kCatalog[] = {
    {Op::kAdd, "ADD", 2, ConeClass::kLowCone},
    {Op::kSub, "SUB", 2, ConeClass::kLowCone},
    {Op::kAnd, "AND", 2, ConeClass::kBitLocal},
    {Op::kOr, "OR", 2, ConeClass::kBitLocal},
    {Op::kXor, "XOR", 2, ConeClass::kBitLocal},
    {Op::kNor, "NOR", 2, ConeClass::kBitLocal},
    {Op::kSlt, "SLT", 2, ConeClass::kFullWord},
    {Op::kSltu, "SLTU", 2, ConeClass::kFullWord},
    {Op::kSll, "SLL", 2, ConeClass::kFullWord},
    {Op::kSrl, "SRL", 2, ConeClass::kFullWord},
    {Op::kSra, "SRA", 2, ConeClass::kFullWord},
    {Op::kInc, "INC", 1, ConeClass::kLowCone},
    {Op::kDec, "DEC", 1, ConeClass::kLowCone},
    {Op::kOui, "OUI", 2, ConeClass::kLowCone},
};

constexpr OpInfo kDirectInfo = {Op::kDirect, "DIRECT", 2,
                                ConeClass::kBitLocal};

std::string upper(std::string_view s) {
  std::string r(s);
  std::transform(r.begin(), r.end(), r.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return r;
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw IsaParseError(line, msg);
}

std::int64_t sign_extend(word_t v, int m) {
  const word_t sgn = word_t{1} << (m - 1);
  return static_cast<std::int64_t>((v ^ sgn) - sgn);
}

}  // namespace

IsaParseError::IsaParseError(int line_, const std::string& msg)
    : std::runtime_error("line " + std::to_string(line_) + ": " + msg),
      line(line_) {}

word_t width_mask(int m) {
  return (m >= 64) ? ~word_t{0} : ((word_t{1} << m) - 1);
}

std::span<const OpInfo> op_catalog() { return kCatalog; }

const OpInfo& op_info(Op op) {
  if (op == Op::kDirect) return kDirectInfo;
  return kCatalog[static_cast<int>(op)];
}

std::optional<Op> op_from_name(std::string_view name) {
  const std::string u = upper(name);
  for (const OpInfo& info : kCatalog)
    if (u == info.name) return info.op;
  if (u == kDirectInfo.name) return Op::kDirect;
  return std::nullopt;
}

word_t eval_op(Op op, word_t a, word_t b, int m) {
  const word_t mask = width_mask(m);
  a &= mask;
  b &= mask;
  const int shift_bits = (m == 1) ? 1 : std::bit_width(unsigned(m - 1));
  const int s = static_cast<int>(b & ((word_t{1} << shift_bits) - 1));
  switch (op) {
    case Op::kAdd:
      return (a + b) & mask;
    case Op::kSub:
      return (a - b) & mask;
    case Op::kAnd:
      return a & b;
    case Op::kOr:
      return a | b;
    case Op::kXor:
      return a ^ b;
    case Op::kNor:
      return ~(a | b) & mask;
    case Op::kSlt:
      return sign_extend(a, m) < sign_extend(b, m) ? 1 : 0;
    case Op::kSltu:
      return a < b ? 1 : 0;
    case Op::kSll:
      return (s >= m) ? 0 : ((a << s) & mask);
    case Op::kSrl:
      return (s >= m) ? 0 : (a >> s);
    case Op::kSra: {
      if (s >= m) return (a >> (m - 1)) ? mask : 0;
      word_t r = a >> s;
      if ((a >> (m - 1)) & 1) r |= mask & ~(mask >> s);
      return r;
    }
    case Op::kInc:
      return (a + 1) & mask;
    case Op::kDec:
      return (a - 1) & mask;
    case Op::kOui:
      return (a | (b << (m / 2))) & mask;
    case Op::kDirect:
      return a;
  }
  return 0;
}

int InstructionSet::index_of(std::string_view mnemonic) const {
  const std::string u = upper(mnemonic);
  for (std::size_t i = 0; i < functions.size(); ++i)
    if (upper(functions[i].mnemonic) == u) return static_cast<int>(i);
  return -1;
}

InstructionSet parse_isa(std::string_view text) {
  InstructionSet isa;
  bool saw_width = false, saw_control = false, saw_mode = false;
  int lineno = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto pos = raw.find('#'); pos != std::string::npos) raw.resize(pos);
    std::istringstream ls(raw);
    std::string key;
    if (!(ls >> key)) continue;
    const std::string k = upper(key);
    if (k == "WIDTH") {
      int v = 0;
      if (!(ls >> v) || v < 1 || v > kMaxWidth)
        fail(lineno, "width must be an integer in [1, 64]");
      isa.width = v;
      saw_width = true;
    } else if (k == "CONTROL") {
      int v = 0;
      if (!(ls >> v) || v < 1 || v > kMaxControl)
        fail(lineno, "control must be an integer in [1, 16]");
      isa.control = v;
      saw_control = true;
    } else if (k == "MODE") {
      std::string v;
      if (!(ls >> v)) fail(lineno, "mode needs a value (ops or direct)");
      const std::string uv = upper(v);
      if (uv == "OPS")
        isa.mode = IsaMode::kOps;
      else if (uv == "DIRECT")
        isa.mode = IsaMode::kDirect;
      else
        fail(lineno, "mode must be ops or direct");
      saw_mode = true;
    } else if (k == "POLARITY") {
      std::string v;
      if (!(ls >> v)) fail(lineno, "polarity needs a value");
      const std::string uv = upper(v);
      if (uv == "ACTIVE_HIGH")
        isa.polarity = Polarity::kActiveHigh;
      else if (uv == "ACTIVE_LOW")
        isa.polarity = Polarity::kActiveLow;
      else
        fail(lineno, "polarity must be active_high or active_low");
    } else if (k == "FUNC") {
      if (!saw_mode) fail(lineno, "mode must be declared before func lines");
      if (!saw_control) fail(lineno, "control must be declared before func");
      FunctionSpec fs;
      std::string code_kw, code_str;
      if (!(ls >> fs.mnemonic >> code_kw >> code_str) ||
          upper(code_kw) != "CODE")
        fail(lineno, "func needs: func <mnemonic> code <bits> [op <name>]");
      if (code_str.empty() ||
          code_str.find_first_not_of("01") != std::string::npos)
        fail(lineno, "code must be a binary string");
      if (static_cast<int>(code_str.size()) != isa.control)
        fail(lineno, "code length must equal control line count");
      fs.code = static_cast<std::uint16_t>(
          std::stoul(code_str, nullptr, 2));
      std::string op_kw, op_str;
      if (isa.mode == IsaMode::kOps) {
        if (!(ls >> op_kw >> op_str) || upper(op_kw) != "OP")
          fail(lineno, "ops mode func needs: op <catalog-name>");
        auto op = op_from_name(op_str);
        if (!op || *op == Op::kDirect) fail(lineno, "unknown op: " + op_str);
        fs.op = *op;
        fs.arity = op_info(*op).arity;
      } else {
        if (ls >> op_kw) fail(lineno, "direct mode func takes no op clause");
        fs.op = Op::kDirect;
        fs.arity = 2;
      }
      isa.functions.push_back(std::move(fs));
    } else {
      fail(lineno, "unknown directive: " + key);
    }
  }
  if (!saw_width) fail(lineno, "missing width declaration");
  if (!saw_control) fail(lineno, "missing control declaration");
  if (!saw_mode) fail(lineno, "missing mode declaration");
  if (isa.n() < 2) fail(lineno, "at least two functions are required");
  if (isa.n() > (1 << isa.control))
    fail(lineno, "more functions than control codes");
  for (int i = 0; i < isa.n(); ++i)
    for (int j = i + 1; j < isa.n(); ++j) {
      if (isa.functions[i].code == isa.functions[j].code)
        fail(lineno, "duplicate code for " + isa.functions[i].mnemonic +
                         " and " + isa.functions[j].mnemonic);
      if (upper(isa.functions[i].mnemonic) ==
          upper(isa.functions[j].mnemonic))
        fail(lineno, "duplicate mnemonic " + isa.functions[i].mnemonic);
    }
  return isa;
}

InstructionSet load_isa(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IsaParseError(0, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_isa(ss.str());
}

word_t eval_function(const InstructionSet& isa, int func, word_t a, word_t b) {
  const FunctionSpec& fs = isa.functions[func];
  if (isa.mode == IsaMode::kDirect) return a & isa.mask();
  return eval_op(fs.op, a, b, isa.width);
}

void eval_all(const InstructionSet& isa, int func, word_t a, word_t b,
              std::span<word_t> out) {
  const int n = isa.n();
  if (isa.mode == IsaMode::kDirect) {
    const word_t mask = isa.mask();
    for (int h = 0; h < n; ++h) out[h] = (h == func ? a : b) & mask;
    return;
  }
  for (int h = 0; h < n; ++h)
    out[h] = eval_op(isa.functions[h].op, a, b, isa.width);
}

std::vector<word_t> eval_all(const InstructionSet& isa, int func, word_t a,
                             word_t b) {
  std::vector<word_t> out(isa.n());
  eval_all(isa, func, a, b, out);
  return out;
}

std::set<std::uint16_t> legal_codes(const InstructionSet& isa) {
  std::set<std::uint16_t> codes;
  for (const FunctionSpec& fs : isa.functions) codes.insert(fs.code);
  return codes;
}

std::string canonical_isa(const InstructionSet& isa) {
  std::ostringstream out;
  out << "width " << isa.width << "\n";
  out << "control " << isa.control << "\n";
  out << "mode " << (isa.mode == IsaMode::kOps ? "ops" : "direct") << "\n";
  out << "polarity "
      << (isa.polarity == Polarity::kActiveHigh ? "active_high"
                                                : "active_low")
      << "\n";
  for (const FunctionSpec& fs : isa.functions) {
    out << "func " << fs.mnemonic << " code "
        << code_bits(fs.code, isa.control);
    if (isa.mode == IsaMode::kOps) out << " op " << op_info(fs.op).name;
    out << "\n";
  }
  return out.str();
}

std::uint64_t isa_digest(const InstructionSet& isa) {
  const std::string text = canonical_isa(isa);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string code_bits(std::uint16_t code, int p) {
  std::string s(p, '0');
  for (int j = 0; j < p; ++j)
    if ((code >> (p - 1 - j)) & 1) s[j] = '1';
  return s;
}

}  // namespace cfw
