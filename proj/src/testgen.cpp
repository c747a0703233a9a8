#include "cfw/testgen.hpp"

#include <cstdio>
#include <random>
#include <sstream>
#include <stdexcept>

namespace cfw {

std::vector<std::pair<word_t, word_t>> corner_case_deck(int m) {
  const word_t mask = width_mask(m);
  std::vector<word_t> values;
  auto push = [&](word_t v) {
    v &= mask;
    for (word_t seen : values)
      if (seen == v) return;
    values.push_back(v);
  };
  push(0);
  push(mask);
  push(mask & ~word_t{1});
  push(1);
  word_t alt01 = 0, alt10 = 0;
  for (int k = 0; k < m; ++k) {
    if (k % 2 == 0)
      alt01 |= word_t{1} << k;
    else
      alt10 |= word_t{1} << k;
  }
  push(alt01);
  push(alt10);
  for (int k = 0; k < m; ++k) push(word_t{1} << k);
  std::vector<std::pair<word_t, word_t>> deck;
  deck.reserve(values.size() * values.size());
  for (word_t a : values)
    for (word_t b : values) deck.emplace_back(a, b);
  return deck;
}

namespace {

// cs indices a given pattern can satisfy (row func only, per the update rule
// of the high-level fault simulation).
std::vector<std::size_t> satisfied_by(const TestPattern& t,
                                      const ConstraintSet& cs,
                                      std::span<const word_t> y) {
  std::vector<std::size_t> hits;
  for (std::size_t c = 0; c < cs.constraints.size(); ++c) {
    const Constraint& con = cs.constraints[c];
    if (con.i != t.func) continue;
    if (check_constraint(con, y, cs.polarity)) hits.push_back(c);
  }
  return hits;
}

}  // namespace

GenerateResult generate(const InstructionSet& isa, const ConstraintSet& cs,
                        std::uint64_t budget, std::uint64_t seed) {
  const int n = isa.n();
  GenerateResult res;
  res.test.seed = seed;
  res.test.isa_digest = isa_digest(isa);

  // Per-function views of the constraint list.
  std::vector<std::vector<std::size_t>> by_func(n);
  for (std::size_t c = 0; c < cs.constraints.size(); ++c)
    by_func[cs.constraints[c].i].push_back(c);

  std::vector<char> done(cs.constraints.size(), 0);
  const auto deck = corner_case_deck(isa.width);
  const word_t mask = isa.mask();
  std::mt19937_64 rng(seed);
  std::vector<word_t> y(n);

  for (int i = 0; i < n; ++i) {
    std::size_t open = by_func[i].size();
    for (std::uint64_t cand = 0; cand < budget && open > 0; ++cand) {
      word_t a, b;
      if (cand < deck.size()) {
        a = deck[cand].first;
        b = deck[cand].second;
      } else {
        a = rng() & mask;
        b = rng() & mask;
      }
      eval_all(isa, i, a, b, y);
      std::size_t gained = 0;
      for (std::size_t c : by_func[i]) {
        if (done[c]) continue;
        if (check_constraint(cs.constraints[c], y, cs.polarity)) ++gained;
      }
      if (gained == 0) continue;
      res.test.patterns.push_back({i, a, b});
      for (std::size_t c : by_func[i]) {
        if (done[c]) continue;
        if (check_constraint(cs.constraints[c], y, cs.polarity)) {
          done[c] = 1;
          --open;
        }
      }
    }
  }
  res.table = simulate(isa, res.test);
  for (std::size_t c = 0; c < cs.constraints.size(); ++c)
    if (!done[c]) res.uncovered.push_back(cs.constraints[c]);
  return res;
}

TestSet compact(const TestSet& test, const ConstraintSet& cs,
                const InstructionSet& isa) {
  const std::size_t np = test.patterns.size();
  std::vector<std::vector<std::size_t>> hits(np);
  std::vector<std::uint32_t> cnt(cs.constraints.size(), 0);
  std::vector<word_t> y(isa.n());
  for (std::size_t t = 0; t < np; ++t) {
    eval_all(isa, test.patterns[t].func, test.patterns[t].a,
             test.patterns[t].b, y);
    hits[t] = satisfied_by(test.patterns[t], cs, y);
    for (std::size_t c : hits[t]) ++cnt[c];
  }
  std::vector<char> keep(np, 1);
  for (std::size_t t = np; t-- > 0;) {
    bool removable = true;
    for (std::size_t c : hits[t])
      if (cnt[c] < 2) {
        removable = false;
        break;
      }
    if (!removable) continue;
    keep[t] = 0;
    for (std::size_t c : hits[t]) --cnt[c];
  }
  TestSet out;
  out.seed = test.seed;
  out.isa_digest = test.isa_digest;
  for (std::size_t t = 0; t < np; ++t)
    if (keep[t]) out.patterns.push_back(test.patterns[t]);
  return out;
}

std::string operand_hex(word_t v, int m) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%0*llx", (m + 3) / 4,
                static_cast<unsigned long long>(v));
  return buf;
}

std::string render_test_set(const TestSet& test, const InstructionSet& isa) {
  std::ostringstream out;
  out << "seed " << test.seed << "\n";
  for (const TestPattern& t : test.patterns)
    out << "test " << isa.functions[t.func].mnemonic << " "
        << operand_hex(t.a, isa.width) << " " << operand_hex(t.b, isa.width)
        << "\n";
  return out.str();
}

TestSet parse_test_set(std::string_view text, const InstructionSet& isa) {
  TestSet ts;
  ts.isa_digest = isa_digest(isa);
  std::istringstream in{std::string(text)};
  std::string line;
  const word_t mask = isa.mask();
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "seed") {
      if (!(ls >> ts.seed))
        throw std::invalid_argument("bad seed line: " + line);
    } else if (key == "test") {
      std::string mn, ha, hb;
      if (!(ls >> mn >> ha >> hb))
        throw std::invalid_argument("bad test line: " + line);
      const int f = isa.index_of(mn);
      if (f < 0) throw std::invalid_argument("unknown mnemonic: " + mn);
      word_t a = 0, b = 0;
      try {
        a = std::stoull(ha, nullptr, 16);
        b = std::stoull(hb, nullptr, 16);
      } catch (const std::exception&) {
        throw std::invalid_argument("bad operand hex: " + line);
      }
      if ((a & ~mask) || (b & ~mask))
        throw std::invalid_argument("operand wider than data word: " + line);
      ts.patterns.push_back({f, a, b});
    } else {
      throw std::invalid_argument("unknown test set line: " + line);
    }
  }
  return ts;
}

std::string emit_test_program(const TestSet& test, const InstructionSet& isa) {
  std::ostringstream out;
  out << "[CORE]\n"
      << "load r1 <- operand.a\n"
      << "load r2 <- operand.b\n"
      << "exec f(r1, r2) -> r3\n"
      << "store r3 -> response\n"
      << "[PATTERNS]\n";
  for (const TestPattern& t : test.patterns)
    out << "exec " << isa.functions[t.func].mnemonic << "\n";
  out << "[OPERANDS]\n";
  for (const TestPattern& t : test.patterns)
    out << operand_hex(t.a, isa.width) << " " << operand_hex(t.b, isa.width)
        << "\n";
  return out.str();
}

std::vector<TestPattern> parse_test_program(std::string_view text,
                                            const InstructionSet& isa) {
  enum Section { kNone, kCore, kPatterns, kOperands } sec = kNone;
  std::vector<int> funcs;
  std::vector<std::pair<word_t, word_t>> operands;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "[CORE]") {
      sec = kCore;
    } else if (tok == "[PATTERNS]") {
      sec = kPatterns;
    } else if (tok == "[OPERANDS]") {
      sec = kOperands;
    } else if (sec == kPatterns) {
      std::string mn;
      if (tok != "exec" || !(ls >> mn))
        throw std::invalid_argument("bad pattern line: " + line);
      const int f = isa.index_of(mn);
      if (f < 0) throw std::invalid_argument("unknown mnemonic: " + mn);
      funcs.push_back(f);
    } else if (sec == kOperands) {
      std::string hb;
      if (!(ls >> hb)) throw std::invalid_argument("bad operand line: " + line);
      try {
        operands.emplace_back(std::stoull(tok, nullptr, 16),
                              std::stoull(hb, nullptr, 16));
      } catch (const std::exception&) {
        throw std::invalid_argument("bad operand hex: " + line);
      }
    } else if (sec == kCore || sec == kNone) {
      // Core template text is free-form.
    }
  }
  if (funcs.size() != operands.size())
    throw std::invalid_argument("pattern/operand count mismatch");
  std::vector<TestPattern> out;
  out.reserve(funcs.size());
  for (std::size_t t = 0; t < funcs.size(); ++t)
    out.push_back({funcs[t], operands[t].first, operands[t].second});
  return out;
}

}  // namespace cfw
