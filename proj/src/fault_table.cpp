#include "cfw/fault_table.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace cfw {

bool FaultTable::satisfies(const Constraint& c) const {
  if (c.kind == ConstraintKind::kType1) return (type1[c.i] >> c.k) & 1;
  return (at(c.i, c.j) >> c.k) & 1;
}

FaultTable simulate(const InstructionSet& isa, const TestSet& test) {
  const int n = isa.n();
  const int m = isa.width;
  FaultTable table(n, m);
  const bool active_high = isa.polarity == Polarity::kActiveHigh;
  const word_t mask = isa.mask();
  std::vector<word_t> y(n);
  for (const TestPattern& t : test.patterns) {
    eval_all(isa, t.func, t.a, t.b, y);
    const int i = t.func;
    // Active bits of y, per function, as a mask.
    const word_t yi_act = active_high ? y[i] : (~y[i] & mask);
    table.type1[i] |= yi_act;
    const word_t yi_inact = ~yi_act & mask;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const word_t yj_act = active_high ? y[j] : (~y[j] & mask);
      table.at(i, j) |= yi_inact & yj_act;
    }
  }
  return table;
}

CoverageReport coverage(const FaultTable& table,
                        std::span<const Constraint> redundant) {
  CoverageReport rep;
  const int n = table.n;
  const int m = table.m;
  rep.total = static_cast<std::uint64_t>(n) * (n - 1) * m;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      word_t bits = table.at(i, j);
      while (bits) {
        bits &= bits - 1;
        ++rep.satisfied;
      }
    }
  for (const Constraint& c : redundant) {
    if (c.kind != ConstraintKind::kType2)
      throw std::invalid_argument(
          "coverage exclusions must be TYPE2 constraints");
    if (table.satisfies(c))
      throw std::invalid_argument(
          "constraint marked redundant but satisfied by the test set");
    ++rep.redundant_excluded;
  }
  rep.raw_pct =
      rep.total ? 100.0 * static_cast<double>(rep.satisfied) / rep.total : 0.0;
  const std::uint64_t denom = rep.total - rep.redundant_excluded;
  rep.adjusted_pct =
      denom ? 100.0 * static_cast<double>(rep.satisfied) / denom : 100.0;
  return rep;
}

namespace {

std::string bits_string(word_t v, int m) {
  std::string s(m, '0');
  for (int k = 0; k < m; ++k)
    if ((v >> (m - 1 - k)) & 1) s[k] = '1';
  return s;
}

}  // namespace

std::string render_fault_table(const FaultTable& table,
                               const InstructionSet& isa) {
  std::ostringstream out;
  out << "faulttable n=" << table.n << " m=" << table.m << "\n";
  for (int i = 0; i < table.n; ++i)
    for (int j = 0; j < table.n; ++j) {
      if (j == i) continue;
      out << isa.functions[i].mnemonic << " " << isa.functions[j].mnemonic
          << " " << bits_string(table.at(i, j), table.m) << "\n";
    }
  return out.str();
}

ParsedFaultTable parse_fault_table(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string header;
  if (!std::getline(in, header))
    throw std::invalid_argument("empty fault table document");
  int n = 0, m = 0;
  if (std::sscanf(header.c_str(), "faulttable n=%d m=%d", &n, &m) != 2 ||
      n < 1 || m < 1 || m > kMaxWidth)
    throw std::invalid_argument("bad fault table header: " + header);
  ParsedFaultTable parsed{FaultTable(n, m), {}};
  auto intern = [&](const std::string& mn) {
    for (std::size_t i = 0; i < parsed.mnemonics.size(); ++i)
      if (parsed.mnemonics[i] == mn) return static_cast<int>(i);
    if (static_cast<int>(parsed.mnemonics.size()) == n)
      throw std::invalid_argument("more mnemonics than n: " + mn);
    parsed.mnemonics.push_back(mn);
    return static_cast<int>(parsed.mnemonics.size()) - 1;
  };
  std::string mi, mj, bits;
  std::size_t rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    if (!(ls >> mi)) continue;
    if (!(ls >> mj >> bits))
      throw std::invalid_argument("bad fault table row: " + line);
    if (static_cast<int>(bits.size()) != m ||
        bits.find_first_not_of("01") != std::string::npos)
      throw std::invalid_argument("bad bit vector: " + bits);
    const int i = intern(mi), j = intern(mj);
    if (i == j) throw std::invalid_argument("diagonal row: " + line);
    word_t v = 0;
    for (int k = 0; k < m; ++k)
      if (bits[k] == '1') v |= word_t{1} << (m - 1 - k);
    parsed.table.at(i, j) = v;
    ++rows;
  }
  if (rows != static_cast<std::size_t>(n) * (n - 1))
    throw std::invalid_argument("fault table row count mismatch");
  return parsed;
}

std::string render_coverage(const CoverageReport& report) {
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "coverage satisfied=%llu total=%llu redundant=%llu "
                "raw=%.2f%% adjusted=%.2f%%",
                static_cast<unsigned long long>(report.satisfied),
                static_cast<unsigned long long>(report.total),
                static_cast<unsigned long long>(report.redundant_excluded),
                report.raw_pct, report.adjusted_pct);
  return buf;
}

}  // namespace cfw
