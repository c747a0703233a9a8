#include "cfw/gate_model.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace cfw {

namespace {

// Per-term selection masks under a fault: bit k of sel[i] is the output of
// term i's literal AND for lane k.  Fault-free these are uniform (mask or 0).
void select_masks(const GateControlModel& model, const GateFault* fault,
                  std::uint16_t code, std::span<word_t> sel) {
  const int n = model.n, p = model.p;
  const word_t mask = width_mask(model.m);
  std::uint8_t stems[kMaxControl];
  for (int j = 0; j < p; ++j) stems[j] = (code >> j) & 1;
  const bool bridged = fault && fault->kind == FaultKind::kBridge;
  if (fault && !bridged) {
    for (const auto& [site, v] : fault->stuck)
      if (site.scope == SiteScope::kStem) stems[site.stem] = v;
  }
  if (bridged && fault->bridge_a.scope == SiteScope::kStem) {
    const std::uint8_t a = stems[fault->bridge_a.stem];
    const std::uint8_t b = stems[fault->bridge_b.stem];
    const std::uint8_t r =
        fault->bridge_model == BridgeModel::kWiredAnd ? (a & b) : (a | b);
    stems[fault->bridge_a.stem] = r;
    stems[fault->bridge_b.stem] = r;
  }
  for (int i = 0; i < n; ++i) {
    std::uint8_t bv[kMaxControl];
    for (int j = 0; j < p; ++j) bv[j] = stems[j];
    if (fault && !bridged) {
      for (const auto& [site, v] : fault->stuck)
        if (site.scope == SiteScope::kBranch && site.term == i)
          bv[site.stem] = v;
    }
    if (bridged && fault->bridge_a.scope == SiteScope::kBranch &&
        fault->bridge_a.term == i) {
      const std::uint8_t a = bv[fault->bridge_a.stem];
      const std::uint8_t b = bv[fault->bridge_b.stem];
      const std::uint8_t r =
          fault->bridge_model == BridgeModel::kWiredAnd ? (a & b) : (a | b);
      bv[fault->bridge_a.stem] = r;
      bv[fault->bridge_b.stem] = r;
    }
    bool lit[kMaxControl];
    bool base = true;
    for (int j = 0; j < p; ++j) {
      lit[j] = model.literal_positive(i, j) ? bv[j] != 0 : bv[j] == 0;
      base = base && lit[j];
    }
    word_t s = base ? mask : 0;
    if (fault && !bridged) {
      for (const auto& [site, v] : fault->stuck) {
        if (site.scope != SiteScope::kLane || site.term != i) continue;
        (void)v;
        bool bit = true;
        for (int j = 0; j < p && bit; ++j) {
          bool lv = lit[j];
          for (const auto& [s2, v2] : fault->stuck)
            if (s2.scope == SiteScope::kLane && s2.term == i &&
                s2.stem == j && s2.lane == site.lane)
              lv = v2;
          bit = lv;
        }
        if (bit)
          s |= word_t{1} << site.lane;
        else
          s &= ~(word_t{1} << site.lane);
      }
    }
    sel[i] = s;
  }
}

word_t combine(const GateControlModel& model, std::span<const word_t> sel,
               std::span<const word_t> y) {
  const word_t mask = width_mask(model.m);
  if (model.polarity == Polarity::kActiveHigh) {
    word_t out = 0;
    for (int i = 0; i < model.n; ++i) out |= sel[i] & y[i] & mask;
    return out;
  }
  word_t out = mask;
  for (int i = 0; i < model.n; ++i) out &= (~sel[i] | y[i]) & mask;
  return out;
}

std::string site_str(const FaultSite& s) {
  std::ostringstream out;
  switch (s.scope) {
    case SiteScope::kStem:
      out << "stem c" << (s.stem + 1);
      break;
    case SiteScope::kBranch:
      out << "branch t" << (s.term + 1) << ".c" << (s.stem + 1);
      break;
    case SiteScope::kLane:
      out << "lane t" << (s.term + 1) << ".c" << (s.stem + 1) << ".b"
          << s.lane;
      break;
  }
  return out.str();
}

FaultSite site_from_index(const GateControlModel& model, std::size_t idx) {
  const std::size_t p = static_cast<std::size_t>(model.p);
  if (idx < p) return {SiteScope::kStem, -1, static_cast<int>(idx), -1};
  idx -= p;
  return {SiteScope::kBranch, static_cast<int>(idx / p),
          static_cast<int>(idx % p), -1};
}

}  // namespace

GateControlModel synthesize(const InstructionSet& isa) {
  GateControlModel model;
  model.n = isa.n();
  model.m = isa.width;
  model.p = isa.control;
  model.polarity = isa.polarity;
  for (const FunctionSpec& fs : isa.functions) model.codes.push_back(fs.code);
  return model;
}

std::vector<GateFault> enumerate_faults(const GateControlModel& model,
                                        const FaultClassSelection& sel) {
  std::vector<GateFault> faults;
  const int n = model.n, m = model.m, p = model.p;
  auto saf = [&](FaultSite site, bool v) {
    GateFault f;
    f.kind = FaultKind::kSaf;
    f.stuck.emplace_back(site, v);
    faults.push_back(std::move(f));
  };
  if (sel.single) {
    for (int j = 0; j < p; ++j)
      for (int v = 0; v < 2; ++v) saf({SiteScope::kStem, -1, j, -1}, v);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < p; ++j)
        for (int v = 0; v < 2; ++v) saf({SiteScope::kBranch, i, j, -1}, v);
    if (sel.lanes)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j)
          for (int k = 0; k < m; ++k)
            for (int v = 0; v < 2; ++v) saf({SiteScope::kLane, i, j, k}, v);
  }
  if (sel.multi_up_to >= 2) {
    const std::size_t lines = static_cast<std::size_t>(p) + //
                              static_cast<std::size_t>(n) * p;
    long double universe = 0;
    for (int s = 2; s <= sel.multi_up_to && s <= static_cast<int>(lines);
         ++s) {
      long double comb = 1;
      for (int t = 0; t < s; ++t)
        comb = comb * static_cast<long double>(lines - t) / (t + 1);
      universe += comb * std::pow(2.0L, s);
    }
    if (universe > static_cast<long double>(sel.multi_cap)) {
      if (!sel.multi_sample) {
        std::ostringstream msg;
        msg << "multiple stuck-at universe has "
            << static_cast<unsigned long long>(universe)
            << " faults, over the cap of " << sel.multi_cap
            << "; enable sampling or lower the size";
        throw std::length_error(msg.str());
      }
      std::mt19937_64 rng(sel.multi_sample_seed);
      std::vector<std::size_t> pool(lines);
      for (std::size_t t = 0; t < lines; ++t) pool[t] = t;
      for (std::uint64_t d = 0; d < sel.multi_sample_size; ++d) {
        const int s =
            2 + static_cast<int>(rng() % static_cast<std::uint64_t>(
                                             sel.multi_up_to - 1));
        GateFault f;
        f.kind = FaultKind::kMultiSaf;
        for (int t = 0; t < s; ++t) {
          const std::size_t r =
              t + static_cast<std::size_t>(rng() % (lines - t));
          std::swap(pool[t], pool[r]);
        }
        const std::uint64_t vals = rng();
        for (int t = 0; t < s; ++t)
          f.stuck.emplace_back(site_from_index(model, pool[t]),
                               (vals >> t) & 1);
        faults.push_back(std::move(f));
      }
    } else {
      for (int s = 2; s <= sel.multi_up_to && s <= static_cast<int>(lines);
           ++s) {
        std::vector<std::size_t> c(s);
        for (int t = 0; t < s; ++t) c[t] = t;
        while (true) {
          for (std::uint64_t vals = 0; vals < (std::uint64_t{1} << s);
               ++vals) {
            GateFault f;
            f.kind = FaultKind::kMultiSaf;
            for (int t = 0; t < s; ++t)
              f.stuck.emplace_back(site_from_index(model, c[t]),
                                   (vals >> t) & 1);
            faults.push_back(std::move(f));
          }
          int t = s - 1;
          while (t >= 0 && c[t] == lines - s + t) --t;
          if (t < 0) break;
          ++c[t];
          for (int u = t + 1; u < s; ++u) c[u] = c[u - 1] + 1;
        }
      }
    }
  }
  if (sel.bridges) {
    auto bridge = [&](FaultSite a, FaultSite b, BridgeModel bm) {
      GateFault f;
      f.kind = FaultKind::kBridge;
      f.bridge_a = a;
      f.bridge_b = b;
      f.bridge_model = bm;
      faults.push_back(std::move(f));
    };
    for (int j1 = 0; j1 < p; ++j1)
      for (int j2 = j1 + 1; j2 < p; ++j2)
        for (BridgeModel bm : {BridgeModel::kWiredAnd, BridgeModel::kWiredOr})
          bridge({SiteScope::kStem, -1, j1, -1}, {SiteScope::kStem, -1, j2, -1},
                 bm);
    for (int i = 0; i < n; ++i)
      for (int j1 = 0; j1 < p; ++j1)
        for (int j2 = j1 + 1; j2 < p; ++j2)
          for (BridgeModel bm :
               {BridgeModel::kWiredAnd, BridgeModel::kWiredOr})
            bridge({SiteScope::kBranch, i, j1, -1},
                   {SiteScope::kBranch, i, j2, -1}, bm);
  }
  return faults;
}

word_t gate_eval(const GateControlModel& model, const GateFault* fault,
                 std::uint16_t code, std::span<const word_t> y) {
  std::vector<word_t> sel(model.n);
  select_masks(model, fault, code, sel);
  return combine(model, sel, y);
}

namespace {

void validate_site(const GateControlModel& model, const FaultSite& s) {
  const bool stem_ok = s.stem >= 0 && s.stem < model.p;
  const bool term_ok = s.term >= 0 && s.term < model.n;
  const bool lane_ok = s.lane >= 0 && s.lane < model.m;
  const bool ok = (s.scope == SiteScope::kStem && stem_ok) ||
                  (s.scope == SiteScope::kBranch && stem_ok && term_ok) ||
                  (s.scope == SiteScope::kLane && stem_ok && term_ok &&
                   lane_ok);
  if (!ok)
    throw std::out_of_range("fault site out of range: " + site_str(s));
}

void validate_fault(const GateControlModel& model, const GateFault& f) {
  if (f.kind == FaultKind::kBridge) {
    validate_site(model, f.bridge_a);
    validate_site(model, f.bridge_b);
    return;
  }
  for (const auto& [site, v] : f.stuck) {
    (void)v;
    validate_site(model, site);
  }
}

}  // namespace

DetectionReport fault_simulate(const GateControlModel& model,
                               const InstructionSet& isa, const TestSet& test,
                               std::span<const GateFault> faults) {
  for (const GateFault& f : faults) validate_fault(model, f);
  DetectionReport rep;
  rep.total = faults.size();
  rep.verdicts.resize(faults.size());
  const std::size_t np = test.patterns.size();
  std::vector<std::vector<word_t>> y(np);
  std::vector<std::uint16_t> codes(np);
  std::vector<word_t> free_out(np);
  for (std::size_t t = 0; t < np; ++t) {
    const TestPattern& tp = test.patterns[t];
    y[t] = eval_all(isa, tp.func, tp.a, tp.b);
    codes[t] = isa.functions[tp.func].code;
    free_out[t] = y[t][tp.func] & isa.mask();
  }
  std::vector<word_t> sel(model.n);
  for (std::size_t f = 0; f < faults.size(); ++f) {
    for (std::size_t t = 0; t < np; ++t) {
      select_masks(model, &faults[f], codes[t], sel);
      if (combine(model, sel, y[t]) != free_out[t]) {
        rep.verdicts[f] = {true, t};
        ++rep.detected;
        break;
      }
    }
  }
  return rep;
}

RedundancyOracle::RedundancyOracle(const GateControlModel& model,
                                   const InstructionSet& isa, OracleConfig cfg)
    : model_(model), isa_(isa), cfg_(cfg) {
  const int m = isa.width;
  exhaustive_ = 2 * m < 64 &&
                (std::uint64_t{1} << (2 * m)) <= cfg_.exhaustive_cap;
  if (exhaustive_ && isa.mode == IsaMode::kOps && m <= 8) {
    const std::size_t npairs = std::size_t{1} << (2 * m);
    const int n = isa.n();
    ytab_.resize(npairs * n);
    const word_t mask = isa.mask();
    for (std::size_t q = 0; q < npairs; ++q) {
      const word_t a = (q >> m) & mask, b = q & mask;
      for (int h = 0; h < n; ++h)
        ytab_[q * n + h] = eval_op(isa.functions[h].op, a, b, m);
    }
  }
}

OracleResult RedundancyOracle::classify(const GateFault& fault) const {
  const int n = model_.n, m = model_.m;
  const word_t mask = width_mask(m);
  std::vector<word_t> sel(n), y(n);
  if (exhaustive_) {
    const std::uint64_t npairs = std::uint64_t{1} << (2 * m);
    for (int g = 0; g < n; ++g) {
      select_masks(model_, &fault, model_.codes[g], sel);
      bool same = true;
      for (int i = 0; i < n && same; ++i)
        same = sel[i] == (i == g ? mask : 0);
      if (same) continue;  // output equals fault-free on every operand pair
      for (std::uint64_t q = 0; q < npairs; ++q) {
        const word_t a = (q >> m) & mask, b = q & mask;
        word_t freev;
        if (!ytab_.empty()) {
          const word_t* row = &ytab_[q * n];
          freev = row[g];
          if (combine(model_, sel, {row, static_cast<std::size_t>(n)}) ==
              freev)
            continue;
        } else {
          eval_all(isa_, g, a, b, y);
          freev = y[g];
          if (combine(model_, sel, y) == freev) continue;
        }
        return {OracleStatus::kTestable, g, a, b};
      }
    }
    return {OracleStatus::kRedundant, -1, 0, 0};
  }
  // Sampling: selection invariance is still an exact redundancy proof.
  bool any_diff = false;
  for (int g = 0; g < n && !any_diff; ++g) {
    select_masks(model_, &fault, model_.codes[g], sel);
    for (int i = 0; i < n && !any_diff; ++i)
      any_diff = sel[i] != (i == g ? mask : 0);
  }
  if (!any_diff) return {OracleStatus::kRedundant, -1, 0, 0};
  std::mt19937_64 rng(cfg_.sample_seed);
  for (std::uint64_t d = 0; d < cfg_.sample_budget; ++d) {
    const int g = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    const word_t a = rng() & mask, b = rng() & mask;
    eval_all(isa_, g, a, b, y);
    select_masks(model_, &fault, model_.codes[g], sel);
    if (combine(model_, sel, y) != (y[g] & mask))
      return {OracleStatus::kTestable, g, a, b};
  }
  return {OracleStatus::kUnknown, -1, 0, 0};
}

std::string fault_descriptor(const GateFault& fault) {
  std::ostringstream out;
  switch (fault.kind) {
    case FaultKind::kSaf:
      out << "SAF " << site_str(fault.stuck[0].first) << " sa"
          << (fault.stuck[0].second ? 1 : 0);
      break;
    case FaultKind::kMultiSaf: {
      out << "MULTI_SAF ";
      for (std::size_t t = 0; t < fault.stuck.size(); ++t) {
        if (t) out << " + ";
        out << site_str(fault.stuck[t].first) << " sa"
            << (fault.stuck[t].second ? 1 : 0);
      }
      break;
    }
    case FaultKind::kBridge:
      out << "BRIDGE "
          << (fault.bridge_model == BridgeModel::kWiredAnd ? "wired_and"
                                                           : "wired_or")
          << "(" << site_str(fault.bridge_a) << ", "
          << site_str(fault.bridge_b) << ")";
      break;
  }
  return out.str();
}

std::string render_detection_report(std::span<const GateFault> faults,
                                    const DetectionReport& report) {
  std::ostringstream out;
  for (std::size_t f = 0; f < faults.size(); ++f) {
    out << "fault " << fault_descriptor(faults[f]) << " : ";
    if (report.verdicts[f].detected)
      out << "detected pattern=" << report.verdicts[f].pattern;
    else
      out << "undetected";
    out << "\n";
  }
  const double pct =
      report.total ? 100.0 * static_cast<double>(report.detected) /
                         static_cast<double>(report.total)
                   : 100.0;
  char buf[96];
  std::snprintf(buf, sizeof buf, "coverage %zu/%zu = %.2f%%", report.detected,
                report.total, pct);
  out << buf << "\n";
  return out.str();
}

}  // namespace cfw
