#include <algorithm>
#include <sstream>

#include "doa/oracle.h"

namespace doa {

namespace {

long long grid_size(const std::vector<int>& sizes) {
  long long g = 1;
  for (int s : sizes) g *= s;
  return g;
}

bool next_tuple(std::vector<int>& t, const std::vector<int>& sizes) {
  for (std::size_t i = t.size(); i-- > 0;) {
    if (++t[i] < sizes[i]) return true;
    t[i] = 0;
  }
  return false;
}

}  // namespace

DenseSystem::DenseSystem(std::vector<OracleSymbol> symbols, long long cap)
    : syms_(std::move(symbols)) {
  for (const auto& s : syms_) {
    offs_.push_back(total_);
    total_ += grid_size(s.sizes);
  }
  over_cap_ = total_ > cap;
}

long long DenseSystem::var_id(int sym, const std::vector<int>& idx) const {
  const auto& sizes = syms_[std::size_t(sym)].sizes;
  long long v = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    v = v * sizes[i] + idx[i];
  }
  return offs_[std::size_t(sym)] + v;
}

void DenseSystem::add_symmetry_rows() {
  if (over_cap_) return;
  for (std::size_t s = 0; s < syms_.size(); ++s) {
    const auto& sym = syms_[s];
    if (sym.sizes.empty()) continue;
    std::vector<int> t(sym.sizes.size(), 0);
    do {
      for (const auto& g : sym.generators) {
        std::vector<int> u = t;
        std::swap(u[std::size_t(g.a - 1)], u[std::size_t(g.b - 1)]);
        Rat sgn = g.antisym ? Rat(-1) : Rat(1);
        long long a = var_id(int(s), t);
        long long b = var_id(int(s), u);
        if (a == b) {
          if (g.antisym) add_row({{a, Rat(2)}});
          continue;
        }
        add_row({{a, Rat(1)}, {b, -sgn}});
      }
    } while (next_tuple(t, sym.sizes));
  }
}

void DenseSystem::add_row(const std::vector<std::pair<long long, Rat>>& entries) {
  if (over_cap_) return;
  std::map<long long, Rat> row;
  for (const auto& [v, c] : entries) {
    Rat& slot = row[v];
    slot += c;
    if (slot == 0) row.erase(v);
  }
  while (!row.empty()) {
    long long lead = row.begin()->first;
    auto it = pivots_.find(lead);
    if (it == pivots_.end()) {
      Rat f = row.begin()->second;
      for (auto& [v, c] : row) c /= f;
      pivots_.emplace(lead, std::move(row));
      return;
    }
    Rat f = row.begin()->second;
    for (const auto& [v, c] : it->second) {
      Rat& slot = row[v];
      slot -= f * c;
      if (slot == 0) row.erase(v);
    }
  }
}

long long DenseSystem::rank() { return static_cast<long long>(pivots_.size()); }

long long brute_force_count(const std::vector<OracleSymbol>& symbols,
                            const std::vector<std::vector<OracleTerm>>& rows,
                            long long cap) {
  DenseSystem sys(symbols, cap);
  if (sys.over_cap()) return -1;
  sys.add_symmetry_rows();
  for (const auto& row : rows) {
    std::vector<std::pair<long long, Rat>> entries;
    for (const auto& t : row) {
      entries.emplace_back(sys.var_id(t.sym, t.idx), t.coeff);
    }
    sys.add_row(entries);
  }
  return sys.nullity();
}

long long dense_normal_count(Problem& p, const Closure& closure,
                             const SolveOutcome& solve, int order,
                             long long var_budget) {
  int d = int(p.derivation_values.size());
  std::vector<OracleSymbol> osyms;
  std::vector<int> sym_of;  // problem symbol index -> oracle index, -1 skipped
  sym_of.assign(p.symbols.size(), -1);
  for (std::size_t s = 0; s < p.symbols.size(); ++s) {
    const SymbolInfo& info = p.symbols[s];
    if (info.constant || info.specified) continue;
    OracleSymbol os;
    os.name = info.name;
    for (int cls : info.slot_classes) {
      os.sizes.push_back(p.classes[std::size_t(cls)].size);
    }
    for (int k = 0; k < order; ++k) os.sizes.push_back(d);
    os.generators = p.spec.symbols[s].generators;
    sym_of[s] = int(osyms.size());
    osyms.push_back(std::move(os));
  }

  DenseSystem sys(osyms, var_budget);
  if (sys.over_cap()) return -1;
  sys.add_symmetry_rows();

  // Derivation slots commute at leading order; adjacent swaps suffice.
  for (std::size_t s = 0; s < osyms.size(); ++s) {
    const auto& sizes = osyms[s].sizes;
    std::size_t primary = sizes.size() - std::size_t(order);
    if (order < 2) break;
    std::vector<int> t(sizes.size(), 0);
    do {
      for (std::size_t k = primary; k + 1 < sizes.size(); ++k) {
        std::vector<int> u = t;
        std::swap(u[k], u[k + 1]);
        long long a = sys.var_id(int(s), t);
        long long b = sys.var_id(int(s), u);
        if (a != b) sys.add_row({{a, Rat(1)}, {b, Rat(-1)}});
      }
    } while (next_tuple(t, sizes));
  }

  // Position of each derivation value among the derivation directions.
  std::vector<int> dpos(p.values.size(), -1);
  for (int k = 0; k < d; ++k) {
    dpos[std::size_t(p.derivation_values[std::size_t(k)])] = k;
  }

  auto comp_var = [&](CompId c) -> long long {
    const CompKey& key = p.comps.key(c);
    int os = sym_of[std::size_t(key.sym)];
    const SymbolInfo& info = p.symbols[std::size_t(key.sym)];
    std::vector<int> idx;
    for (std::size_t i = 0; i < key.primary.size(); ++i) {
      int cls = info.slot_classes[i];
      idx.push_back(int(key.primary[i]) - p.classes[std::size_t(cls)].first_value);
    }
    for (ValueId v : key.derivs) idx.push_back(dpos[std::size_t(v)]);
    return sys.var_id(os, idx);
  };

  auto add_relation = [&](const Relation& rel) {
    std::vector<std::pair<long long, Rat>> entries;
    for (const auto& t : rel.poly.terms) {
      CompId unknown = -1;
      bool nonlinear = false;
      Rat coeff = t.coeff;
      for (CompId f : t.factors) {
        if (p.comps.order_of(f) == order && !p.comp_specified(f)) {
          if (unknown >= 0) {
            nonlinear = true;
            break;
          }
          unknown = f;
        } else {
          const auto& v = solve.values[std::size_t(f)];
          if (!v) {
            nonlinear = true;  // unvalued factor, drop conservatively
            break;
          }
          coeff *= *v;
        }
      }
      if (nonlinear || unknown < 0 || coeff == 0) continue;
      entries.emplace_back(comp_var(unknown), coeff);
    }
    if (!entries.empty()) sys.add_row(entries);
  };

  for (const auto& rel : closure.relations) add_relation(rel);
  for (const auto& rel : solve.injected) add_relation(rel);
  return sys.nullity();
}

CrossCheck cross_check(PipelineResult& res, long long var_budget) {
  CrossCheck out;
  auto disagree = [&](const std::string& msg) {
    out.disagreements.push_back(msg);
  };

  // Internal identities of the report itself.
  const Characters& ch = res.chars;
  int sum = 0;
  for (std::size_t k = 1; k < ch.s.size(); ++k) sum += ch.s[k];
  if (sum != int(res.search.seeds.seeds.size())) {
    disagree("character sum " + std::to_string(sum) +
             " does not match the seed count " +
             std::to_string(res.search.seeds.seeds.size()));
  }
  int dim = 0;
  for (std::size_t k = 1; k < ch.s.size(); ++k) {
    if (ch.s[k] > 0) dim = int(k);
  }
  if (dim != ch.dimension) {
    disagree("dimension " + std::to_string(ch.dimension) +
             " is not the highest rank with a nonzero character (" +
             std::to_string(dim) + ")");
  }
  int degree = dim > 0 ? ch.s[std::size_t(dim)] : 0;
  if (degree != ch.degree) {
    disagree("degree " + std::to_string(ch.degree) +
             " does not match the character at the dimension (" +
             std::to_string(degree) + ")");
  }
  int weighted = 0;
  for (std::size_t k = 1; k < ch.s.size(); ++k) weighted += int(k) * ch.s[k];
  if (weighted != ch.cartan_n) {
    disagree("the recorded involutivity sum " + std::to_string(ch.cartan_n) +
             " does not match sum k*s'_k = " + std::to_string(weighted));
  }
  for (std::size_t k = 1; k < ch.prolonged.size(); ++k) {
    int expect = 0;
    for (std::size_t j = k; j < ch.s.size(); ++j) expect += ch.s[j];
    if (ch.prolonged[k] != expect) {
      disagree("prolonged character s*_" + std::to_string(k) +
               " disagrees with the tail sum of s'");
      break;
    }
  }

  if (!res.search.ok) {
    out.notes.push_back("skipped: no accepted ordering, dense recount needs a "
                        "solved system");
    return out;
  }

  // Dense recount of normal components per order, where the budget allows.
  Problem& p = res.problem;
  Closure closure = close_problem(p);
  if (has_error(closure.diags)) {
    out.notes.push_back("skipped: closure rebuild failed");
    return out;
  }
  for (int r = 0; r <= p.max_order; ++r) {
    long long dense =
        dense_normal_count(p, closure, res.search.solve, r, var_budget);
    if (dense < 0) {
      out.notes.push_back("skipped: cap (order " + std::to_string(r) + ")");
      continue;
    }
    long long engine = res.normal_counts[std::size_t(r)];
    if (dense != engine) {
      disagree("dense normal count at order " + std::to_string(r) + " is " +
               std::to_string(dense) + ", the report says " +
               std::to_string(engine));
    }
    if (r == p.seed_order + 1 && dense >= 0 && dense != ch.normals_next) {
      disagree("dense recount of N is " + std::to_string(dense) +
               ", the report says " + std::to_string(ch.normals_next));
    }
  }
  return out;
}

}  // namespace doa
