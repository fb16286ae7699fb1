#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <set>
#include <sstream>

#include "doa/relation_engine.h"

namespace doa {

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Scale-invariant fingerprint used to drop duplicate closure rows.
std::string poly_fingerprint(const Poly& poly) {
  Rat lead = poly.terms.front().coeff;
  std::ostringstream out;
  for (const auto& t : poly.terms) {
    out << Rat(t.coeff / lead).str();
    for (CompId f : t.factors) out << "," << f;
    out << ";";
  }
  return out.str();
}

}  // namespace

std::optional<Rat> eval_poly(const Poly& poly,
                             const std::vector<std::optional<Rat>>& values) {
  Rat out(0);
  for (const auto& t : poly.terms) {
    Rat v = t.coeff;
    for (CompId f : t.factors) {
      const auto& val = values[std::size_t(f)];
      if (!val) return std::nullopt;
      v *= *val;
    }
    out += v;
  }
  return out;
}

bool column_before(const Problem& p, const IndexOrdering& ord, CompId a,
                   CompId b) {
  const CompKey& ka = p.comps.key(a);
  const CompKey& kb = p.comps.key(b);
  auto max_rank = [&ord](const CompKey& k) {
    int r = 0;
    for (ValueId v : k.derivs) r = std::max(r, ord.rank(v));
    return r;
  };
  int ra = max_rank(ka);
  int rb = max_rank(kb);
  if (ra != rb) return ra > rb;
  if (ka.sym != kb.sym) return ka.sym < kb.sym;
  if (ka.primary != kb.primary) return ka.primary < kb.primary;
  return ka.derivs < kb.derivs;
}

namespace {

bool closure_push(Closure& out, Relation rel) {
  if (rel.poly.is_zero()) return false;
  if (!out.fingerprints.insert(poly_fingerprint(rel.poly)).second) {
    return false;
  }
  out.relations.push_back(std::move(rel));
  return true;
}

// Frame-derivative closure: every row whose components leave room for one
// more derivative is differentiated along each basic direction. Vertical
// parts are collected for the post-solve vacuity check.
void closure_sweep(Problem& p, Closure& out, std::size_t from) {
  for (std::size_t head = from; head < out.relations.size(); ++head) {
    Relation rel = out.relations[head];
    int lead = poly_leading_order(rel.poly, p.comps);
    if (lead < 0 || lead > p.max_order - 1) continue;
    FormExpression fe;
    fe.degree = 0;
    fe.parts.emplace(FormMonomial{}, rel.poly);
    FormExpression dfe = exterior_derivative(p, fe);
    for (const auto& [mono, poly] : dfe.parts) {
      if (poly.is_zero()) continue;
      AtomId atom = mono.atoms[0];
      if (p.atoms[std::size_t(atom)].is_basic) {
        Relation nr;
        nr.poly = poly;
        nr.kind = RelKind::kDerived;
        nr.provenance = "D_" + p.value_display(
                            p.atoms[std::size_t(atom)].values[0]) +
                        "(" + rel.provenance + ")";
        nr.constraint_idx = rel.constraint_idx;
        closure_push(out, std::move(nr));
      } else {
        out.vacuity.emplace_back("vertical part of d(" + rel.provenance +
                                     ") on " + p.atom_display(atom),
                                 poly);
      }
    }
  }
}

}  // namespace

Closure close_problem(Problem& p) {
  Closure out;
  for (const Relation& r : p.declared_relations) closure_push(out, r);
  for (const Relation& r : p.constraint_relations) closure_push(out, r);
  ClosureRelations bianchi = derive_bianchi(p);
  ClosureRelations exchange = generic_relations(p);
  for (auto& d : bianchi.diags) out.diags.push_back(d);
  for (auto& d : exchange.diags) out.diags.push_back(d);
  for (Relation& r : bianchi.relations) closure_push(out, std::move(r));
  for (Relation& r : exchange.relations) closure_push(out, std::move(r));
  closure_sweep(p, out, 0);
  return out;
}

bool extend_closure(Problem& p, Closure& closure,
                    const std::vector<Relation>& extra) {
  std::size_t from = closure.relations.size();
  for (const Relation& r : extra) closure_push(closure, r);
  if (closure.relations.size() == from) return false;
  closure_sweep(p, closure, from);
  return true;
}

namespace {

struct WorkRow {
  std::vector<std::pair<CompId, Rat>> cols;  // column-order sorted
  Poly residual;
  Rat constant;
  std::map<int, Rat> lambda;
};

enum class PassStatus { kDone, kSink, kAnomaly, kIncompatible };

class Solver {
 public:
  Solver(Problem& p, const Closure& closure, const IndexOrdering& ord,
         std::uint64_t seed, int trials)
      : p_(p), closure_(closure), ord_(ord), vs_(seed), trials_(trials) {}

  SolveOutcome run() {
    SolveOutcome best;
    bool have = false;
    std::vector<std::pair<int, int>> best_rank;
    std::set<std::vector<std::pair<int, int>>> ranks_seen;
    for (int trial = 0; trial < trials_; ++trial) {
      injected_.clear();
      sunk_seen_.clear();
      restrictions_.clear();
      int restarts = 0;
      PassStatus status = PassStatus::kAnomaly;
      for (restarts = 0; restarts <= 24; ++restarts) {
        status = pass(trial);
        if (status != PassStatus::kSink) break;
      }
      if (status == PassStatus::kIncompatible) {
        SolveOutcome out;
        out.incompatible = true;
        out.witness = witness_;
        out.trial_used = trial;
        out.diags.push_back(Diagnostic::error(
            "relations are incompatible: " + witness_));
        return out;
      }
      if (status != PassStatus::kDone) continue;
      std::vector<std::pair<int, int>> rank;
      for (const auto& st : stages_) {
        rank.emplace_back(int(st.fg_rows.size()), int(st.bg_rows.size()));
      }
      ranks_seen.insert(rank);
      if (!have || rank > best_rank) {
        best_rank = rank;
        best = SolveOutcome{};
        best.ok = true;
        best.stages = stages_;
        best.values = values_;
        best.injected = injected_;
        best.restrictions = restrictions_;
        best.restarts = restarts;
        best.trial_used = trial;
        best.pivot_of = pivot_of_;
        have = true;
      }
    }
    if (!have) {
      SolveOutcome out;
      out.diags.push_back(Diagnostic::error(
          "generic-point elimination failed on every trial" +
          (anomaly_note_.empty() ? std::string() : ": " + anomaly_note_)));
      return out;
    }
    if (ranks_seen.size() > 1) {
      best.trials_disagree = true;
      best.diags.push_back(Diagnostic::warning(
          "elimination trials disagree on rank; the maximal result is kept"));
    }
    return best;
  }

 private:
  const Relation& relation_at(int idx) const {
    int base = int(closure_.relations.size());
    return idx < base ? closure_.relations[std::size_t(idx)]
                      : injected_[std::size_t(idx - base)];
  }

  PassStatus pass(int trial) {
    trial_ = trial;
    values_.assign(std::size_t(p_.comps.size()), std::nullopt);
    pivot_of_.clear();
    stages_.assign(std::size_t(p_.max_order) + 1, StageResult{});
    sunk_.clear();
    restrictions_.clear();
    incompatible_ = false;
    witness_.clear();

    // Specified components are given functions: rows touching any unknown
    // belong to the foreground elimination at their top unknown order, and
    // the specified data is eliminated first, across all orders, so that
    // foreground folding always finds its values.
    int total = int(closure_.relations.size()) + int(injected_.size());
    std::vector<std::vector<int>> bg_buckets(std::size_t(p_.max_order) + 1);
    std::vector<std::vector<int>> fg_buckets(std::size_t(p_.max_order) + 1);
    for (int idx = 0; idx < total; ++idx) {
      const Relation& rel = relation_at(idx);
      bool fg = row_has_foreground(rel.poly);
      int lead = fg ? fg_leading_order(rel.poly)
                    : poly_leading_order(rel.poly, p_.comps);
      if (lead < 0) {
        witness_ = rel.provenance;
        return PassStatus::kIncompatible;
      }
      (fg ? fg_buckets : bg_buckets)[std::size_t(lead)].push_back(idx);
    }

    for (int r = 0; r <= p_.max_order; ++r) {
      StageResult& st = stages_[std::size_t(r)];
      std::map<CompId, int> pivots;
      std::vector<WorkRow> pending;
      for (int idx : bg_buckets[std::size_t(r)]) {
        auto w = build_row(idx, r, false);
        if (!w) return PassStatus::kAnomaly;
        reduce_insert(std::move(*w), r, true, pivots, st.bg_rows, pending);
      }
      assign_values(r, true, st);
      if (!flush_pending(pending, r, true)) return PassStatus::kAnomaly;
      if (incompatible_) return PassStatus::kIncompatible;
      if (!sunk_.empty()) {
        for (Relation& q : sunk_) injected_.push_back(std::move(q));
        return PassStatus::kSink;
      }
    }

    for (int r = 0; r <= p_.max_order; ++r) {
      StageResult& st = stages_[std::size_t(r)];
      std::map<CompId, int> fg_pivots;
      std::vector<WorkRow> pending;
      for (int idx : fg_buckets[std::size_t(r)]) {
        auto w = build_row(idx, r, true);
        if (!w) return PassStatus::kAnomaly;
        reduce_insert(std::move(*w), r, false, fg_pivots, st.fg_rows, pending);
      }
      assign_values(r, false, st);
      if (!flush_pending(pending, r, false)) return PassStatus::kAnomaly;
      if (incompatible_) return PassStatus::kIncompatible;
      if (!sunk_.empty()) {
        for (Relation& q : sunk_) injected_.push_back(std::move(q));
        return PassStatus::kSink;
      }
    }
    return PassStatus::kDone;
  }

  bool row_has_foreground(const Poly& poly) const {
    for (const auto& t : poly.terms) {
      for (CompId f : t.factors) {
        if (!p_.comp_specified(f)) return true;
      }
    }
    return false;
  }

  int fg_leading_order(const Poly& poly) const {
    int lead = -1;
    for (const auto& t : poly.terms) {
      for (CompId f : t.factors) {
        if (!p_.comp_specified(f)) {
          lead = std::max(lead, p_.comps.order_of(f));
        }
      }
    }
    return lead;
  }

  std::optional<WorkRow> build_row(int idx, int r, bool fold_specified) {
    const Poly& poly = relation_at(idx).poly;
    WorkRow w;
    w.lambda.emplace(idx, Rat(1));
    std::vector<std::pair<CompId, Rat>> raw;
    for (const auto& term : poly.terms) {
      Rat c = term.coeff;
      std::vector<CompId> level;
      for (CompId f : term.factors) {
        int o = p_.comps.order_of(f);
        bool fold = o < r || (fold_specified && p_.comp_specified(f));
        if (fold) {
          const auto& val = values_[std::size_t(f)];
          if (!val) {
            anomaly_note_ = "unvalued component " + p_.comp_display(f);
            if (std::getenv("DOA_DEBUG_ANOM")) {
              std::cerr << "anomaly: unvalued " << p_.comp_display(f)
                        << " at stage " << r << " in ["
                        << relation_at(idx).provenance << "]\n";
            }
            return std::nullopt;
          }
          c *= *val;
          if (c == 0) break;
        } else {
          level.push_back(f);
        }
      }
      if (c == 0) continue;
      if (level.empty()) {
        w.constant += c;
      } else if (level.size() == 1) {
        raw.emplace_back(level[0], c);
      } else {
        poly_add_inplace(w.residual, poly_term(c, std::move(level)));
      }
    }
    std::sort(raw.begin(), raw.end());
    for (const auto& [comp, c] : raw) {
      if (!w.cols.empty() && w.cols.back().first == comp) {
        w.cols.back().second += c;
      } else {
        w.cols.emplace_back(comp, c);
      }
    }
    w.cols.erase(std::remove_if(w.cols.begin(), w.cols.end(),
                                [](const auto& e) { return e.second == 0; }),
                 w.cols.end());
    std::sort(w.cols.begin(), w.cols.end(),
              [&](const auto& a, const auto& b) {
                return column_before(p_, ord_, a.first, b.first);
              });
    return w;
  }

  static bool poly_references(const Poly& poly, CompId comp) {
    for (const auto& term : poly.terms) {
      for (CompId f : term.factors) {
        if (f == comp) return true;
      }
    }
    return false;
  }

  void merge_sub(std::vector<std::pair<CompId, Rat>>& target,
                 const std::vector<std::pair<CompId, Rat>>& sub,
                 const Rat& factor) {
    std::vector<std::pair<CompId, Rat>> out;
    out.reserve(target.size() + sub.size());
    std::size_t i = 0, j = 0;
    while (i < target.size() || j < sub.size()) {
      bool take_t;
      if (i == target.size()) {
        take_t = false;
      } else if (j == sub.size()) {
        take_t = true;
      } else if (target[i].first == sub[j].first) {
        Rat c = target[i].second - factor * sub[j].second;
        if (c != 0) out.emplace_back(target[i].first, std::move(c));
        ++i;
        ++j;
        continue;
      } else {
        take_t = column_before(p_, ord_, target[i].first, sub[j].first);
      }
      if (take_t) {
        out.push_back(target[i++]);
      } else {
        out.emplace_back(sub[j].first, -factor * sub[j].second);
        ++j;
      }
    }
    target = std::move(out);
  }

  void reduce_insert(WorkRow w, int r, bool bg, std::map<CompId, int>& pivots,
                     std::vector<InstalledRow>& rows,
                     std::vector<WorkRow>& pending) {
    while (!w.cols.empty()) {
      auto it = pivots.find(w.cols[0].first);
      if (it == pivots.end()) break;
      const InstalledRow& pr = rows[std::size_t(it->second)];
      Rat f = w.cols[0].second;
      w.cols.erase(w.cols.begin());
      merge_sub(w.cols, pr.tail, f);
      if (!pr.residual.is_zero()) {
        poly_add_inplace(w.residual, poly_scale(pr.residual, -f));
      }
      w.constant -= f * pr.constant;
      for (const auto& [k, v] : pr.lambda) {
        Rat& slot = w.lambda[k];
        slot -= f * v;
        if (slot == 0) w.lambda.erase(k);
      }
    }
    if (w.cols.empty()) {
      if (!w.residual.is_zero() || w.constant != 0) pending.push_back(std::move(w));
      return;
    }
    // A pivot whose own residual references it cannot be valued by back
    // substitution; prefer the first column free of that cycle. Rows whose
    // every column is entangled with the residual carry no usable linear
    // rank and are deferred like empty rows.
    std::size_t pick = w.cols.size();
    for (std::size_t i = 0; i < w.cols.size(); ++i) {
      if (i > 0 && pivots.count(w.cols[i].first)) continue;
      if (poly_references(w.residual, w.cols[i].first)) continue;
      pick = i;
      break;
    }
    if (pick == w.cols.size()) {
      pending.push_back(std::move(w));
      return;
    }
    Rat lead = w.cols[pick].second;
    InstalledRow ir;
    ir.pivot = w.cols[pick].first;
    for (std::size_t i = 0; i < w.cols.size(); ++i) {
      if (i == pick) continue;
      ir.tail.emplace_back(w.cols[i].first, w.cols[i].second / lead);
    }
    ir.residual = poly_scale(w.residual, Rat(1) / lead);
    ir.constant = w.constant / lead;
    for (auto& [k, v] : w.lambda) ir.lambda.emplace(k, v / lead);
    pivots.emplace(ir.pivot, int(rows.size()));
    pivot_of_.emplace(ir.pivot, std::make_tuple(r, int(rows.size()), bg));
    rows.push_back(std::move(ir));
  }

  void assign_values(int r, bool bg, StageResult& st) {
    for (CompId c : p_.comps_by_order[std::size_t(r)]) {
      if (p_.comp_specified(c) != bg) continue;
      if (pivot_of_.count(c)) continue;
      std::uint64_t tag =
          fnv1a(p_.comp_display(c) + "|" + std::to_string(trial_));
      values_[std::size_t(c)] = vs_.value_for(tag);
      (bg ? st.bg_normals : st.fg_normals).push_back(c);
    }
    // Tails are not reduced against pivots installed before their own row,
    // so pivot values are resolved by sweeping to a fixpoint.
    auto& rows = bg ? st.bg_rows : st.fg_rows;
    bool progress = true;
    while (progress) {
      progress = false;
      for (std::size_t i = rows.size(); i-- > 0;) {
        const InstalledRow& row = rows[i];
        if (values_[std::size_t(row.pivot)]) continue;
        Rat v(0);
        bool ok = true;
        for (const auto& [comp, c] : row.tail) {
          const auto& val = values_[std::size_t(comp)];
          if (!val) {
            ok = false;
            break;
          }
          v += c * *val;
        }
        if (ok && !row.residual.is_zero()) {
          auto rv = eval_poly(row.residual, values_);
          if (rv) {
            v += *rv;
          } else {
            ok = false;
          }
        }
        if (!ok) continue;
        values_[std::size_t(row.pivot)] = -(v + row.constant);
        progress = true;
      }
    }
    for (const InstalledRow& row : rows) {
      if (!values_[std::size_t(row.pivot)]) {
        anomaly_note_ =
            "cyclic nonlinear dependence at order " + std::to_string(r);
        if (std::getenv("DOA_DEBUG_ANOM")) {
          std::cerr << "anomaly: pivot " << p_.comp_display(row.pivot)
                    << " unset at stage " << r << " from "
                    << recombination_provenance(row.lambda)
                    << " residual " << p_.poly_display(row.residual) << "\n";
        }
      }
    }
    auto by_key = [&](CompId a, CompId b) {
      const CompKey& ka = p_.comps.key(a);
      const CompKey& kb = p_.comps.key(b);
      return std::tie(ka.sym, ka.primary, ka.derivs) <
             std::tie(kb.sym, kb.primary, kb.derivs);
    };
    std::sort((bg ? st.bg_normals : st.fg_normals).begin(),
              (bg ? st.bg_normals : st.fg_normals).end(), by_key);
  }

  // Replaces every occurrence of one component by an expression.
  static Poly poly_substitute(const Poly& poly, CompId comp, const Poly& expr) {
    Poly out;
    for (const auto& term : poly.terms) {
      int count = 0;
      std::vector<CompId> rest;
      for (CompId f : term.factors) {
        if (f == comp) {
          ++count;
        } else {
          rest.push_back(f);
        }
      }
      Poly piece = poly_term(term.coeff, std::move(rest));
      for (int k = 0; k < count; ++k) piece = poly_mul(piece, expr);
      poly_add_inplace(out, piece);
    }
    return out;
  }

  // Eliminates this stage's pivots from a recombination symbolically. Rows
  // are processed in install order so that pivots reintroduced by a tail
  // are removed by a later step.
  Poly substitute_stage_pivots(Poly q, int r, bool bg) {
    const StageResult& st = stages_[std::size_t(r)];
    for (const InstalledRow& row : bg ? st.bg_rows : st.fg_rows) {
      Poly expr = poly_const(-row.constant);
      for (const auto& [c, coef] : row.tail) {
        poly_add_inplace(expr, poly_term(-coef, {c}));
      }
      poly_add_inplace(expr, poly_scale(row.residual, Rat(-1)));
      q = poly_substitute(q, row.pivot, expr);
    }
    return q;
  }

  // Evaluates deferred empty rows after the stage values exist. A nonzero
  // value demands the symbolic recombination be re-entered at its true
  // leading order; a constant recombination is an incompatibility.
  bool flush_pending(std::vector<WorkRow>& pending, int r, bool bg) {
    for (WorkRow& w : pending) {
      Rat total = w.constant;
      for (const auto& [comp, c] : w.cols) {
        const auto& val = values_[std::size_t(comp)];
        if (!val) {
          anomaly_note_ = "unresolved nonlinear residual at order " +
                          std::to_string(r);
          return false;
        }
        total += c * *val;
      }
      if (!w.residual.is_zero()) {
        auto rv = eval_poly(w.residual, values_);
        if (!rv) {
          anomaly_note_ = "unresolved nonlinear residual at order " +
                          std::to_string(r);
          if (std::getenv("DOA_DEBUG_ANOM")) {
            std::cerr << "anomaly: unresolved residual at stage " << r
                      << " from " << recombination_provenance(w.lambda)
                      << ": " << p_.poly_display(w.residual) << "\n";
          }
          return false;
        }
        total += *rv;
      }
      if (total == 0) continue;
      Poly q;
      for (const auto& [idx, coeff] : w.lambda) {
        poly_add_inplace(q, poly_scale(relation_at(idx).poly, coeff));
      }
      bool q_fg = row_has_foreground(q);
      int lead = q_fg ? fg_leading_order(q) : poly_leading_order(q, p_.comps);
      std::string prov = recombination_provenance(w.lambda);
      if (lead == r && q_fg == !bg) {
        // The cancellation used generic values; eliminate the stage pivots
        // symbolically to expose the true content of the consequence.
        q = substitute_stage_pivots(std::move(q), r, bg);
        q_fg = row_has_foreground(q);
        lead = q_fg ? fg_leading_order(q) : poly_leading_order(q, p_.comps);
        prov += " after pivot substitution";
      }
      if (lead < 0) {
        witness_ = prov;
        incompatible_ = true;
        return true;
      }
      if (lead == r && q_fg == !bg) {
        // Free components of this stage survive only inside products: the
        // consequence cuts the solution manifold without linear rank.
        restrictions_.push_back("nonlinear restriction from " + prov);
        continue;
      }
      Relation rel;
      rel.poly = std::move(q);
      rel.kind = RelKind::kInjected;
      rel.provenance = prov;
      if (sunk_seen_.insert(poly_fingerprint(rel.poly)).second) {
        sunk_.push_back(std::move(rel));
      } else {
        restrictions_.push_back("unresolved recombination from " + prov);
      }
    }
    return true;
  }

  std::string recombination_provenance(const std::map<int, Rat>& lambda) {
    std::string first;
    for (const auto& [idx, coeff] : lambda) {
      (void)coeff;
      first = relation_at(idx).provenance;
      break;
    }
    std::ostringstream out;
    out << "recombination of " << first;
    if (lambda.size() > 1) out << " (+" << lambda.size() - 1 << " rows)";
    return out.str();
  }

  Problem& p_;
  const Closure& closure_;
  const IndexOrdering& ord_;
  ValueStream vs_;
  int trials_;
  int trial_ = 0;

  std::vector<Relation> injected_;
  std::vector<Relation> sunk_;
  std::set<std::string> sunk_seen_;
  std::vector<std::string> restrictions_;
  std::vector<std::optional<Rat>> values_;
  std::map<CompId, std::tuple<int, int, bool>> pivot_of_;
  std::vector<StageResult> stages_;
  std::string witness_;
  std::string anomaly_note_;
  bool incompatible_ = false;
};

}  // namespace

SolveOutcome solve_system(Problem& p, const Closure& closure,
                          const IndexOrdering& ord, std::uint64_t rng_seed,
                          int trials) {
  Solver solver(p, closure, ord, rng_seed, trials);
  return solver.run();
}

}  // namespace doa
