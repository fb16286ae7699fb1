#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_set>

#include "doa/involution.h"

namespace doa {

namespace {

const Relation& relation_at(const Closure& closure, const SolveOutcome& solve,
                            int idx) {
  int base = int(closure.relations.size());
  return idx < base ? closure.relations[std::size_t(idx)]
                    : solve.injected[std::size_t(idx - base)];
}

std::string sequence_display(const Problem& p, const IndexOrdering& ord) {
  std::vector<ValueId> by_rank(p.derivation_values);
  std::sort(by_rank.begin(), by_rank.end(),
            [&](ValueId a, ValueId b) { return ord.rank(a) < ord.rank(b); });
  std::ostringstream out;
  for (std::size_t i = 0; i < by_rank.size(); ++i) {
    if (i) out << " < ";
    out << p.value_display(by_rank[i]);
  }
  return out.str();
}

IndexOrdering ordering_from_sequence(const Problem& p, std::string name,
                                     const std::vector<ValueId>& seq) {
  IndexOrdering ord;
  ord.name = std::move(name);
  ord.rank_of_value.assign(p.values.size(), 0);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    ord.rank_of_value[std::size_t(seq[i])] = int(i) + 1;
  }
  return ord;
}

// With derivation indices written in non-increasing rank, the last written
// index is the minimum-rank one; that index drives the seed conditions and
// the character count.
ValueId last_of(const CompKey& key, const IndexOrdering& ord) {
  ValueId best = key.derivs.front();
  for (ValueId v : key.derivs) {
    if (ord.rank(v) < ord.rank(best)) best = v;
  }
  return best;
}

}  // namespace

IndexOrdering make_ordering(const Problem& p, const std::string& name) {
  std::vector<ValueId> specials, rest;
  for (ValueId v : p.derivation_values) {
    const IndexClass& cls = p.classes[std::size_t(p.values[std::size_t(v)].cls)];
    (cls.kind == ClassKind::kSpecial ? specials : rest).push_back(v);
  }
  std::vector<ValueId> seq;
  if (name == "special_smallest") {
    seq = specials;
    seq.insert(seq.end(), rest.begin(), rest.end());
  } else if (name == "special_greatest") {
    seq = rest;
    seq.insert(seq.end(), specials.begin(), specials.end());
  } else if (name == "reversed") {
    seq.assign(p.derivation_values.rbegin(), p.derivation_values.rend());
  } else {
    seq = p.derivation_values;
  }
  return ordering_from_sequence(p, name, seq);
}

SeedSet find_seeds(Problem& p, const Closure& closure,
                   const SolveOutcome& solve, const IndexOrdering& ord) {
  SeedSet out;
  int seedO = p.seed_order;
  const auto& normals = solve.stages[std::size_t(seedO)].fg_normals;
  std::unordered_set<CompId> normal_set(normals.begin(), normals.end());
  bool ok = true;
  bool any_o1 = false;
  for (CompId c : normals) {
    const CompKey& key = p.comps.key(c);
    ValueId last = last_of(key, ord);
    int lr = ord.rank(last);
    for (ValueId v : p.derivation_values) {
      if (ord.rank(v) >= lr) continue;
      std::vector<ValueId> der;
      bool dropped = false;
      for (ValueId d : key.derivs) {
        if (!dropped && d == last) {
          dropped = true;
          continue;
        }
        der.push_back(d);
      }
      der.push_back(v);
      auto sib = p.comp_ref(key.sym, key.primary, der);
      if (!sib || normal_set.count(sib->second)) continue;
      ok = false;
      out.demands.emplace_back(v, last);
      CompId y = sib->second;
      std::string detail;
      bool o1 = false;
      auto it = solve.pivot_of.find(y);
      if (it != solve.pivot_of.end()) {
        auto [ro, ridx, bg] = it->second;
        const InstalledRow& row =
            bg ? solve.stages[std::size_t(ro)].bg_rows[std::size_t(ridx)]
               : solve.stages[std::size_t(ro)].fg_rows[std::size_t(ridx)];
        for (const auto& [srcidx, coeff] : row.lambda) {
          (void)coeff;
          const Relation& src = relation_at(closure, solve, srcidx);
          CompId top = -1;
          int top_lr = -1;
          for (const auto& t : src.poly.terms) {
            for (CompId f : t.factors) {
              if (f == y || p.comps.order_of(f) != seedO ||
                  p.comp_specified(f)) {
                continue;
              }
              const CompKey& fk = p.comps.key(f);
              int flr = fk.derivs.empty() ? 0 : ord.rank(last_of(fk, ord));
              if (top < 0 || flr > top_lr ||
                  (flr == top_lr && column_before(p, ord, f, top))) {
                top = f;
                top_lr = flr;
              }
            }
          }
          if (top < 0 || top_lr <= ord.rank(v)) continue;
          o1 = true;
          detail = "relation [" + src.provenance + "] couples " +
                   p.comp_display(y) + " to " + p.comp_display(top) +
                   ", whose last index is greater; rule O1 forbids the "
                   "greater invariant of a relation to remain a seed, and "
                   "the cascade determines " + p.comp_display(y);
          break;
        }
      }
      if (!o1) {
        detail = "seed " + p.comp_display(c) + " needs its lower sibling " +
                 p.comp_display(y) +
                 " as a seed, but that component is determined (rule O2)";
      }
      any_o1 = any_o1 || o1;
      out.failure_details.push_back(std::move(detail));
    }
  }
  if (ok) {
    out.ok = true;
    out.seeds = normals;
  } else {
    out.failure_kind = any_o1 ? "O1" : "O2";
  }
  return out;
}

OrderingSearch search_ordering(Problem& p, const Closure& closure,
                               const std::string& hint, std::uint64_t rng_seed,
                               int trials) {
  OrderingSearch out;
  std::vector<std::string> names;
  if (!hint.empty()) names.push_back(hint);
  bool has_special = false;
  for (const auto& cls : p.classes) {
    has_special = has_special || cls.kind == ClassKind::kSpecial;
  }
  if (has_special) {
    names.push_back("special_smallest");
    names.push_back("special_greatest");
  } else {
    names.push_back("natural");
    names.push_back("reversed");
  }

  std::set<std::vector<int>> tried;
  bool found = false;
  std::vector<std::pair<ValueId, ValueId>> demands;

  auto evaluate = [&](const IndexOrdering& ord) -> bool {
    if (!tried.insert(ord.rank_of_value).second) return false;
    OrderingCandidate rec;
    rec.ordering = ord;
    rec.sequence = sequence_display(p, ord);
    SolveOutcome sol =
        solve_system(p, closure, ord, rng_seed, found ? 1 : trials);
    if (sol.incompatible) {
      out.incompatible = true;
      out.solve = std::move(sol);
      out.selected = ord;
      out.candidates.push_back(std::move(rec));
      return true;
    }
    if (!sol.ok) {
      rec.solve_failed = true;
      rec.failure_kind = "solve";
      for (const auto& d : sol.diags) rec.failure_details.push_back(d.message);
      out.candidates.push_back(std::move(rec));
      return false;
    }
    SeedSet seeds = find_seeds(p, closure, sol, ord);
    if (seeds.ok) {
      rec.accepted = true;
      rec.seed_count = int(seeds.seeds.size());
      if (!found) {
        found = true;
        out.selected = ord;
        out.solve = std::move(sol);
        out.seeds = std::move(seeds);
      }
    } else {
      rec.failure_kind = seeds.failure_kind;
      rec.failure_details = seeds.failure_details;
      for (auto& d : seeds.demands) demands.push_back(d);
    }
    out.candidates.push_back(std::move(rec));
    return false;
  };

  for (const auto& name : names) {
    if (evaluate(make_ordering(p, name))) return out;  // incompatible
  }

  if (!found && p.derivation_values.size() <= 6) {
    std::vector<ValueId> seq = p.derivation_values;
    std::sort(seq.begin(), seq.end());
    do {
      IndexOrdering ord = ordering_from_sequence(p, "search", seq);
      if (evaluate(ord)) return out;
      if (found) break;
    } while (std::next_permutation(seq.begin(), seq.end()));
  } else if (!found) {
    out.diags.push_back(Diagnostic::warning(
        "ordering search was heuristic-only: exhaustive permutation search "
        "is disabled above 6 derivation directions"));
  }

  if (found) {
    out.ok = true;
    return out;
  }

  std::set<std::pair<ValueId, ValueId>> ds(demands.begin(), demands.end());
  for (const auto& [a, b] : ds) {
    if (ds.count({b, a})) {
      out.conflict = true;
      out.conflict_note =
          "no derivation ordering admits an involutive seed set: directions " +
          p.value_display(a) + " and " + p.value_display(b) +
          " each demand precedence over the other; the relation set couples "
          "them cyclically";
      break;
    }
  }
  if (!out.conflict) {
    out.diags.push_back(Diagnostic::error(
        "no admissible derivation ordering was found"));
  }
  return out;
}

CoveringResult check_covering(Problem& p, const Closure& closure,
                              const SolveOutcome& solve,
                              const std::vector<CompId>& seeds) {
  CoveringResult out;
  std::size_t n = std::size_t(p.comps.size());
  std::vector<char> in(n, 1);
  std::unordered_set<CompId> seed_set(seeds.begin(), seeds.end());

  std::vector<char> dependent(n, 0);
  std::vector<std::vector<CompId>> support(n);
  for (const auto& [c, where] : solve.pivot_of) {
    dependent[std::size_t(c)] = 1;
    auto [ro, ridx, bg] = where;
    const InstalledRow& row =
        bg ? solve.stages[std::size_t(ro)].bg_rows[std::size_t(ridx)]
           : solve.stages[std::size_t(ro)].fg_rows[std::size_t(ridx)];
    std::set<CompId> sup;
    for (const auto& [idx, coeff] : row.lambda) {
      (void)coeff;
      for (const auto& t : relation_at(closure, solve, idx).poly.terms) {
        for (CompId f : t.factors) {
          if (f != c) sup.insert(f);
        }
      }
    }
    support[std::size_t(c)].assign(sup.begin(), sup.end());
  }

  bool changed = true;
  while (changed) {
    changed = false;
    for (CompId c = 0; c < int(n); ++c) {
      if (!in[std::size_t(c)]) continue;
      if (p.comp_specified(c) || seed_set.count(c)) continue;
      bool just = false;
      if (dependent[std::size_t(c)]) {
        just = true;
        for (CompId s : support[std::size_t(c)]) {
          if (!in[std::size_t(s)]) {
            just = false;
            break;
          }
        }
      }
      if (!just && p.comps.order_of(c) < p.max_order) {
        just = true;
        const CompKey& key = p.comps.key(c);
        for (ValueId v : p.derivation_values) {
          std::vector<ValueId> der = key.derivs;
          der.push_back(v);
          auto d = p.comp_ref(key.sym, key.primary, der);
          if (d && !in[std::size_t(d->second)]) {
            just = false;
            break;
          }
        }
      }
      if (!just) {
        in[std::size_t(c)] = 0;
        changed = true;
      }
    }
  }

  std::set<CompId> targets;
  auto scan_poly = [&](const Poly& poly) {
    for (const auto& t : poly.terms) {
      for (CompId f : t.factors) targets.insert(f);
    }
  };
  for (const auto& fe : p.structure_of) {
    for (const auto& [mono, poly] : fe.parts) {
      (void)mono;
      scan_poly(poly);
    }
  }
  for (const auto& fe : p.decomposition_of) {
    for (const auto& [mono, poly] : fe.parts) {
      (void)mono;
      scan_poly(poly);
    }
  }
  for (const auto& r : p.declared_relations) scan_poly(r.poly);
  for (const auto& r : p.constraint_relations) scan_poly(r.poly);

  for (CompId t : targets) {
    if (!in[std::size_t(t)]) out.uncovered.push_back(t);
  }
  out.ok = out.uncovered.empty();
  if (!out.ok &&
      !solve.stages[std::size_t(p.max_order)].fg_normals.empty()) {
    out.truncation = true;
  }
  return out;
}

ConditionR check_condition_r(Problem& p, const SolveOutcome& solve) {
  ConditionR out;
  std::vector<int> col_of(p.atoms.size(), -1);
  std::vector<int> fam_of_col;
  int m = 0;
  for (std::size_t a = 0; a < p.atoms.size(); ++a) {
    const CoframeFamily& fam = p.families[std::size_t(p.atoms[a].family)];
    if (fam.kind == CoframeKind::kDerived) continue;
    col_of[a] = m++;
    fam_of_col.push_back(p.atoms[a].family);
  }
  out.manifold_dim = m;

  std::vector<std::vector<Rat>> basis;  // row-echelon, leading col index first
  std::vector<int> lead_col;
  auto insert_row = [&](std::vector<Rat> row) {
    for (std::size_t b = 0; b < basis.size(); ++b) {
      int lc = lead_col[b];
      if (row[std::size_t(lc)] == 0) continue;
      Rat f = row[std::size_t(lc)];
      for (int j = 0; j < m; ++j) row[std::size_t(j)] -= f * basis[b][std::size_t(j)];
    }
    int lc = -1;
    for (int j = 0; j < m; ++j) {
      if (row[std::size_t(j)] != 0) {
        lc = j;
        break;
      }
    }
    if (lc < 0) return;
    Rat f = row[std::size_t(lc)];
    for (int j = 0; j < m; ++j) row[std::size_t(j)] /= f;
    basis.push_back(std::move(row));
    lead_col.push_back(lc);
  };

  std::vector<std::vector<Rat>> all_rows;
  for (int r = 0; r + 1 <= p.max_order; ++r) {
    for (CompId c : p.comps_by_order[std::size_t(r)]) {
      bool specified = p.comp_specified(c);
      bool normal = !solve.dependent(c);
      bool aux = p.comp_auxiliary(c);
      if (!(specified || (normal && !aux))) continue;
      FormExpression d = d_of_comp(p, c);
      std::vector<Rat> row(std::size_t(m), Rat(0));
      for (const auto& [mono, poly] : d.parts) {
        auto val = eval_poly(poly, solve.values);
        if (!val) continue;
        int col = col_of[std::size_t(mono.atoms[0])];
        if (col >= 0) row[std::size_t(col)] += *val;
      }
      all_rows.push_back(row);
      insert_row(std::move(row));
      if (int(basis.size()) == m) break;
    }
    if (int(basis.size()) == m) break;
  }
  out.rank = int(basis.size());
  out.symmetry_dimension = m - out.rank;
  out.exact = out.rank == m;

  bool any_aux = false;
  for (const auto& s : p.symbols) any_aux = any_aux || s.auxiliary;
  if (any_aux) {
    out.notes.push_back(
        "auxiliary invariants are excluded from the differential span");
  }

  if (!out.exact) {
    // A coframe subsector whose structure equations have constant
    // coefficients and stay inside the subsector is a group factor; the
    // spanning condition is then only required transverse to it.
    std::set<int> sector;
    for (std::size_t f = 0; f < p.families.size(); ++f) {
      if (p.families[f].kind != CoframeKind::kDerived) sector.insert(int(f));
    }
    bool shrunk = true;
    while (shrunk) {
      shrunk = false;
      for (auto it = sector.begin(); it != sector.end();) {
        const CoframeFamily& fam = p.families[std::size_t(*it)];
        bool keep = true;
        for (int a = fam.first_atom; a < fam.first_atom + fam.atom_count;
             ++a) {
          for (const auto& [mono, poly] : p.structure_of[std::size_t(a)].parts) {
            for (const auto& t : poly.terms) {
              if (!t.factors.empty()) keep = false;
            }
            for (AtomId ma : mono.atoms) {
              if (!sector.count(p.atoms[std::size_t(ma)].family)) keep = false;
            }
          }
        }
        if (!keep) {
          it = sector.erase(it);
          shrunk = true;
        } else {
          ++it;
        }
      }
    }
    int total_families = 0;
    for (const auto& fam : p.families) {
      if (fam.kind != CoframeKind::kDerived) ++total_families;
    }
    if (!sector.empty() && int(sector.size()) < total_families) {
      std::vector<int> keep_cols;
      for (int j = 0; j < m; ++j) {
        if (!sector.count(fam_of_col[std::size_t(j)])) keep_cols.push_back(j);
      }
      std::vector<std::vector<Rat>> rbasis;
      std::vector<int> rlead;
      for (const auto& row : all_rows) {
        std::vector<Rat> rrow;
        rrow.reserve(keep_cols.size());
        for (int j : keep_cols) rrow.push_back(row[std::size_t(j)]);
        for (std::size_t b = 0; b < rbasis.size(); ++b) {
          Rat f = rrow[std::size_t(rlead[b])];
          if (f == 0) continue;
          for (std::size_t j = 0; j < rrow.size(); ++j) {
            rrow[j] -= f * rbasis[b][j];
          }
        }
        int lc = -1;
        for (std::size_t j = 0; j < rrow.size(); ++j) {
          if (rrow[j] != 0) {
            lc = int(j);
            break;
          }
        }
        if (lc < 0) continue;
        Rat f = rrow[std::size_t(lc)];
        for (auto& x : rrow) x /= f;
        rbasis.push_back(std::move(rrow));
        rlead.push_back(lc);
        if (rbasis.size() == keep_cols.size()) break;
      }
      if (rbasis.size() == keep_cols.size()) {
        out.upgraded = true;
        out.exact = true;
        std::ostringstream note;
        note << "directions";
        for (int f : sector) note << " " << p.families[std::size_t(f)].name;
        note << " close under constant structure; the spanning condition "
                "holds on the remaining coframe";
        out.notes.push_back(note.str());
      }
    } else if (int(sector.size()) == total_families) {
      out.notes.push_back(
          "every structure coefficient is constant: the coframe is a pure "
          "group coframe and the full symmetry dimension remains");
    }
  }
  return out;
}

Characters compute_characters(Problem& p, const SolveOutcome& solve,
                              const IndexOrdering& ord,
                              const std::vector<CompId>& seeds) {
  Characters out;
  int D = int(p.derivation_values.size());
  out.s.assign(std::size_t(D) + 1, 0);
  std::set<ValueId> lasts;
  for (CompId c : seeds) {
    const CompKey& key = p.comps.key(c);
    ValueId last = last_of(key, ord);
    out.s[std::size_t(ord.rank(last))]++;
    lasts.insert(last);
  }
  for (int k = D; k >= 1; --k) {
    if (out.s[std::size_t(k)] > 0) {
      out.dimension = k;
      break;
    }
  }
  out.degree = out.dimension > 0 ? out.s[std::size_t(out.dimension)] : 0;
  out.sigma_prime = D > 0 ? out.s[std::size_t(D)] : 0;
  std::vector<ValueId> by_rank(p.derivation_values);
  std::sort(by_rank.begin(), by_rank.end(),
            [&](ValueId a, ValueId b) { return ord.rank(a) < ord.rank(b); });
  for (ValueId v : by_rank) {
    if (!lasts.count(v)) out.evolution.push_back(p.value_display(v));
  }
  for (int k = 1; k <= D; ++k) out.cartan_n += k * out.s[std::size_t(k)];
  out.normals_next = int(
      solve.stages[std::size_t(p.seed_order) + 1].fg_normals.size());
  out.cartan_ok = out.cartan_n == out.normals_next;
  out.prolonged.assign(std::size_t(D) + 1, 0);
  for (int k = D; k >= 1; --k) {
    out.prolonged[std::size_t(k)] =
        out.s[std::size_t(k)] +
        (k < D ? out.prolonged[std::size_t(k) + 1] : 0);
  }
  return out;
}

PipelineResult run_problem(const ProblemSpec& spec,
                           const PipelineOptions& opts) {
  PipelineResult res;
  ProblemSpec working = spec;
  if (opts.max_order_override >= 2) {
    working.options.max_order = opts.max_order_override;
  }
  if (opts.seed_order_override >= 1) {
    working.options.seed_order = opts.seed_order_override;
  }
  if (opts.strip_eom) {
    std::vector<ConstraintDecl> kept;
    for (const auto& c : working.constraints) {
      if (c.tag != "eom") kept.push_back(c);
    }
    working.constraints = std::move(kept);
  } else {
    for (const auto& c : working.constraints) {
      res.has_eom = res.has_eom || c.tag == "eom";
    }
  }

  Problem p = instantiate(working, opts.dims);
  for (const auto& d : p.diags) res.diags.push_back(d);
  if (has_error(p.diags)) {
    res.quality = "error";
    res.exit_code = 1;
    res.problem = std::move(p);
    return res;
  }

  Closure closure = close_problem(p);
  for (const auto& d : closure.diags) res.diags.push_back(d);
  if (has_error(closure.diags)) {
    res.quality = "error";
    res.exit_code = 1;
    res.problem = std::move(p);
    return res;
  }

  std::string hint =
      !opts.ordering_hint.empty() ? opts.ordering_hint : working.options.ordering;
  res.search = search_ordering(p, closure, hint, opts.rng_seed, opts.trials);
  // Recombined rows found during elimination are genuine consequences; the
  // frame derivatives of the linear ones carry new rank, so sweep those into
  // the closure and search again until no new rows appear. Derivatives of
  // rows nonlinear in the invariants stay nonlinear and add no rank at a
  // generic point, so those rows are reported without being swept.
  for (int round = 0; round < 6; ++round) {
    if (!res.search.ok || res.search.solve.injected.empty()) break;
    std::vector<Relation> linear;
    for (const Relation& rel : res.search.solve.injected) {
      bool is_linear = true;
      for (const auto& term : rel.poly.terms) {
        if (term.factors.size() > 1) {
          is_linear = false;
          break;
        }
      }
      if (is_linear) linear.push_back(rel);
    }
    if (linear.empty()) break;
    if (!extend_closure(p, closure, linear)) break;
    res.search = search_ordering(p, closure, hint, opts.rng_seed, opts.trials);
  }
  for (const auto& d : res.search.diags) res.diags.push_back(d);
  for (const auto& d : res.search.solve.diags) res.diags.push_back(d);

  if (res.search.incompatible) {
    res.quality = "incompatible";
    res.exit_code = 3;
    res.ok = true;
    res.notes.push_back("incompatible relations: " + res.search.solve.witness);
    res.problem = std::move(p);
    return res;
  }
  if (!res.search.ok) {
    if (res.search.conflict) {
      res.quality = "advisory";
      res.exit_code = 2;
      res.ok = true;
      res.notes.push_back(res.search.conflict_note);
    } else {
      res.quality = "error";
      res.exit_code = 1;
    }
    res.problem = std::move(p);
    return res;
  }

  const SolveOutcome& sol = res.search.solve;
  for (int r = 0; r <= p.max_order; ++r) {
    res.normal_counts.push_back(
        int(sol.stages[std::size_t(r)].fg_normals.size()));
  }
  res.covering = check_covering(p, closure, sol, res.search.seeds.seeds);
  res.cond_r = check_condition_r(p, sol);
  res.chars = compute_characters(p, sol, res.search.selected,
                                 res.search.seeds.seeds);

  for (const auto& [prov, poly] : closure.vacuity) {
    auto v = eval_poly(poly, sol.values);
    if (!v || *v != 0) {
      res.residues_ok = false;
      res.diags.push_back(Diagnostic::warning(
          "vacuity residue is nonzero at the generic point: " + prov));
    }
  }

  if (res.search.seeds.seeds.empty()) {
    res.notes.push_back(
        "the seed set is empty: every invariant is determined by the "
        "relations, and the structure may or may not be inconsistent");
  }
  if (sol.trials_disagree) {
    res.notes.push_back(
        "elimination trials disagreed on rank; the maximal rank was kept");
  }
  for (const auto& note : sol.restrictions) res.notes.push_back(note);

  if (res.has_eom) {
    PipelineOptions bopts = opts;
    bopts.strip_eom = true;
    PipelineResult base = run_problem(spec, bopts);
    if (base.exit_code == 0 || base.exit_code == 2) {
      res.base_dimension = base.chars.dimension;
      res.base_degree = base.chars.degree;
      res.eom_dimension_drop_ok =
          base.chars.dimension - res.chars.dimension == 1;
      std::set<std::string> base_ev(base.chars.evolution.begin(),
                                    base.chars.evolution.end());
      for (const auto& v : res.chars.evolution) {
        if (!base_ev.count(v)) res.new_directions.push_back(v);
      }
      res.eom_new_direction_ok = res.new_directions.size() == 1;
      if (res.eom_dimension_drop_ok && res.eom_new_direction_ok) {
        res.notes.push_back(
            "the equations of motion drop the dimension by one and select "
            "one new evolution direction");
      } else {
        res.notes.push_back(
            "the equations of motion do not show the expected "
            "dimension-drop-by-one evolution pattern");
      }
      res.notes.push_back(
          "evolution directions are generic: characteristic directions are "
          "not analyzed");
    } else {
      res.notes.push_back(
          "the base problem without equations of motion failed to resolve; "
          "physicality checks were skipped");
    }
    if (res.chars.degree % 2 == 0 && res.chars.degree > 0) {
      res.dof = res.chars.degree / 2;
    } else if (res.chars.degree % 2 == 1) {
      res.notes.push_back(
          "the degree is odd, so no per-point degree-of-freedom pairing "
          "applies");
    }
  }

  if (!res.covering.ok) {
    res.quality = "inconclusive";
    res.exit_code = 2;
    std::ostringstream note;
    note << "covering rule I1 fails for";
    int shown = 0;
    for (CompId c : res.covering.uncovered) {
      if (shown++ == 4) {
        note << " ...";
        break;
      }
      note << " " << p.comp_display(c);
    }
    res.notes.push_back(note.str());
    if (res.covering.truncation) {
      res.notes.push_back(
          "unresolved frontier components remain at the order budget; "
          "raising max_order may settle the covering check");
    }
  } else if (res.cond_r.exact) {
    res.quality = "exact";
    res.exit_code = 0;
  } else {
    res.quality = "upper_bound";
    res.exit_code = 2;
    res.notes.push_back(
        "the invariant differentials span a corank-" +
        std::to_string(res.cond_r.symmetry_dimension) +
        " subspace: the result is an upper bound and the structure admits a "
        "symmetry pseudogroup of dimension " +
        std::to_string(res.cond_r.symmetry_dimension));
  }
  for (const auto& n : res.cond_r.notes) res.notes.push_back(n);
  if (!res.chars.cartan_ok) {
    res.diags.push_back(Diagnostic::warning(
        "the involutivity count does not match the next-order normal count"));
  }
  res.ok = true;
  res.problem = std::move(p);
  return res;
}

}  // namespace doa
