// Scratch harness for inspecting closure rows and residues; not installed.
#include <iostream>

#include "doa/examples.h"
#include "doa/involution.h"
#include "doa/oracle.h"
#include "doa/parser.h"

using namespace doa;

int main(int argc, char** argv) {
  std::string name = argc > 1 ? argv[1] : "riemann";
  long n = argc > 2 ? std::atol(argv[2]) : 3;
  auto text = find_example(name);
  if (!text) {
    std::cerr << "no example " << name << "\n";
    return 1;
  }
  auto pr = parse_spec(*text);
  if (!pr.ok) {
    std::cerr << format_diagnostics(pr.diags);
    return 1;
  }
  std::map<std::string, long> dims;
  if (n > 0) dims["n"] = n;
  Problem p = instantiate(pr.spec, dims);
  if (has_error(p.diags)) {
    std::cerr << format_diagnostics(p.diags);
    return 1;
  }
  Closure cl = close_problem(p);
  std::cout << "relations: " << cl.relations.size()
            << "  vacuity rows: " << cl.vacuity.size() << "\n";
  if (std::getenv("DOA_DEBUG_PIPE")) {
    PipelineOptions popts;
    popts.dims = dims;
    PipelineResult res = run_problem(pr.spec, popts);
    std::cout << "pipeline ok=" << res.ok << " exit=" << res.exit_code
              << " quality=" << res.quality << " degree=" << res.chars.degree
              << " dim=" << res.chars.dimension
              << " seeds=" << res.search.seeds.seeds.size() << "\n";
    for (const auto& cand : res.search.candidates) {
      std::cout << "candidate " << cand.ordering.name << " (" << cand.sequence
                << ") accepted=" << cand.accepted
                << " solve_failed=" << cand.solve_failed << " kind="
                << cand.failure_kind << " seed_count=" << cand.seed_count
                << "\n";
      for (const auto& dna : cand.failure_details) {
        std::cout << "    " << dna << "\n";
      }
    }
    for (const auto& nte : res.notes) std::cout << "note: " << nte << "\n";
    return 0;
  }
  const char* oname = std::getenv("DOA_DEBUG_ORD");
  IndexOrdering ord = make_ordering(p, oname ? oname : "natural");
  SolveOutcome sol = solve_system(p, cl, ord, 20260822ULL, 1);
  std::cout << "solve ok=" << sol.ok << " incompatible=" << sol.incompatible
            << " restarts=" << sol.restarts << "\n";
  if (!sol.diags.empty()) std::cout << format_diagnostics(sol.diags);
  if (!sol.ok) return 0;
  int bad = 0;
  for (const auto& [prov, poly] : cl.vacuity) {
    auto v = eval_poly(poly, sol.values);
    if (v && *v == 0) continue;
    ++bad;
    if (bad > 3) continue;
    std::cout << "--- residue " << (v ? "nonzero" : "unset") << ": " << prov
              << "\n    " << p.poly_display(poly) << "\n";
    if (!v) {
      for (const auto& term : poly.terms) {
        for (CompId cid : term.factors) {
          if (!sol.values[std::size_t(cid)]) {
            std::cout << "    unset comp: " << p.comp_display(cid) << "\n";
          }
        }
      }
    }
  }
  std::cout << "bad vacuity rows: " << bad << " of " << cl.vacuity.size()
            << "\n";
  std::cout << "injected rows: " << sol.injected.size() << "\n";
  for (const auto& rel : sol.injected) {
    std::string disp = p.poly_display(rel.poly);
    if (disp.size() > 160) disp = disp.substr(0, 160) + "...";
    std::cout << "  inj [" << rel.provenance << "]: " << disp << "\n";
  }
  for (int r = 0; r <= p.max_order; ++r) {
    std::map<std::string, int> by_sym;
    for (CompId c : sol.stages[std::size_t(r)].fg_normals) {
      ++by_sym[p.symbols[std::size_t(p.comps.key(c).sym)].name];
    }
    std::cout << "order " << r << " fg normals:";
    for (const auto& [s, k] : by_sym) std::cout << " " << s << "=" << k;
    std::cout << "\n";
  }
  if (const char* pick = std::getenv("DOA_DEBUG_SYM")) {
    int shown = 0;
    for (CompId c : sol.stages[std::size_t(p.max_order)].fg_normals) {
      const auto& nm = p.symbols[std::size_t(p.comps.key(c).sym)].name;
      if (nm != pick) continue;
      if (++shown <= 20) std::cout << "  normal: " << p.comp_display(c) << "\n";
    }
    int rel_shown = 0;
    for (const auto& rel : cl.relations) {
      bool hit = false;
      for (const auto& t : rel.poly.terms) {
        for (CompId f : t.factors) {
          if (p.symbols[std::size_t(p.comps.key(f).sym)].name == pick &&
              p.comps.order_of(f) == 0) {
            hit = true;
          }
        }
      }
      if (!hit) continue;
      if (++rel_shown <= 8) {
        std::cout << "  row [" << rel.provenance
                  << "]: " << p.poly_display(rel.poly) << "\n";
      }
    }
    std::cout << "  rows touching order-0 " << pick << ": " << rel_shown
              << "\n";
  }
  for (int i = 4; i < argc; ++i) {
    std::string want = argv[i];
    for (CompId c = 0; c < CompId(p.comps.size()); ++c) {
      if (p.comp_display(c) != want) continue;
      int order = p.comps.order_of(c);
      bool listed = false;
      if (order <= p.max_order) {
        for (CompId e : p.comps_by_order[std::size_t(order)]) {
          if (e == c) listed = true;
        }
      }
      std::cout << want << ": id=" << c << " order=" << order
                << " listed=" << listed
                << " pivot=" << sol.pivot_of.count(c)
                << " valued=" << bool(sol.values[std::size_t(c)]) << "\n";
    }
  }
  return 0;
}
