#include <sstream>

#include "doa/report.h"

namespace doa {

namespace {

const char* severity_name(Severity s) {
  switch (s) {
    case Severity::kNote:
      return "note";
    case Severity::kWarning:
      return "warning";
    default:
      return "error";
  }
}

std::vector<int> character_list(const Characters& ch) {
  // Drop the unused rank-0 slot so the list reads s'_1 .. s'_D.
  if (ch.s.empty()) return {};
  return std::vector<int>(ch.s.begin() + 1, ch.s.end());
}

}  // namespace

nlohmann::ordered_json report_json(const PipelineResult& res,
                                   const ReportMeta& meta) {
  using json = nlohmann::ordered_json;
  json j;
  j["schema"] = "doa-report/1";
  j["spec"] = meta.spec_name;
  json dims = json::object();
  for (const auto& [k, v] : res.problem.dims) dims[k] = v;
  j["dimensions"] = dims;
  j["rng_seed"] = meta.rng_seed;
  j["trials"] = meta.trials;
  j["status"] = res.quality;
  j["exit_code"] = res.exit_code;
  j["degree"] = res.chars.degree;
  j["dimension"] = res.chars.dimension;
  if (res.dof) {
    j["dof"] = *res.dof;
  } else {
    j["dof"] = nullptr;
  }
  j["characters"] = character_list(res.chars);
  j["sigma_prime"] = res.chars.sigma_prime;
  json prolonged = json::array();
  for (std::size_t k = 1; k < res.chars.prolonged.size(); ++k) {
    prolonged.push_back(res.chars.prolonged[k]);
  }
  j["prolonged_characters"] = prolonged;
  json cartan;
  cartan["sum"] = res.chars.cartan_n;
  cartan["normals_next"] = res.chars.normals_next;
  cartan["ok"] = res.chars.cartan_ok;
  j["cartan"] = cartan;
  json seeds = json::array();
  for (CompId c : res.search.seeds.seeds) {
    seeds.push_back(res.problem.comp_display(c));
  }
  j["seeds"] = seeds;
  j["evolution"] = res.chars.evolution;
  j["normal_counts"] = res.normal_counts;
  json ordering;
  ordering["selected"] =
      res.search.ok || res.search.incompatible ? res.search.selected.name : "";
  ordering["sequence"] = json::array();
  json cands = json::array();
  for (const auto& c : res.search.candidates) {
    json jc;
    jc["name"] = c.ordering.name;
    jc["sequence"] = c.sequence;
    jc["accepted"] = c.accepted;
    jc["solve_failed"] = c.solve_failed;
    jc["failure_kind"] = c.failure_kind;
    jc["failure_details"] = c.failure_details;
    jc["seed_count"] = c.seed_count;
    cands.push_back(jc);
    if (c.accepted && ordering["sequence"].empty()) {
      ordering["sequence"] = c.sequence;
    }
  }
  if (res.search.ok) {
    // The accepted sequence comes from the selected ordering itself in case
    // a later candidate was also accepted.
    for (const auto& c : res.search.candidates) {
      if (c.ordering.rank_of_value == res.search.selected.rank_of_value) {
        ordering["sequence"] = c.sequence;
        break;
      }
    }
  }
  ordering["candidates"] = cands;
  j["ordering"] = ordering;
  json condr;
  condr["exact"] = res.cond_r.exact;
  condr["upgraded"] = res.cond_r.upgraded;
  condr["rank"] = res.cond_r.rank;
  condr["manifold_dim"] = res.cond_r.manifold_dim;
  condr["symmetry_dimension"] = res.cond_r.symmetry_dimension;
  j["condition_r"] = condr;
  json covering;
  covering["ok"] = res.covering.ok;
  json unc = json::array();
  for (CompId c : res.covering.uncovered) {
    unc.push_back(res.problem.comp_display(c));
  }
  covering["uncovered"] = unc;
  covering["truncation"] = res.covering.truncation;
  j["covering"] = covering;
  if (res.has_eom) {
    json eom;
    eom["dimension_drop_ok"] = res.eom_dimension_drop_ok;
    eom["new_direction_ok"] = res.eom_new_direction_ok;
    eom["base_dimension"] = res.base_dimension;
    eom["base_degree"] = res.base_degree;
    eom["new_directions"] = res.new_directions;
    j["eom"] = eom;
  } else {
    j["eom"] = nullptr;
  }
  j["residues_ok"] = res.residues_ok;
  j["notes"] = res.notes;
  json diags = json::array();
  for (const auto& d : res.diags) {
    json jd;
    jd["severity"] = severity_name(d.severity);
    jd["message"] = d.message;
    diags.push_back(jd);
  }
  j["diagnostics"] = diags;
  return j;
}

std::string report_text(const PipelineResult& res, const ReportMeta& meta,
                        bool trace) {
  std::ostringstream out;
  out << "spec: " << meta.spec_name << "\n";
  out << "dimensions:";
  if (res.problem.dims.empty()) out << " (none)";
  for (const auto& [k, v] : res.problem.dims) out << " " << k << "=" << v;
  out << "\n";
  out << "status: " << res.quality << "\n";
  if (res.quality == "error" || res.quality == "incompatible" ||
      res.quality == "advisory") {
    for (const auto& n : res.notes) out << "note: " << n << "\n";
    for (const auto& d : res.diags) {
      out << severity_name(d.severity) << ": " << d.message << "\n";
    }
    return out.str();
  }
  out << "degree of arbitrariness: " << res.chars.degree << "\n";
  out << "dimension of evolution: " << res.chars.dimension << "\n";
  if (res.dof) out << "degrees of freedom per point: " << *res.dof << "\n";
  out << "characters s':";
  for (int v : character_list(res.chars)) out << " " << v;
  out << "\n";
  out << "evolution directions:";
  if (res.chars.evolution.empty()) out << " (none)";
  for (const auto& v : res.chars.evolution) out << " " << v;
  out << "\n";
  out << "seeds: " << res.search.seeds.seeds.size() << "\n";
  out << "cartan test: N = " << res.chars.normals_next
      << ", sum k*s'_k = " << res.chars.cartan_n << " ("
      << (res.chars.cartan_ok ? "pass" : "fail") << ")\n";
  out << "ordering: " << res.search.selected.name;
  for (const auto& c : res.search.candidates) {
    if (c.ordering.rank_of_value == res.search.selected.rank_of_value) {
      out << " (" << c.sequence << ")";
      break;
    }
  }
  out << "\n";
  if (!res.cond_r.exact) {
    out << "symmetry dimension: " << res.cond_r.symmetry_dimension << "\n";
  }
  out << "rng seed: " << meta.rng_seed << "\n";
  for (const auto& n : res.notes) out << "note: " << n << "\n";
  for (const auto& d : res.diags) {
    if (d.severity != Severity::kNote || trace) {
      out << severity_name(d.severity) << ": " << d.message << "\n";
    }
  }
  if (trace) {
    out << "normal component counts by order:";
    for (int c : res.normal_counts) out << " " << c;
    out << "\n";
    out << "condition R rank: " << res.cond_r.rank << " of "
        << res.cond_r.manifold_dim << "\n";
    out << "ordering candidates:\n";
    for (const auto& c : res.search.candidates) {
      out << "  " << c.ordering.name << " [" << c.sequence << "]: "
          << (c.accepted ? "accepted"
                         : (c.solve_failed ? "solve failed"
                                           : "rejected " + c.failure_kind))
          << "\n";
      for (const auto& d : c.failure_details) out << "    " << d << "\n";
    }
    out << "seed components:\n";
    for (CompId c : res.search.seeds.seeds) {
      out << "  " << res.problem.comp_display(c) << "\n";
    }
    if (!res.covering.ok) {
      out << "uncovered components:\n";
      for (CompId c : res.covering.uncovered) {
        out << "  " << res.problem.comp_display(c) << "\n";
      }
    }
  }
  return out.str();
}

}  // namespace doa
