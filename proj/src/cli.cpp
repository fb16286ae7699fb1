#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "doa/cli.h"
#include "doa/examples.h"
#include "doa/oracle.h"
#include "doa/parser.h"
#include "doa/report.h"

namespace doa {

namespace {

struct CommonOpts {
  std::string example;
  std::string spec_path;
  std::vector<std::string> dims;
  std::string format = "text";
  int max_order = -1;
  int seed_order = -1;
  std::string ordering;
  int trials = 3;
  std::uint64_t rng_seed = 20260822ULL;
  bool trace = false;
  long long oracle_cap = 6000;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  auto* ex = cmd->add_option("--example", o.example, "bundled example name");
  auto* sp = cmd->add_option("--spec", o.spec_path, "path to a .doa file");
  ex->excludes(sp);
  cmd->add_option("--dim", o.dims, "dimension binding key=value (repeatable)");
  cmd->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--max-order", o.max_order, "derivative order budget");
  cmd->add_option("--seed-order", o.seed_order, "seed derivative order");
  cmd->add_option("--ordering", o.ordering,
                  "ordering hint: natural, reversed, special_smallest, "
                  "special_greatest");
  cmd->add_option("--trials", o.trials, "generic-point elimination trials");
  cmd->add_option("--rng-seed", o.rng_seed, "random seed for generic points");
  cmd->add_flag("--trace", o.trace, "verbose elimination and ordering trace");
  cmd->add_option("--oracle-cap", o.oracle_cap,
                  "dense oracle variable budget (verify)");
}

bool load_spec(const CommonOpts& o, ProblemSpec& spec, std::string& name,
               std::ostream& err) {
  std::string text;
  if (!o.example.empty()) {
    auto found = find_example(o.example);
    if (!found) {
      err << "error: unknown example '" << o.example << "'\n";
      return false;
    }
    text = *found;
    name = o.example;
  } else if (!o.spec_path.empty()) {
    std::ifstream in(o.spec_path);
    if (!in) {
      err << "error: cannot read spec file '" << o.spec_path << "'\n";
      return false;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
    name = o.spec_path;
    auto slash = name.find_last_of('/');
    if (slash != std::string::npos) name = name.substr(slash + 1);
    if (name.size() > 4 && name.substr(name.size() - 4) == ".doa") {
      name = name.substr(0, name.size() - 4);
    }
  } else {
    err << "error: one of --example or --spec is required\n";
    return false;
  }
  ParseResult parsed = parse_spec(text);
  if (!parsed.ok) {
    err << format_diagnostics(parsed.diags);
    return false;
  }
  Diagnostics vd = validate_spec(parsed.spec);
  if (has_error(vd)) {
    err << format_diagnostics(vd);
    return false;
  }
  spec = std::move(parsed.spec);
  return true;
}

bool parse_dims(const std::vector<std::string>& dims,
                std::map<std::string, long>& out, std::ostream& err) {
  for (const auto& d : dims) {
    auto eq = d.find('=');
    if (eq == std::string::npos || eq == 0) {
      err << "error: --dim expects key=value, got '" << d << "'\n";
      return false;
    }
    try {
      out[d.substr(0, eq)] = std::stol(d.substr(eq + 1));
    } catch (const std::exception&) {
      err << "error: --dim value is not an integer in '" << d << "'\n";
      return false;
    }
  }
  return true;
}

PipelineOptions make_pipeline_opts(const CommonOpts& o,
                                   const std::map<std::string, long>& dims) {
  PipelineOptions opts;
  opts.dims = dims;
  opts.ordering_hint = o.ordering;
  opts.trials = o.trials;
  opts.rng_seed = o.rng_seed;
  opts.max_order_override = o.max_order;
  opts.seed_order_override = o.seed_order;
  return opts;
}

void emit_report(const PipelineResult& res, const CommonOpts& o,
                 const ReportMeta& meta, std::ostream& out) {
  if (o.format == "json") {
    out << report_json(res, meta).dump(2) << "\n";
  } else {
    out << report_text(res, meta, o.trace);
  }
}

int cmd_run(const CommonOpts& o, std::ostream& out, std::ostream& err) {
  ProblemSpec spec;
  std::string name;
  if (!load_spec(o, spec, name, err)) return 1;
  std::map<std::string, long> dims;
  if (!parse_dims(o.dims, dims, err)) return 1;
  PipelineResult res = run_problem(spec, make_pipeline_opts(o, dims));
  ReportMeta meta{name, o.rng_seed, o.trials};
  emit_report(res, o, meta, out);
  return res.exit_code;
}

int cmd_verify(const CommonOpts& o, std::ostream& out, std::ostream& err) {
  ProblemSpec spec;
  std::string name;
  if (!load_spec(o, spec, name, err)) return 1;
  std::map<std::string, long> dims;
  if (!parse_dims(o.dims, dims, err)) return 1;
  PipelineResult res = run_problem(spec, make_pipeline_opts(o, dims));
  ReportMeta meta{name, o.rng_seed, o.trials};
  emit_report(res, o, meta, out);
  if (res.exit_code == 1) return 1;
  CrossCheck cc = cross_check(res, o.oracle_cap);
  for (const auto& n : cc.notes) out << "verify note: " << n << "\n";
  for (const auto& d : cc.disagreements) out << "verify disagreement: " << d << "\n";
  if (!cc.disagreements.empty()) return 4;
  out << "verify: ok\n";
  return 0;
}

struct ScanOpts {
  long from = 0;
  long to = 0;
  std::string var = "n";
};

int cmd_scan(const CommonOpts& o, const ScanOpts& s, std::ostream& out,
             std::ostream& err) {
  ProblemSpec spec;
  std::string name;
  if (!load_spec(o, spec, name, err)) return 1;
  std::map<std::string, long> dims;
  if (!parse_dims(o.dims, dims, err)) return 1;
  if (s.to < s.from + 2) {
    err << "error: scan needs at least three values of " << s.var << "\n";
    return 1;
  }
  std::vector<std::pair<long, long>> deg_pts, dim_pts;
  std::vector<std::string> lines;
  int worst = 0;
  for (long n = s.from; n <= s.to; ++n) {
    std::map<std::string, long> d = dims;
    d[s.var] = n;
    PipelineResult res = run_problem(spec, make_pipeline_opts(o, d));
    if (res.exit_code == 1 || res.exit_code == 3) {
      err << "error: run at " << s.var << "=" << n << " gave status "
          << res.quality << "\n";
      for (const auto& di : res.diags) err << di.message << "\n";
      return res.exit_code;
    }
    worst = std::max(worst, 0);
    deg_pts.emplace_back(n, res.chars.degree);
    dim_pts.emplace_back(n, res.chars.dimension);
    std::ostringstream line;
    line << s.var << "=" << n << ": degree " << res.chars.degree
         << " at dimension " << res.chars.dimension << " (" << res.quality
         << ")";
    lines.push_back(line.str());
  }

  auto fit_line = [&](const std::string& what,
                      const std::vector<std::pair<long, long>>& pts)
      -> std::pair<std::string, bool> {
    std::vector<std::pair<long, long>> sample(pts.begin(), pts.end() - 1);
    auto held = pts.back();
    std::vector<Rat> coeffs = lagrange_fit(sample);
    Rat value(0);
    Rat x(held.first);
    Rat power(1);
    for (const auto& c : coeffs) {
      value += c * power;
      power *= x;
    }
    if (value == Rat(held.second)) {
      return {what + "(" + s.var + ") = " + polynomial_string(coeffs, s.var),
              true};
    }
    return {what + " fit failed: held-out " + s.var + "=" +
                std::to_string(held.first) + " breaks the interpolation",
            false};
  };
  auto [dline, dok] = fit_line("degree", deg_pts);
  auto [mline, mok] = fit_line("dimension", dim_pts);

  if (o.format == "json") {
    nlohmann::ordered_json j;
    j["schema"] = "doa-scan/1";
    j["spec"] = name;
    j["var"] = s.var;
    nlohmann::ordered_json results = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < deg_pts.size(); ++i) {
      nlohmann::ordered_json r;
      r["n"] = deg_pts[i].first;
      r["degree"] = deg_pts[i].second;
      r["dimension"] = dim_pts[i].second;
      results.push_back(r);
    }
    j["results"] = results;
    if (dok) {
      j["degree_fit"] = dline;
    } else {
      j["degree_fit"] = nullptr;
    }
    if (mok) {
      j["dimension_fit"] = mline;
    } else {
      j["dimension_fit"] = nullptr;
    }
    out << j.dump(2) << "\n";
  } else {
    out << "scan of " << name << ":\n";
    for (const auto& l : lines) out << "  " << l << "\n";
    out << dline << "\n" << mline << "\n";
  }
  return worst;
}

}  // namespace

std::vector<Rat> lagrange_fit(const std::vector<std::pair<long, long>>& pts) {
  // Newton divided differences, then expansion into monomial coefficients.
  std::size_t k = pts.size();
  std::vector<Rat> x(k), coef(k);
  for (std::size_t i = 0; i < k; ++i) {
    x[i] = Rat(pts[i].first);
    coef[i] = Rat(pts[i].second);
  }
  for (std::size_t j = 1; j < k; ++j) {
    for (std::size_t i = k; i-- > j;) {
      coef[i] = Rat(coef[i] - coef[i - 1]) / Rat(x[i] - x[i - j]);
    }
  }
  std::vector<Rat> poly{Rat(0)};
  std::vector<Rat> basis{Rat(1)};  // product (t - x_0)..(t - x_{j-1})
  for (std::size_t j = 0; j < k; ++j) {
    if (poly.size() < basis.size()) poly.resize(basis.size(), Rat(0));
    for (std::size_t i = 0; i < basis.size(); ++i) {
      poly[i] += coef[j] * basis[i];
    }
    std::vector<Rat> next(basis.size() + 1, Rat(0));
    for (std::size_t i = 0; i < basis.size(); ++i) {
      next[i + 1] += basis[i];
      next[i] -= x[j] * basis[i];
    }
    basis = std::move(next);
  }
  while (poly.size() > 1 && poly.back() == 0) poly.pop_back();
  return poly;
}

std::string polynomial_string(const std::vector<Rat>& coeffs,
                              const std::string& var) {
  std::ostringstream out;
  bool first = true;
  for (std::size_t p = coeffs.size(); p-- > 0;) {
    const Rat& c = coeffs[p];
    if (c == 0 && !(first && p == 0)) continue;
    Rat mag = c < 0 ? Rat(-c) : c;
    if (first) {
      if (c < 0) out << "-";
      first = false;
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    bool unit = mag == 1;
    if (p == 0) {
      out << rat_to_string(mag);
    } else {
      if (!unit) out << rat_to_string(mag) << "*";
      out << var;
      if (p > 1) out << "^" << p;
    }
  }
  if (first) out << "0";
  return out.str();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"degree-of-arbitrariness calculator for moving-frame "
               "structures"};
  app.require_subcommand(0, 1);
  bool list_examples = false;
  app.add_flag("--list-examples", list_examples, "list bundled examples");

  CommonOpts run_o, scan_o, verify_o;
  ScanOpts scan_range;
  auto* run_cmd = app.add_subcommand("run", "analyze one problem");
  add_common(run_cmd, run_o);
  auto* scan_cmd =
      app.add_subcommand("scan", "run over a dimension range and fit");
  add_common(scan_cmd, scan_o);
  scan_cmd->add_option("--from", scan_range.from, "first value")->required();
  scan_cmd->add_option("--to", scan_range.to, "last value")->required();
  scan_cmd->add_option("--var", scan_range.var, "dimension key to scan");
  auto* verify_cmd =
      app.add_subcommand("verify", "analyze and cross-check with the oracle");
  add_common(verify_cmd, verify_o);
  auto* examples_cmd =
      app.add_subcommand("examples", "list bundled example specs");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 1;
  }

  if (list_examples || examples_cmd->parsed()) {
    for (const auto& line : example_listing()) out << line << "\n";
    return 0;
  }
  if (run_cmd->parsed()) return cmd_run(run_o, out, err);
  if (scan_cmd->parsed()) return cmd_scan(scan_o, scan_range, out, err);
  if (verify_cmd->parsed()) return cmd_verify(verify_o, out, err);
  out << app.help();
  return 0;
}

}  // namespace doa
