#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quadratize/parse.hpp"
#include "quadratize/quadratize.hpp"
#include "quadratize/simulate.hpp"
#include "quadratize/workbench.hpp"

namespace quadratize {
namespace detail {

using ojson = nlohmann::ordered_json;

struct CliContext {
  std::string format;
  std::string mode;
  double tolerance;
  unsigned jobs;
  std::ostream& out;
  std::ostream& err;
  bool json() const { return format == "json"; }
};

inline ojson make_doc(const std::string& command, const std::string& mode, ojson input,
                      ojson result, const std::vector<std::string>& diags) {
  ojson d;
  d["command"] = command;
  d["mode"] = mode;
  d["input"] = std::move(input);
  d["result"] = std::move(result);
  d["diagnostics"] = diags;
  return d;
}

inline int finish(const CliContext& ctx, const ojson& doc, int code,
                  const std::string& text_body) {
  if (ctx.json()) {
    ctx.out << doc.dump(2) << "\n";
  } else {
    ctx.out << text_body;
    for (const auto& d : doc["diagnostics"]) ctx.out << "note: " << d.get<std::string>() << "\n";
  }
  return code;
}

inline ojson quad_json(const Quadratization& q) {
  ojson vars = ojson::array();
  for (const auto& v : q.vars().polys()) vars.push_back(v.str());
  ojson rhs = ojson::array();
  for (const auto& e : q.rhs()) rhs.push_back(e.str());
  ojson j;
  j["order"] = q.order();
  j["vars"] = std::move(vars);
  j["rhs"] = std::move(rhs);
  return j;
}

inline std::string quad_text(const Quadratization& q) {
  std::string s;
  for (size_t i = 0; i < q.order(); ++i)
    s += "z" + std::to_string(i + 1) + " = " + q.vars()[i].str() + "\n";
  s += "x' = " + q.rhs()[0].str() + "\n";
  for (size_t i = 0; i < q.order(); ++i)
    s += "z" + std::to_string(i + 1) + "' = " + q.rhs()[i + 1].str() + "\n";
  return s;
}

inline ojson stats_json(const SearchStats& s) {
  ojson j;
  j["max_degree"] = s.max_degree;
  j["tested"] = s.tested;
  j["pruned"] = s.pruned;
  j["total"] = s.total;
  ojson per = ojson::array();
  for (const auto& row : s.per_size) {
    ojson r;
    r["size"] = row.size;
    r["tested"] = row.tested;
    r["pruned"] = row.pruned;
    r["total"] = row.total;
    per.push_back(std::move(r));
  }
  j["per_size"] = std::move(per);
  return j;
}

inline std::string stats_text(const SearchStats& s, const std::string& label) {
  std::string t = "certificate (" + label + "), candidate degrees up to " +
                  std::to_string(s.max_degree) + ":\n";
  for (const auto& row : s.per_size)
    t += "  size " + std::to_string(row.size) + ": tested " + std::to_string(row.tested) +
         ", pruned " + std::to_string(row.pruned) + ", total " + std::to_string(row.total) + "\n";
  return t;
}

// "-" as the polynomial argument reads the whole of standard input.
inline std::string read_poly_arg(const std::string& arg, std::istream& in) {
  if (arg != "-") return arg;
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// Applies the requested arithmetic mode to a freshly parsed polynomial.
inline UniPoly apply_mode(UniPoly p, const std::string& req, std::vector<std::string>& diags) {
  if (req == "exact") {
    if (p.mode() == Mode::Float)
      throw std::invalid_argument(
          "decimal literals cannot be evaluated in exact mode; rewrite them as fractions or use "
          "--mode float");
    return p;
  }
  if (req == "float") return p.mode() == Mode::Float ? std::move(p) : p.to_float();
  if (p.mode() == Mode::Float)
    diags.push_back("input has decimal literals: computing in float mode");
  return p;
}

inline void require_nonzero(const UniPoly& p) {
  if (p.is_zero())
    throw std::invalid_argument("the zero polynomial is not a meaningful right-hand side");
}

// Mirrors the accept/reject logic of the single-variable test to name the
// first offending coefficient of the shifted polynomial.
inline std::string one_var_reject_reason(const UniPoly& p, double eps) {
  const auto nd = p.degree();
  if (!nd || *nd < 3) return "degree below 3: the single-variable test does not apply";
  const int n = *nd;
  const auto [s, q] = normalize_shift(p);
  (void)s;
  const double scale = std::max(1.0, q.norm_inf());
  auto vanishes = [&, &q = q](int k) {
    const Scalar c = q.coeff(k);
    return p.mode() == Mode::Exact ? c.is_zero(0.0) : c.abs() <= eps * scale;
  };
  if (!vanishes(0)) return "shifted form has nonzero x^0 coefficient";
  for (int k = 3; k < n; ++k)
    if (!vanishes(k)) return "shifted form has nonzero x^" + std::to_string(k) + " coefficient";
  return "the shifted power fails verification at this tolerance";
}

inline int cmd_quadratize(const CliContext& ctx, const std::string& raw,
                          const std::string& strategy) {
  std::vector<std::string> diags;
  UniPoly p = apply_mode(parse_poly(raw), ctx.mode, diags);
  require_nonzero(p);
  const Strategy strat = *strategy_from_name(strategy);
  QuadratizeOptions opt;
  opt.eps = ctx.tolerance;
  opt.jobs = ctx.jobs;

  Mode effective = p.mode();
  std::optional<QuadratizeOutcome> o;
  try {
    o = quadratize_with(p, strat, opt);
  } catch (const ExactRootUnavailable& e) {
    if (ctx.mode == "exact") {
      ojson result;
      result["found"] = false;
      result["reason"] = std::string(e.what()) + "; rerun with --mode float or --mode auto";
      ojson doc = make_doc("quadratize", mode_name(effective), ojson{{"poly", raw}},
                           std::move(result), diags);
      return finish(ctx, doc, 1,
                    "no quadratization in exact mode: " + std::string(e.what()) + "\n");
    }
    diags.push_back(std::string(e.what()) + "; retrying in float mode");
    o = quadratize_with(p.to_float(), strat, opt);
    effective = Mode::Float;
  }

  // In auto mode an exact run that had to skip the degree-6 construction is
  // retried in float; the float result is kept only when it lowers the order.
  if (o && strat == Strategy::Auto && ctx.mode == "auto" && effective == Mode::Exact) {
    const bool skipped_radical =
        std::any_of(o->notes.begin(), o->notes.end(), [](const std::string& n) {
          return n.find("sixth root") != std::string::npos;
        });
    if (skipped_radical) {
      QuadratizeOutcome of = quadratize(p.to_float(), opt);
      if (of.quad.order() < o->quad.order()) {
        diags.push_back("no exact sixth root of the leading coefficient: float mode lowers the "
                        "order from " +
                        std::to_string(o->quad.order()) + " to " +
                        std::to_string(of.quad.order()));
        o = std::move(of);
        effective = Mode::Float;
      }
    }
  }

  ojson input{{"poly", raw}};
  if (!o) {
    ojson result;
    result["found"] = false;
    result["reason"] = "strategy '" + strategy + "' does not apply to this input";
    ojson doc =
        make_doc("quadratize", mode_name(effective), std::move(input), std::move(result), diags);
    return finish(ctx, doc, 1,
                  "no quadratization: strategy '" + strategy + "' does not apply to this input\n");
  }

  for (const auto& n : o->notes) diags.push_back(n);
  ojson result;
  result["found"] = true;
  result["strategy"] = o->method;
  result["quadratization"] = quad_json(o->quad);
  if (o->search_stats) result["search"] = stats_json(*o->search_stats);
  ojson doc =
      make_doc("quadratize", mode_name(effective), std::move(input), std::move(result), diags);

  std::string text = "order: " + std::to_string(o->quad.order()) + "\n" +
                     "strategy: " + o->method + "\n" + quad_text(o->quad);
  if (o->search_stats) text += stats_text(*o->search_stats, "minimal within bounds");
  return finish(ctx, doc, 0, text);
}

inline int cmd_check_one_var(const CliContext& ctx, const std::string& raw) {
  std::vector<std::string> diags;
  UniPoly p = apply_mode(parse_poly(raw), ctx.mode, diags);
  require_nonzero(p);
  auto q = try_one_variable(p, ctx.tolerance);
  ojson input{{"poly", raw}};
  if (!q) {
    const std::string reason = one_var_reject_reason(p, ctx.tolerance);
    ojson result;
    result["accepted"] = false;
    result["reason"] = reason;
    ojson doc = make_doc("check-one-var", mode_name(p.mode()), std::move(input),
                         std::move(result), diags);
    return finish(ctx, doc, 1, "rejected: " + reason + "\n");
  }
  ojson result;
  result["accepted"] = true;
  result["quadratization"] = quad_json(*q);
  ojson doc =
      make_doc("check-one-var", mode_name(p.mode()), std::move(input), std::move(result), diags);
  return finish(ctx, doc, 0, "accepted: order 1\n" + quad_text(*q));
}

inline int cmd_search(const CliContext& ctx, const std::string& raw, int max_degree,
                      int max_order) {
  std::vector<std::string> diags;
  UniPoly p = apply_mode(parse_poly(raw), ctx.mode, diags);
  require_nonzero(p);
  SearchOptions sopt;
  sopt.max_degree = max_degree;
  sopt.max_order = max_order;
  sopt.eps = ctx.tolerance;
  sopt.jobs = ctx.jobs;
  SearchResult res = search_monomial(p, sopt);

  if (auto ov = try_one_variable(p, ctx.tolerance);
      ov && (!res.quad || res.quad->order() > 1)) {
    diags.push_back("a single shifted power suffices: check-one-var gives an order-1 "
                    "quadratization with z = " +
                    ov->vars()[0].str());
  }

  ojson input{{"poly", raw}};
  ojson result;
  result["found"] = res.quad.has_value();
  result["label"] = res.label;
  result["degrees"] = res.degrees;
  if (res.quad) result["quadratization"] = quad_json(*res.quad);
  result["search"] = stats_json(res.stats);
  ojson doc = make_doc("search", mode_name(p.mode()), std::move(input), std::move(result), diags);

  std::string text;
  if (res.quad) {
    text = "order: " + std::to_string(res.quad->order()) + "\nmonomial degrees:";
    for (int d : res.degrees) text += " " + std::to_string(d);
    text += "\n" + quad_text(*res.quad);
  } else {
    text = "no monomial quadratization within bounds\n";
  }
  text += stats_text(res.stats, res.label);
  return finish(ctx, doc, res.quad ? 0 : 1, text);
}

inline int cmd_verify(const CliContext& ctx, const std::string& raw, const std::string& vars_arg) {
  std::vector<std::string> diags;
  UniPoly p = parse_poly(raw);

  std::vector<UniPoly> vs;
  std::vector<std::string> pieces;
  std::string cur;
  for (char c : vars_arg) {
    if (c == ';') {
      pieces.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  pieces.push_back(cur);
  for (const auto& piece : pieces) {
    if (piece.find_first_not_of(" \t") == std::string::npos)
      throw std::invalid_argument("empty entry in --vars; expected 'poly;poly;...'");
    vs.push_back(parse_poly(piece));
  }

  bool any_float = p.mode() == Mode::Float;
  for (const auto& v : vs) any_float = any_float || v.mode() == Mode::Float;
  Mode target;
  if (ctx.mode == "exact") {
    if (any_float)
      throw std::invalid_argument(
          "decimal literals cannot be evaluated in exact mode; rewrite them as fractions or use "
          "--mode float");
    target = Mode::Exact;
  } else if (ctx.mode == "float") {
    target = Mode::Float;
  } else {
    target = any_float ? Mode::Float : Mode::Exact;
    if (any_float) diags.push_back("input has decimal literals: computing in float mode");
  }
  if (p.mode() != target) p = p.to_float();
  for (auto& v : vs)
    if (v.mode() != target) v = v.to_float();
  require_nonzero(p);

  NewVarSet nv(target, std::move(vs));
  NewVarSet reduced = reduce_new_vars(nv, ctx.tolerance);
  bool changed = reduced.size() != nv.size();
  for (size_t i = 0; !changed && i < nv.size(); ++i) changed = !(reduced[i] == nv[i]);
  if (changed) {
    std::string msg = "variable list reduced to canonical form:";
    if (reduced.empty()) msg += " (empty)";
    for (size_t i = 0; i < reduced.size(); ++i)
      msg += (i ? "; " : " ") + ("z" + std::to_string(i + 1) + " = " + reduced[i].str());
    diags.push_back(msg);
  }

  auto q = verify_quadratization(p, reduced, ctx.tolerance);
  ojson input{{"poly", raw}, {"vars", vars_arg}};
  ojson result;
  result["verified"] = q.has_value();
  if (q) result["quadratization"] = quad_json(*q);
  ojson doc = make_doc("verify", mode_name(target), std::move(input), std::move(result), diags);
  if (!q)
    return finish(ctx, doc, 1,
                  "not a quadratization: some derivative has no degree-2 form over these "
                  "variables\n");
  return finish(ctx, doc, 0, "verified: order " + std::to_string(q->order()) + "\n" + quad_text(*q));
}

inline int cmd_simulate(const CliContext& ctx, const std::string& raw, double x0, double T,
                        double h, const std::string& csv) {
  std::vector<std::string> diags;
  UniPoly p = apply_mode(parse_poly(raw), ctx.mode, diags);
  require_nonzero(p);
  QuadratizeOptions opt;
  opt.eps = ctx.tolerance;
  opt.jobs = ctx.jobs;
  QuadratizeOutcome o = quadratize(p, opt);
  for (const auto& n : o.notes) diags.push_back(n);

  SimReport r = integrate_pair(p, o.quad, x0, T, h);

  if (!csv.empty()) {
    std::ofstream f(csv);
    if (!f) throw std::invalid_argument("cannot open '" + csv + "' for writing");
    f << "t,x_re,x_im";
    f << ",xq_re,xq_im";
    for (size_t i = 0; i < o.quad.order(); ++i)
      f << ",z" << (i + 1) << "_re,z" << (i + 1) << "_im";
    f << "\n";
    for (size_t k = 0; k < r.t_grid.size(); ++k) {
      f << double_to_string(r.t_grid[k]) << "," << double_to_string(r.x_orig[k].real()) << ","
        << double_to_string(r.x_orig[k].imag());
      for (const auto& c : r.quad_states[k])
        f << "," << double_to_string(c.real()) << "," << double_to_string(c.imag());
      f << "\n";
    }
    diags.push_back("trajectory written to " + csv);
  }

  ojson input{{"poly", raw}, {"x0", x0}, {"T", T}, {"h", h}};
  ojson result;
  result["order"] = o.quad.order();
  result["strategy"] = o.method;
  result["samples"] = r.t_grid.size();
  result["max_x_deviation"] = r.max_x_deviation;
  result["max_invariant_drift"] = r.max_invariant_drift;
  result["blew_up"] = r.blew_up;
  result["blow_up_time"] = r.blew_up ? ojson(r.blow_up_time) : ojson(nullptr);
  ojson doc =
      make_doc("simulate", mode_name(p.mode()), std::move(input), std::move(result), diags);

  std::string text = "order: " + std::to_string(o.quad.order()) + " (strategy: " + o.method +
                     ")\nsamples: " + std::to_string(r.t_grid.size()) +
                     "\nmax deviation between the two x trajectories: " +
                     double_to_string(r.max_x_deviation) +
                     "\nmax drift of the z variables off the variety: " +
                     double_to_string(r.max_invariant_drift) + "\n";
  if (r.blew_up)
    text += "finite-time blow-up detected near t = " + double_to_string(r.blow_up_time) + "\n";
  return finish(ctx, doc, 0, text);
}

inline int cmd_eliminate(const CliContext& ctx, int n, bool allow_large) {
  std::vector<std::string> diags;
  std::vector<MultiPoly> conds = single_var_feasibility_conditions(n, allow_large);
  ojson input{{"n", n}};
  ojson result;
  result["n"] = n;
  ojson arr = ojson::array();
  for (const auto& c : conds) arr.push_back(c.str());
  result["conditions"] = std::move(arr);
  ojson doc = make_doc("eliminate", "exact", std::move(input), std::move(result), diags);

  std::string text = "coefficient conditions for a single shifted-power quadratization (monic "
                     "degree " +
                     std::to_string(n) + ", subleading coefficient removed by the shift):\n";
  for (const auto& c : conds) text += "  " + c.str() + "\n";
  return finish(ctx, doc, 0, text);
}

inline int cmd_matrices(const CliContext& ctx, int n, bool allow_large) {
  std::vector<std::string> diags;
  SingleVarMatrices m = build_single_var_matrices(n, allow_large);
  const std::string tx = "xdot matrix (n=" + std::to_string(n) + ")";
  const std::string tz = "zdot matrix (n=" + std::to_string(n) + ")";

  auto matrix_json = [](const SymbolicMatrix& sm) {
    ojson j;
    j["rows"] = sm.row_labels;
    j["columns"] = sm.col_labels;
    ojson rows = ojson::array();
    for (const auto& row : sm.entries) {
      ojson r = ojson::array();
      for (const auto& e : row) r.push_back(e.str());
      rows.push_back(std::move(r));
    }
    j["entries"] = std::move(rows);
    return j;
  };

  ojson input{{"n", n}};
  ojson result;
  result["n"] = n;
  result["xdot"] = matrix_json(m.xdot);
  result["zdot"] = matrix_json(m.zdot);
  ojson doc = make_doc("matrices", "exact", std::move(input), std::move(result), diags);

  const std::string text = render_matrix(m.xdot, tx) + "\n" + render_matrix(m.zdot, tz);
  return finish(ctx, doc, 0, text);
}

}  // namespace detail

// Parses the argument vector (program name excluded) and runs one subcommand,
// writing human or JSON output to `out` and failures to `err`. Returns the
// process exit code: 0 success, 1 no object found, 2 usage or parse error,
// 3 a float comparison fell inside the tolerance ambiguity window.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err,
                   std::istream& in = std::cin) {
  CLI::App app{"quadratization toolkit for scalar polynomial ODEs x' = p(x)"};
  app.name("quadratize");

  std::string format = "text", mode = "auto";
  double tolerance = kDefaultTolerance;
  unsigned jobs = 1;
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--tolerance", tolerance, "float-mode comparison tolerance");
  app.add_option("--mode", mode, "coefficient arithmetic")
      ->check(CLI::IsMember({"exact", "float", "auto"}));
  app.add_option("--jobs", jobs, "worker threads for the monomial search");
  app.require_subcommand(1);

  std::string poly, strategy = "auto", vars_arg, csv;
  int max_degree = -1, max_order = 6, n = 5;
  double x0 = 0.1, T = 1.0, h = 1e-3;
  bool allow_large = false;

  auto add_poly = [](CLI::App* sub, std::string& target) {
    sub->add_option("poly", target, "polynomial in x ('-' reads standard input)")->required();
  };

  CLI::App* c_quad = app.add_subcommand("quadratize", "quadratize x' = p(x)");
  add_poly(c_quad, poly);
  c_quad->add_option("--strategy", strategy, "force one construction")
      ->check(CLI::IsMember(
          {"auto", "one-var", "low-degree", "degree6", "degree6-monomial", "search"}));

  CLI::App* c_check =
      app.add_subcommand("check-one-var", "test the single shifted-power construction");
  add_poly(c_check, poly);

  CLI::App* c_search = app.add_subcommand("search", "search for a minimal monomial quadratization");
  add_poly(c_search, poly);
  c_search->add_option("--max-degree", max_degree,
                       "largest candidate monomial degree (default 2(n-1))");
  c_search->add_option("--max-order", max_order,
                       "largest variable-set size tried (default 6, negative uncaps)");

  CLI::App* c_verify = app.add_subcommand("verify", "verify a proposed set of new variables");
  add_poly(c_verify, poly);
  c_verify->add_option("--vars", vars_arg, "semicolon-separated new-variable polynomials")
      ->required();

  CLI::App* c_sim =
      app.add_subcommand("simulate", "integrate the scalar ODE against its quadratized system");
  add_poly(c_sim, poly);
  c_sim->set_help_flag("--help", "print this help message and exit");  // frees -h for the step
  c_sim->add_option("--x0", x0, "initial value (default 0.1)");
  c_sim->add_option("--T", T, "time horizon (default 1)");
  c_sim->add_option("--h", h, "step size (default 1e-3)");
  c_sim->add_option("--csv", csv, "write the sampled trajectories to this file");

  CLI::App* c_elim = app.add_subcommand(
      "eliminate", "coefficient conditions for a single shifted-power quadratization");
  c_elim->add_option("--n", n, "degree of the generic monic polynomial (default 5)");
  c_elim->add_flag("--allow-large", allow_large, "lift the size guard (slow beyond degree 8)");

  CLI::App* c_mat = app.add_subcommand(
      "matrices", "print the two generic linear systems behind the single-variable test");
  c_mat->add_option("--n", n, "degree of the generic monic polynomial (default 5)");
  c_mat->add_flag("--allow-large", allow_large, "lift the size guard");

  for (auto* s : {c_quad, c_check, c_search, c_verify, c_sim, c_elim, c_mat}) s->fallthrough();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  detail::CliContext ctx{format, mode, tolerance, jobs, out, err};
  try {
    if (*c_quad) return detail::cmd_quadratize(ctx, detail::read_poly_arg(poly, in), strategy);
    if (*c_check) return detail::cmd_check_one_var(ctx, detail::read_poly_arg(poly, in));
    if (*c_search)
      return detail::cmd_search(ctx, detail::read_poly_arg(poly, in), max_degree, max_order);
    if (*c_verify) return detail::cmd_verify(ctx, detail::read_poly_arg(poly, in), vars_arg);
    if (*c_sim) return detail::cmd_simulate(ctx, detail::read_poly_arg(poly, in), x0, T, h, csv);
    if (*c_elim) return detail::cmd_eliminate(ctx, n, allow_large);
    if (*c_mat) return detail::cmd_matrices(ctx, n, allow_large);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const ToleranceIndeterminate& e) {
    err << "tolerance indeterminacy: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace quadratize
