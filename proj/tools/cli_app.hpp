#ifndef SGOP_TOOLS_CLI_APP_HPP
#define SGOP_TOOLS_CLI_APP_HPP

#include "sgop/acceptance.hpp"
#include "sgop/io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace sgop::cli {

enum ExitCode { ok = 0, failure = 1, usage = 2, assumption = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::vector<Rational> parse_list(const std::string& s) {
  std::vector<Rational> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw UsageError("empty entry in list '" + s + "'");
    try {
      out.push_back(parse_rational(item));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

inline Rational parse_q(const std::string& s) {
  try {
    return parse_rational(s);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

inline int parse_family(const std::string& s, bool allow_mixed) {
  if (allow_mixed && s == "mixed") return 0;
  if (s == "1" || s == "2" || s == "3") return s[0] - '0';
  throw UsageError("family must be 1, 2 or 3" + std::string(allow_mixed ? " or mixed" : ""));
}

// --chi c gives weights (1, c); --chis gives the full list; neither gives the L2 product.
struct ParamOptions {
  std::string chi, chis, energy;
  std::vector<std::string> boundary;

  void attach(CLI::App* app, bool extended) {
    app->add_option("--chi", chi, "first-order Sobolev weight (rational, e.g. 1/2)");
    app->add_option("--chis", chis, "all weights chi_0,...,chi_m (chi_0 = 1)");
    if (extended) {
      app->add_option("--energy-weights", energy, "energy weights chi'_0,...,chi'_{L-1}");
      app->add_option("--boundary-matrix", boundary, "boundary matrix M_l as 9 comma-separated rationals; repeat for l = 0, 1, ...");
    }
  }

  SobolevParams params() const {
    if (!chi.empty() && !chis.empty()) throw UsageError("--chi and --chis are exclusive");
    SobolevParams p;
    if (!chi.empty()) p.chi = {Rational(1), parse_q(chi)};
    if (!chis.empty()) p.chi = parse_list(chis);
    if (!energy.empty()) p.energy_weights = parse_list(energy);
    for (auto& b : boundary) {
      auto v = parse_list(b);
      if (v.size() != 9) throw UsageError("--boundary-matrix needs 9 entries");
      p.boundary_matrices.push_back({{v[0], v[1], v[2]}, {v[3], v[4], v[5]}, {v[6], v[7], v[8]}});
    }
    try {
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return p;
  }
};

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw UsageError("cannot open output file " + path);
    }
    os_ = file_ ? file_.get() : &fallback;
  }
  std::ostream& os() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

inline void write_json(std::ostream& os, const Json& j) { os << j.dump(2) << '\n'; }

inline std::filesystem::path cache_file() {
  const char* dir = std::getenv("SGOP_CACHE_DIR");
  if (!dir || !*dir) return {};
  return std::filesystem::path(dir) / "coeffs.cache";
}

inline void load_cache(std::ostream& err) {
  auto p = cache_file();
  if (p.empty() || !std::filesystem::exists(p)) return;
  std::ifstream in(p);
  try {
    CoeffTable t;
    t.load(in);
    coeffs() = std::move(t);
  } catch (const std::exception& e) {
    err << "warning: ignoring coefficient cache " << p << ": " << e.what() << '\n';
  }
}

inline void save_cache(std::ostream& err) {
  auto p = cache_file();
  if (p.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary);
  if (!out) {
    err << "warning: cannot write coefficient cache " << p << '\n';
    return;
  }
  coeffs().save(out);
}

inline bool check_orthogonal(const OPFamily& f) {
  for (std::size_t i = 0; i < f.polys.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (inner(f.params, f.polys[i], f.polys[j]) != 0) return false;
  return true;
}

inline OPFamily build_family(int k, int N, const SobolevParams& p, const std::string& method) {
  const int m = p.order();
  if (method == "legendre") return legendre(k, N);
  if (method == "gram-schmidt") return gram_schmidt(p, k, N);
  if (method == "associated") {
    if (m != 1) throw UsageError("associated family needs --chi");
    return associated_family(p.chi[1], k, N);
  }
  if (method == "tilde") {
    if (k != 1 || m != 1) throw UsageError("tilde recurrence is for --family 1 with --chi");
    return recurrence_k1_tilde(p.chi[1], N);
  }
  if (method == "recurrence" || method == "auto") {
    if (p.has_extended_terms()) {
      if (method == "recurrence") throw UsageError("recurrences use the plain Sobolev product");
      return gram_schmidt(p, k, N);
    }
    if (m == 0) return legendre(k, N);
    if (m == 1) return k == 1 ? recurrence_k1(p.chi[1], N) : recurrence_k23(p.chi[1], k, N);
    if (k == 1) {
      if (method == "recurrence") throw UsageError("the order-m recurrence covers families 2 and 3");
      return gram_schmidt(p, k, N);
    }
    return higher_recurrence(p, k, N);
  }
  throw UsageError("unknown method " + method);
}

inline std::string y_decimal(const LevelGrid& g, int i, int digits) {
  Rational c = g.y_sqrt3(i);
  if (c == 0) return "0";
  return to_decimal(HighFloat(c) * sqrt(HighFloat(3)), digits);
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Legendre and Sobolev orthogonal polynomials on the Sierpinski gasket", "sgop"};
  app.require_subcommand(1);
  app.fallthrough();
  int digits = 12;
  unsigned precision = default_precision_bits;
  app.add_option("--digits", digits, "significant digits for decimal output")->check(CLI::Range(2, 200));
  app.add_option("--precision-bits", precision, "working precision of grid solves")->check(CLI::Range(53u, 4096u));

  // coeffs
  auto* c_coeffs = app.add_subcommand("coeffs", "alpha, beta, gamma, eta tables (exact)");
  int max_j = 10;
  std::string coeffs_format = "csv", coeffs_out;
  bool coeffs_decimal = false;
  c_coeffs->add_option("--max-j", max_j, "largest index")->check(CLI::Range(0, 2000));
  c_coeffs->add_option("--format", coeffs_format)->check(CLI::IsMember({"csv", "json"}));
  c_coeffs->add_flag("--decimal", coeffs_decimal, "decimal instead of p/q");
  c_coeffs->add_option("--out", coeffs_out);

  // gram
  auto* c_gram = app.add_subcommand("gram", "Gram matrix of monomials under an inner product");
  std::string gram_family = "mixed", gram_format = "json", gram_out;
  int gram_maxdeg = 2;
  bool gram_check = false;
  ParamOptions gram_params;
  c_gram->add_option("--family", gram_family, "1, 2, 3 or mixed");
  c_gram->add_option("--maxdeg", gram_maxdeg)->check(CLI::Range(0, 60));
  c_gram->add_option("--format", gram_format)->check(CLI::IsMember({"csv", "json"}));
  c_gram->add_flag("--check", gram_check, "also report symmetry and leading principal minors");
  c_gram->add_option("--out", gram_out);
  gram_params.attach(c_gram, true);

  // ops
  auto* c_ops = app.add_subcommand("ops", "orthogonal polynomial family as JSON");
  std::string ops_family, ops_method = "auto", ops_format = "json", ops_out;
  int ops_degree = 0;
  ParamOptions ops_params;
  c_ops->add_option("--family", ops_family, "1, 2 or 3")->required();
  c_ops->add_option("--degree", ops_degree, "largest degree")->required()->check(CLI::Range(0, 40));
  c_ops->add_option("--method", ops_method)
      ->check(CLI::IsMember({"auto", "gram-schmidt", "recurrence", "tilde", "legendre", "associated"}));
  c_ops->add_option("--format", ops_format)->check(CLI::IsMember({"json", "text"}));
  c_ops->add_option("--out", ops_out);
  ops_params.attach(c_ops, true);

  // eval
  auto* c_eval = app.add_subcommand("eval",
                                    "values of s_n, p_n or P_{n,k} on Gamma_m as CSV (address,x,y,value). "
                                    "Reproduces the figure 'Plotting the Sobolev Orthogonal Polynomials'; with --chis "
                                    "and m >= 2 the figure 'Visualizing s_8^{(m)}'; with --edge the edge traces of "
                                    "'Interlacing patterns'.");
  std::string eval_family, eval_kind = "sobolev", eval_out, eval_scheme = "corrected", eval_edge;
  int eval_degree = 0, eval_level = 7, eval_solve = -1;
  ParamOptions eval_params;
  c_eval->add_option("--family", eval_family)->required();
  c_eval->add_option("--degree", eval_degree)->required()->check(CLI::Range(0, 40));
  c_eval->add_option("--kind", eval_kind)->check(CLI::IsMember({"sobolev", "legendre", "monomial"}));
  c_eval->add_option("--level", eval_level, "output level m")->check(CLI::Range(0, 11));
  c_eval->add_option("--solve-level", eval_solve, "solver level (default m+2)")->check(CLI::Range(0, 12));
  c_eval->add_option("--scheme", eval_scheme, "right-hand side of the discrete Poisson solves")
      ->check(CLI::IsMember({"corrected", "collocation"}));
  c_eval->add_option("--edge", eval_edge, "only one boundary edge: bottom, left or right (columns t,address,value)")
      ->check(CLI::IsMember({"bottom", "left", "right"}));
  c_eval->add_option("--out", eval_out);
  eval_params.attach(c_eval, false);

  // zeros
  auto* c_zeros = app.add_subcommand("zeros",
                                     "sign-change zero counts of p_n and s_n per edge. Reproduces the figure 'Number "
                                     "of zeroes'; --positions lists the sign-change intervals behind 'Interlacing "
                                     "patterns'. Bottom edge includes q1 and q2, side edges include q0 only.");
  std::string zeros_family, zeros_chi = "1", zeros_threshold = "1e-30", zeros_out, zeros_scheme = "corrected";
  int zeros_max = 8, zeros_level = 7, zeros_solve = -1;
  bool zeros_positions = false;
  c_zeros->add_option("--family", zeros_family)->required();
  c_zeros->add_option("--chi", zeros_chi);
  c_zeros->add_option("--max-degree", zeros_max)->check(CLI::Range(1, 30));
  c_zeros->add_option("--level", zeros_level)->check(CLI::Range(1, 10));
  c_zeros->add_option("--solve-level", zeros_solve)->check(CLI::Range(1, 12));
  c_zeros->add_option("--threshold", zeros_threshold, "|value| at or below this counts as zero");
  c_zeros->add_option("--scheme", zeros_scheme)->check(CLI::IsMember({"corrected", "collocation"}));
  c_zeros->add_flag("--positions", zeros_positions, "one row per sign change with its parameter interval");
  c_zeros->add_option("--out", zeros_out);

  // interp
  auto* c_interp = app.add_subcommand("interp", "interpolation matrix, determinant and condition number");
  int interp_n = 1, interp_solve = 8;
  std::string interp_nodes = "two-spine", interp_format = "json", interp_out;
  c_interp->add_option("--n", interp_n)->check(CLI::Range(0, 12));
  c_interp->add_option("--nodes", interp_nodes)->check(CLI::IsMember({"two-spine", "q1-spine", "v1"}));
  c_interp->add_option("--solve-level", interp_solve, "solver level for nodes off the spine")->check(CLI::Range(2, 12));
  c_interp->add_option("--format", interp_format)->check(CLI::IsMember({"json", "text"}));
  c_interp->add_option("--out", interp_out);

  // quad
  auto* c_quad = app.add_subcommand("quad", "quadrature rule (JSON) or composite error study (CSV)");
  int quad_n = 1, quad_mmin = -1, quad_mmax = 4, quad_over = -1;
  std::string quad_f, quad_out, quad_solver = "exact", quad_scheme = "corrected";
  bool quad_study = false;
  c_quad->add_option("--n", quad_n)->check(CLI::Range(0, 8));
  c_quad->add_flag("--study", quad_study, "composite rule error table (m, estimate, exact, abs_error, ratio)");
  c_quad->add_option("--f", quad_f, "integrand monomial as j,k (default n+1,1)");
  c_quad->add_option("--m-min", quad_mmin)->check(CLI::Range(0, 10));
  c_quad->add_option("--m-max", quad_mmax)->check(CLI::Range(0, 10));
  c_quad->add_option("--oversample", quad_over, "solver level minus m (default n+1)")->check(CLI::Range(0, 6));
  c_quad->add_option("--solver", quad_solver, "exact (rational) or float node values")->check(CLI::IsMember({"exact", "float"}));
  c_quad->add_option("--scheme", quad_scheme)->check(CLI::IsMember({"corrected", "collocation"}));
  c_quad->add_option("--out", quad_out);

  // sweep-chi
  auto* c_sweep = app.add_subcommand("sweep-chi",
                                     "distance of s_n(chi) to its chi -> infinity limit. Reproduces the figure "
                                     "'Studying s_3(.,chi)'.");
  std::string sweep_family = "3", sweep_chis = "1,10,100,1000,10000,100000", sweep_out;
  int sweep_degree = 3;
  c_sweep->add_option("--family", sweep_family);
  c_sweep->add_option("--degree", sweep_degree)->check(CLI::Range(2, 30));
  c_sweep->add_option("--chis", sweep_chis);
  c_sweep->add_option("--out", sweep_out);

  // verify
  auto* c_verify = app.add_subcommand("verify", "run the exact property suite and print a pass/fail table");
  bool verify_report = false, verify_timings = false;
  c_verify->add_flag("--with-report", verify_report, "also run the report-only zero-count study");
  c_verify->add_flag("--timings", verify_timings, "print run times (output is then not reproducible)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return usage;
  }

  set_working_precision(precision);
  load_cache(err);
  int rc = ok;
  try {
    if (*c_coeffs) {
      Output o(coeffs_out, out);
      auto show = [&](const Rational& q) { return coeffs_decimal ? to_decimal(q, digits) : to_string(q); };
      if (coeffs_format == "csv") {
        CsvWriter w(o.os());
        w.row({"j", "alpha", "beta", "gamma", "eta"});
        for (int j = 0; j <= max_j; ++j) w.row({std::to_string(j), show(alpha(j)), show(beta(j)), show(gamma(j)), show(eta(j))});
      } else {
        Json j;
        j["max_j"] = max_j;
        j["rows"] = Json::array();
        for (int i = 0; i <= max_j; ++i)
          j["rows"].push_back({{"j", i}, {"alpha", show(alpha(i))}, {"beta", show(beta(i))}, {"gamma", show(gamma(i))},
                               {"eta", show(eta(i))}, {"alpha_prime", show(alpha_prime(i))}});
        write_json(o.os(), j);
      }
    } else if (*c_gram) {
      int fam = parse_family(gram_family, true);
      SobolevParams p = gram_params.params();
      const GramMatrix& g = gram_matrix(p, fam, gram_maxdeg);
      Output o(gram_out, out);
      if (gram_format == "json") {
        Json j = to_json(g);
        if (gram_check) {
          j["symmetric"] = is_symmetric(g.entries);
          Json minors = Json::array();
          for (auto& x : leading_minors(g.entries)) minors.push_back(to_string(x));
          j["leading_minors"] = minors;
          j["positive_definite"] = is_positive_definite(g.entries);
        }
        write_json(o.os(), j);
      } else {
        CsvWriter w(o.os());
        std::vector<std::string> head{"basis"};
        for (auto& b : g.basis) head.push_back("P" + std::to_string(b.j) + "_" + std::to_string(b.k));
        w.row(head);
        for (std::size_t r = 0; r < g.basis.size(); ++r) {
          std::vector<std::string> row{head[r + 1]};
          for (auto& x : g.entries[r]) row.push_back(to_string(x));
          w.row(row);
        }
      }
    } else if (*c_ops) {
      int k = parse_family(ops_family, false);
      SobolevParams p = ops_params.params();
      OPFamily f = build_family(k, ops_degree, p, ops_method);
      bool orth = check_orthogonal(f);
      Output o(ops_out, out);
      if (ops_format == "json") {
        Json j = to_json(f);
        j["orthogonal"] = orth;
        write_json(o.os(), j);
      } else {
        for (std::size_t i = 0; i < f.polys.size(); ++i)
          o.os() << "n=" << f.first_degree + static_cast<int>(i) << "  norm^2=" << to_string(f.norms_sq[i]) << "  "
                 << f.polys[i].str() << '\n';
        o.os() << "orthogonal: " << (orth ? "yes" : "no") << '\n';
      }
    } else if (*c_eval) {
      int k = parse_family(eval_family, false);
      SobolevParams p = eval_params.params();
      int L = eval_solve < 0 ? eval_level + 2 : eval_solve;
      if (L < eval_level) throw UsageError("--solve-level must be at least --level");
      Poly f;
      if (eval_kind == "monomial") f = Poly::monomial(eval_degree, k);
      else if (eval_kind == "legendre") f = legendre(k, eval_degree).at(eval_degree);
      else f = (p.order() >= 2 && k != 1 && !p.has_extended_terms() ? higher_recurrence(p, k, eval_degree)
                                                                     : gram_schmidt(p, k, eval_degree))
                   .at(eval_degree);
      EvalOptions opt;
      opt.precision_bits = precision;
      opt.scheme = eval_scheme == "corrected" ? RhsScheme::corrected : RhsScheme::collocation;
      auto field = eval_poly_grid<HighFloat>(f, eval_level, L, opt);
      Output o(eval_out, out);
      CsvWriter w(o.os());
      const auto& g = *field.grid;
      if (!eval_edge.empty()) {
        Edge e = parse_edge(eval_edge);
        w.row({"t", "address", "value"});
        const std::int64_t N = g.resolution();
        std::int64_t s = 0;
        for (auto& [t, v] : restrict_edge(field, e)) {
          Lattice pt = e == Edge::bottom ? Lattice{s, 0} : e == Edge::left ? Lattice{0, s} : Lattice{N - s, s};
          w.row({to_decimal(t, digits), g.address(g.index(pt)).str(), to_decimal(v, digits)});
          ++s;
        }
      } else {
        w.row({"address", "x", "y", "value"});
        for (std::size_t i = 0; i < g.size(); ++i) {
          int ii = static_cast<int>(i);
          w.row({g.address(ii).str(), to_decimal(g.x(ii), digits), y_decimal(g, ii, digits), to_decimal(field.values[i], digits)});
        }
      }
    } else if (*c_zeros) {
      int k = parse_family(zeros_family, false);
      int L = zeros_solve < 0 ? zeros_level + 2 : zeros_solve;
      if (L < zeros_level) throw UsageError("--solve-level must be at least --level");
      EvalOptions opt;
      opt.precision_bits = precision;
      opt.scheme = zeros_scheme == "corrected" ? RhsScheme::corrected : RhsScheme::collocation;
      Rational chi = parse_q(zeros_chi);
      HighFloat thr(parse_q(zeros_threshold));
      Output o(zeros_out, out);
      CsvWriter w(o.os());
      if (!zeros_positions) {
        auto z = zero_study(k, chi, zeros_max, zeros_level, L, thr, opt);
        w.row({"kind", "n", "edge", "sign_changes", "zeros", "plateaus", "max_abs", "threshold"});
        for (auto& r : z.rows)
          w.row({r.kind, std::to_string(r.n), to_string(r.edge), std::to_string(r.report.sign_changes),
                 std::to_string(r.report.zeros), std::to_string(r.report.plateaus), to_decimal(r.max_abs, digits),
                 to_decimal(thr, 3)});
      } else {
        MonomialFields fields(k, zeros_max, zeros_level, L, opt);
        OPFamily p = legendre(k, zeros_max);
        OPFamily s = gram_schmidt(SobolevParams::sobolev1(chi), k, zeros_max);
        w.row({"kind", "n", "edge", "t_left", "t_right"});
        for (int n = 1; n <= zeros_max; ++n)
          for (const char* kind : {"p", "s"}) {
            auto fld = fields.eval(kind[0] == 'p' ? p.at(n) : s.at(n));
            for (Edge e : {Edge::bottom, Edge::left, Edge::right}) {
              auto pts = restrict_edge(fld, e);
              std::size_t start = e == Edge::bottom ? 0 : 1;
              int last = 0;
              Rational tl;
              for (std::size_t i = start; i < pts.size(); ++i) {
                const HighFloat& v = pts[i].second;
                if (abs(v) <= thr) continue;
                int sg = v > 0 ? 1 : -1;
                if (last != 0 && sg != last)
                  w.row({kind, std::to_string(n), to_string(e), to_string(tl), to_string(pts[i].first)});
                last = sg;
                tl = pts[i].first;
              }
            }
          }
      }
    } else if (*c_interp) {
      NodeSet ns = interp_nodes == "two-spine" ? two_spine_nodes(interp_n)
                   : interp_nodes == "q1-spine" ? q1_spine_nodes(interp_n)
                                                : v1_nodes();
      int n = interp_nodes == "v1" ? 1 : interp_n;
      auto M = interpolation_matrix(ns, n, interp_solve, precision);
      auto det = invertibility_check(M);
      Output o(interp_out, out);
      Json j;
      j["n"] = n;
      j["nodes"] = Json::array();
      for (auto& v : ns.nodes) j["nodes"].push_back(v.str());
      j["columns"] = Json::array();
      for (auto& c : M.columns) j["columns"].push_back({c.j, c.k});
      j["entries"] = Json::array();
      for (std::size_t r = 0; r < M.entries.size(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < M.entries.size(); ++c)
          row.push_back(M.exact[r][c] ? to_string(M.exact_entries[r][c]) : to_decimal(M.entries[r][c], digits));
        j["entries"].push_back(row);
      }
      j["all_exact"] = M.all_exact();
      j["determinant"] = det.exact ? to_string(det.value) : to_decimal(det.approx, digits);
      j["determinant_decimal"] = to_decimal(det.approx, digits);
      j["determinant_error_bound"] = to_decimal(det.error_bound, 3);
      j["invertible"] = det.nonzero();
      if (M.all_exact()) {
        HighFloat cn = condition_number(M.exact_entries);
        j["condition_number_inf"] = cn < 0 ? Json("inf") : Json(to_decimal(cn, 6));
      }
      if (interp_format == "json")
        write_json(o.os(), j);
      else
        o.os() << "n=" << n << " nodes=" << ns.nodes.size() << " exact=" << (M.all_exact() ? "yes" : "no")
               << " det=" << j["determinant"].get<std::string>() << " invertible=" << (det.nonzero() ? "yes" : "no") << '\n';
    } else if (*c_quad) {
      Output o(quad_out, out);
      if (!quad_study) {
        write_json(o.os(), to_json(quadrature_weights(quad_n)));
      } else {
        int fj = quad_n + 1, fk = 1;
        if (!quad_f.empty()) {
          auto v = parse_list(quad_f);
          if (v.size() != 2 || denominator_of(v[0]) != 1 || denominator_of(v[1]) != 1) throw UsageError("--f expects j,k");
          fj = v[0].convert_to<int>();
          fk = v[1].convert_to<int>();
          if (fj < 0 || fk < 1 || fk > 3) throw UsageError("--f expects j >= 0 and k in 1..3");
        }
        int over = quad_over < 0 ? quad_n + 1 : quad_over;
        int mmin = quad_mmin < 0 ? quad_n : quad_mmin;
        EvalOptions opt;
        opt.precision_bits = precision;
        opt.scheme = quad_scheme == "corrected" ? RhsScheme::corrected : RhsScheme::collocation;
        CsvWriter w(o.os());
        w.row({"m", "estimate", "exact", "abs_error", "ratio"});
        Poly f = Poly::monomial(fj, fk);
        if (quad_solver == "exact") {
          for (auto& r : quadrature_error_study<Rational>(quad_n, f, mmin, quad_mmax, over, opt))
            w.row({std::to_string(r.m), to_decimal(r.estimate, digits), to_string(r.exact), to_decimal(r.abs_error, digits),
                   r.ratio ? to_decimal(*r.ratio, digits) : ""});
        } else {
          for (auto& r : quadrature_error_study<HighFloat>(quad_n, f, mmin, quad_mmax, over, opt))
            w.row({std::to_string(r.m), to_decimal(r.estimate, digits), to_string(r.exact), to_decimal(r.abs_error, digits),
                   r.ratio ? to_decimal(*r.ratio, digits) : ""});
        }
      }
    } else if (*c_sweep) {
      int k = parse_family(sweep_family, false);
      auto rep = chi_asymptotics(k, sweep_degree, parse_list(sweep_chis));
      Output o(sweep_out, out);
      CsvWriter w(o.os());
      w.row({"chi", "err", "limit_err", "ratio", "chi_b_tilde", "b_tilde_limit"});
      for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        auto& r = rep.rows[i];
        std::string ratio;
        if (i > 0 && r.limit_err_sq != 0) ratio = to_decimal(sqrt(HighFloat(rep.rows[i - 1].limit_err_sq / r.limit_err_sq)), digits);
        w.row({to_string(r.chi), to_decimal(sqrt(HighFloat(r.err_sq)), digits), to_decimal(sqrt(HighFloat(r.limit_err_sq)), digits),
               ratio, to_decimal(r.chi_b_tilde, digits), to_decimal(rep.b_tilde_limit, digits)});
      }
    } else if (*c_verify) {
      auto criteria = acceptance_criteria(verify_report);
      int failed = 0;
      for (std::size_t i = 0; i < criteria.size(); ++i) {
        CriterionResult r = run_criterion(criteria[i], static_cast<int>(i) + 1);
        if (r.gated && !r.pass) ++failed;
        out << (!r.gated ? "REPORT" : r.pass ? "PASS  " : "FAIL  ") << ' ' << (r.id < 10 ? " " : "") << r.id << "  "
            << r.title;
        if (verify_timings) out << "  [" << to_decimal(r.seconds, 3) << " s]";
        out << "\n        " << r.detail << '\n';
      }
      out << (failed == 0 ? "all gated criteria pass" : std::to_string(failed) + " gated criteria failed") << '\n';
      rc = failed == 0 ? ok : assumption;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  } catch (const AssumptionViolated& e) {
    err << "assumption violated: " << e.what() << '\n';
    return assumption;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return failure;
  }
  save_cache(err);
  return rc;
}

}  // namespace sgop::cli

#endif
