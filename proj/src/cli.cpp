#include "rnewton/cli.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

#include "rnewton/deflate.hpp"
#include "rnewton/eig.hpp"
#include "rnewton/error.hpp"
#include "rnewton/factor.hpp"
#include "rnewton/gcd.hpp"
#include "rnewton/io.hpp"
#include "rnewton/linear_solve.hpp"
#include "rnewton/poly_system.hpp"

namespace rnewton {

namespace {

struct Shared {
  std::optional<std::size_t> rank;
  std::optional<double> theta;
  std::size_t max_steps = 50;
  std::uint64_t seed = 1;
  bool trace = false;
  std::string out_file;
};

void add_shared(CLI::App* cmd, Shared& s, bool with_rank = true) {
  if (with_rank) {
    auto* r = cmd->add_option("--rank", s.rank, "projection rank");
    auto* t = cmd->add_option("--theta", s.theta, "singular-value threshold for the rank");
    r->excludes(t);
  }
  cmd->add_option("--max-steps", s.max_steps, "iteration limit")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", s.seed, "random seed");
  cmd->add_flag("--trace", s.trace, "print the iteration trace");
  cmd->add_option("--out", s.out_file, "also write the result block to FILE");
}

// Key-value result block.
class Block {
 public:
  void put(const std::string& key, const std::string& value) { text_ += key + "=" + value + "\n"; }
  void put(const std::string& key, double value) { put(key, format_real(value)); }
  void put(const std::string& key, std::size_t value) { put(key, std::to_string(value)); }
  void put(const std::string& key, Complex value) { put(key, format_complex(value)); }
  void vector(const std::string& key, const Vector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) put(key + "[" + std::to_string(i) + "]", v(i));
  }
  void matrix(const std::string& key, const Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        put(key + "[" + std::to_string(i) + "][" + std::to_string(j) + "]", m(i, j));
      }
    }
  }
  void trace_summary(const IterationTrace& t) {
    put("status", to_string(t.status));
    put("steps", t.steps());
    put("residual", t.final_residual());
    put("rank", t.rank);
    put("condition", t.condition);
    put("relative_condition", t.relative_condition);
    put("gap", t.gap);
    put("rank_gap_warning", std::string(t.rank_gap_warning ? "1" : "0"));
  }
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

// Identifiers in order of first appearance; a lone 'i' is the imaginary unit.
std::vector<std::string> infer_variables(const std::vector<std::string>& texts) {
  std::vector<std::string> vars;
  for (const std::string& t : texts) {
    for (std::size_t i = 0; i < t.size();) {
      if (std::isalpha(static_cast<unsigned char>(t[i])) || t[i] == '_') {
        std::size_t j = i;
        while (j < t.size() && (std::isalnum(static_cast<unsigned char>(t[j])) || t[j] == '_')) ++j;
        const std::string name = t.substr(i, j - i);
        const bool number_suffix = i > 0 && std::isdigit(static_cast<unsigned char>(t[i - 1]));
        if (name != "i" && !number_suffix && std::find(vars.begin(), vars.end(), name) == vars.end()) {
          vars.push_back(name);
        }
        i = j;
      } else {
        ++i;
      }
    }
  }
  return vars;
}

std::vector<std::string> split_variables(const std::string& text) {
  std::vector<std::string> vars;
  std::string cur;
  for (char c : text + ",") {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) vars.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  return vars;
}

// "@path" reads the polynomial from a file, skipping '#' lines.
std::string poly_text(const std::string& arg) {
  if (arg.empty() || arg[0] != '@') return arg;
  std::istringstream in(read_text_file(arg.substr(1)));
  std::string line, text;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    text += line + " ";
  }
  return text;
}

int finish(const Block& b, const Shared& s, std::ostream& out, bool converged) {
  out << b.text();
  if (!s.out_file.empty()) {
    std::ofstream f(s.out_file);
    if (!f) throw ParseError("cannot write " + s.out_file);
    f << b.text();
  }
  return converged ? cli_ok : cli_numerical_error;
}

std::size_t theta_rank(const Matrix& j, double theta) { return numerical_rank(svd(j).sigma, theta); }

int cmd_solve(const Shared& s, const std::string& system, const std::string& x0_text, std::ostream& out) {
  const PolySystem sys = read_system_file(system);
  const Mapping f = poly_system_jacobian(sys);
  const Vector x0 = parse_vector(x0_text);
  if (x0.size() != static_cast<Eigen::Index>(sys.variables.size())) {
    throw DimensionError("x0 has " + std::to_string(x0.size()) + " entries for " +
                         std::to_string(sys.variables.size()) + " variables");
  }
  NewtonOptions opts;
  if (s.rank) {
    opts.rank = *s.rank;
  } else if (s.theta) {
    opts.rank = theta_rank(f.jacobian_at(x0), *s.theta);
  } else {
    opts.rank = std::min(f.domain.total_dim(), f.codomain.total_dim());
  }
  opts.max_steps = s.max_steps;
  if (s.trace) opts.trace = &out;
  const IterationTrace t = rank_r_newton(f, x0, opts);
  Block b;
  b.trace_summary(t);
  b.vector("x", t.final_point);
  return finish(b, s, out, t.converged());
}

int cmd_linsolve(const Shared& s, const std::string& matrix, const std::string& rhs, const std::string& x0_text,
                 std::ostream& out) {
  const Matrix a = read_matrix_file(matrix);
  const Vector b = parse_vector(rhs);
  const Vector x0 = x0_text.empty() ? Vector() : parse_vector(x0_text);
  RankSpec spec = s.rank ? RankSpec::exact(*s.rank) : RankSpec::tolerance(s.theta.value_or(1e-10));
  const AffineSolution sol = general_solve(a, b, spec, x0);
  Block blk;
  blk.put("status", std::string("solved"));
  blk.put("rank", sol.rank_used);
  blk.put("condition", sol.condition);
  blk.put("residual", sol.residual);
  blk.put("gap", sol.gap);
  blk.vector("x", sol.particular);
  blk.put("kernel_dim", static_cast<std::size_t>(sol.kernel_basis.cols()));
  for (Eigen::Index j = 0; j < sol.kernel_basis.cols(); ++j) {
    blk.vector("kernel[" + std::to_string(j) + "]", sol.kernel_basis.col(j));
  }
  return finish(blk, s, out, true);
}

int cmd_gcd(const Shared& s, const std::string& p_arg, const std::string& q_arg, const std::string& vars_text,
            std::ostream& out) {
  const std::string p_text = poly_text(p_arg);
  const std::string q_text = poly_text(q_arg);
  const std::vector<std::string> vars =
      vars_text.empty() ? infer_variables({p_text, q_text}) : split_variables(vars_text);
  if (vars.size() != 1) throw DimensionError("gcd expects univariate polynomials; use --vars to name the variable");
  const SparsePoly p = parse_poly(p_text, vars);
  const SparsePoly q = parse_poly(q_text, vars);
  GcdOptions opts;
  opts.max_steps = s.max_steps;
  if (s.trace) opts.trace = &out;
  // --rank names the GCD degree here; --theta is the rank threshold for estimating it.
  const GcdResult r = numerical_gcd(p, q, s.rank, s.theta.value_or(1e-8), opts);
  Block b;
  b.trace_summary(r.trace);
  b.put("degree", static_cast<std::size_t>(r.triple.u.degree()));
  b.put("u", format_poly(r.triple.u));
  b.put("v", format_poly(r.triple.v));
  b.put("w", format_poly(r.triple.w));
  b.put("gcd_condition", r.triple.condition);
  b.put("gcd_residual", r.triple.residual);
  return finish(b, s, out, r.trace.converged());
}

int cmd_factor(const Shared& s, const std::string& p_arg, const std::vector<std::string>& factors,
               const std::vector<int>& exponents, const std::string& u0_text, const std::string& vars_text,
               std::ostream& out) {
  if (factors.size() != exponents.size()) {
    throw DimensionError(std::to_string(factors.size()) + " factors but " + std::to_string(exponents.size()) +
                         " exponents");
  }
  const std::string p_text = poly_text(p_arg);
  std::vector<std::string> texts{p_text};
  texts.insert(texts.end(), factors.begin(), factors.end());
  const std::vector<std::string> vars = vars_text.empty() ? infer_variables(texts) : split_variables(vars_text);
  const SparsePoly p = parse_poly(p_text, vars);
  FactorStructure st;
  st.exponents = exponents;
  FactorArray init;
  init.u0 = u0_text.empty() ? Complex(1.0) : parse_complex(u0_text);
  for (const std::string& t : factors) {
    init.factors.push_back(parse_poly(t, vars));
    st.hosting.push_back(MonomialSupport::of(init.factors.back()));
  }
  FactorOptions opts;
  opts.max_steps = s.max_steps;
  if (s.trace) opts.trace = &out;
  const FactorResult r = factor_refine(p, st, init, opts);
  Block b;
  b.trace_summary(r.trace);
  b.put("u0", r.array.u0);
  for (std::size_t j = 0; j < r.array.factors.size(); ++j) {
    b.put("u[" + std::to_string(j + 1) + "]", format_poly(r.array.factors[j]));
  }
  b.put("factor_residual", r.array.residual);
  return finish(b, s, out, r.trace.converged());
}

int cmd_eig(const Shared& s, const std::string& matrix, const std::string& lambda_text, std::size_t m,
            std::size_t k, std::ostream& out) {
  const Matrix a = read_matrix_file(matrix);
  if (!s.theta) throw ParseError("eig needs --theta for the kernel of the initial equation");
  EigOptions opts;
  opts.max_steps = s.max_steps;
  if (s.trace) opts.trace = &out;
  const EigResult r = defective_eig(a, parse_complex(lambda_text), {m, k}, *s.theta, s.seed, opts);
  Block b;
  b.trace_summary(r.trace);
  b.put("lambda", r.lambda);
  b.put("normalized_residual", r.residual);
  b.matrix("x", r.x);
  return finish(b, s, out, r.trace.converged());
}

int cmd_deflate(const Shared& s, const std::string& system, const std::string& x0_text,
                const std::vector<std::size_t>& ranks, std::size_t dim, std::size_t max_depth, std::ostream& out) {
  const PolySystem sys = read_system_file(system);
  const Mapping f = poly_system_jacobian(sys);
  DeflationOptions opts;
  opts.ranks = ranks;
  opts.dim = dim;
  opts.max_depth = max_depth;
  opts.seed = s.seed;
  opts.max_steps = s.max_steps;
  if (s.theta) opts.rank_theta = *s.theta;
  if (s.trace) opts.trace = &out;
  const DeflationResult r = depth_deflation_solve(f, parse_vector(x0_text), opts);
  Block b;
  b.trace_summary(r.trace);
  b.put("levels", r.stages.size());
  for (const DeflationStage& st : r.stages) b.put("level[" + std::to_string(st.level) + "].rank", st.rank_used);
  b.put("nullity", r.nullity);
  b.vector("x", r.x);
  return finish(b, s, out, r.trace.converged());
}

void report(std::ostream& err, const char* category, const std::string& message) {
  err << "error=" << category << "\nmessage=" << message << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rank-r Newton solvers for singular and nonisolated problems", "rnewton"};
  app.require_subcommand(1);
  Shared s;

  auto* solve = app.add_subcommand("solve", "rank-r Newton on a polynomial system");
  std::string system, x0;
  solve->add_option("--system", system, "system file")->required();
  solve->add_option("--x0", x0, "initial point, comma separated")->required();
  add_shared(solve, s);

  auto* lin = app.add_subcommand("linsolve", "least-squares solution nearest x0 of a rank-deficient system");
  std::string matrix, rhs, lin_x0;
  lin->add_option("--matrix", matrix, "matrix file, one row per line")->required();
  lin->add_option("--rhs", rhs, "right-hand side")->required();
  lin->add_option("--x0", lin_x0, "reference point (default 0)");
  add_shared(lin, s);

  auto* gcd = app.add_subcommand("gcd", "numerical GCD of two univariate polynomials");
  std::string p, q, vars;
  gcd->add_option("p", p, "polynomial or @file")->required();
  gcd->add_option("q", q, "polynomial or @file")->required();
  gcd->add_option("--vars", vars, "variable name");
  add_shared(gcd, s);

  auto* fac = app.add_subcommand("factor", "refine a factorization u0 * u1^l1 * ... * uk^lk");
  std::string poly, u0;
  std::vector<std::string> factors;
  std::vector<int> exponents;
  fac->add_option("p", poly, "polynomial or @file")->required();
  fac->add_option("--factor", factors, "initial factor, repeatable")->required();
  fac->add_option("--exponents", exponents, "multiplicities")->required()->delimiter(',');
  fac->add_option("--u0", u0, "initial scalar (default 1)");
  fac->add_option("--vars", vars, "variables, comma separated");
  add_shared(fac, s, false);

  auto* eig = app.add_subcommand("eig", "defective eigenvalue with multiplicity support m x k");
  std::string lambda0;
  std::size_t m = 1, k = 1;
  eig->add_option("--matrix", matrix, "matrix file")->required();
  eig->add_option("--lambda0", lambda0, "initial eigenvalue")->required();
  eig->add_option("--m", m, "geometric multiplicity")->check(CLI::PositiveNumber);
  eig->add_option("--k", k, "smallest Jordan block size")->check(CLI::PositiveNumber);
  eig->add_option("--theta", s.theta, "kernel threshold")->required();
  eig->add_option("--max-steps", s.max_steps, "iteration limit")->check(CLI::PositiveNumber);
  eig->add_option("--seed", s.seed, "random seed");
  eig->add_flag("--trace", s.trace, "print the iteration trace");
  eig->add_option("--out", s.out_file, "also write the result block to FILE");

  auto* defl = app.add_subcommand("deflate", "depth deflation of an ultrasingular zero");
  std::vector<std::size_t> ranks;
  std::size_t dim = 0, max_depth = 3;
  defl->add_option("--system", system, "system file")->required();
  defl->add_option("--x0", x0, "initial point")->required();
  defl->add_option("--rank", ranks, "Jacobian rank per level")->delimiter(',');
  defl->add_option("--theta", s.theta, "relative rank threshold (default 1e-8)");
  defl->add_option("--dim", dim, "dimension of the solution set");
  defl->add_option("--max-depth", max_depth, "deflation levels allowed")->check(CLI::PositiveNumber);
  defl->add_option("--max-steps", s.max_steps, "iteration limit")->check(CLI::PositiveNumber);
  defl->add_option("--seed", s.seed, "random seed");
  defl->add_flag("--trace", s.trace, "print the iteration trace");
  defl->add_option("--out", s.out_file, "also write the result block to FILE");

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    report(err, "usage", e.what());
    return cli_parse_error;
  }

  try {
    if (*solve) return cmd_solve(s, system, x0, out);
    if (*lin) return cmd_linsolve(s, matrix, rhs, lin_x0, out);
    if (*gcd) return cmd_gcd(s, p, q, vars, out);
    if (*fac) return cmd_factor(s, poly, factors, exponents, u0, vars, out);
    if (*eig) return cmd_eig(s, matrix, lambda0, m, k, out);
    return cmd_deflate(s, system, x0, ranks, dim, max_depth, out);
  } catch (const ParseError& e) {
    report(err, "parse", e.what());
    return cli_parse_error;
  } catch (const DimensionError& e) {
    report(err, "dimension", e.what());
    return cli_parse_error;
  } catch (const RankDeficiencyError& e) {
    report(err, "rank-deficiency", e.what());
  } catch (const DivergenceError& e) {
    report(err, "divergence", e.what());
  } catch (const StructureError& e) {
    report(err, "structure", e.what());
  } catch (const DeflationError& e) {
    report(err, "deflation", e.what());
    for (const std::string& d : e.diagnostics()) err << "diagnostic=" << d << "\n";
  } catch (const NumericalError& e) {
    report(err, "numerical", e.what());
  }
  return cli_numerical_error;
}

}  // namespace rnewton
