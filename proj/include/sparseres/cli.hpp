#pragma once

// Command-line driver: `sparseres mv|matrix|solve <system file> [options]`.
// Output is a list of "KEY: value" lines; TIME_* lines are the only ones
// that change between runs with the same seed.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "sparseres/eigensolver.hpp"
#include "sparseres/error.hpp"
#include "sparseres/matrix_io.hpp"
#include "sparseres/resultant_matrix.hpp"
#include "sparseres/subdivision.hpp"
#include "sparseres/system_file.hpp"

namespace sparseres {

enum ExitCode { kOk = 0, kParseError = 2, kConstructionError = 3, kNumericError = 4 };

struct CliOptions {
  std::string file;
  bool u = false;
  std::optional<std::size_t> hide;  // 1-based
  std::string algo = "auto";
  bool whole_matrix = false;
  double cond = 1e8;
  double m11_cond = 1e12;
  std::optional<std::uint64_t> seed;
  std::string matrix_in, matrix_out;
  double accept = 1e-4;
  int tries = 3;
};

namespace detail {

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

/// `zero` absorbs signed zeros and rounding noise in either part.
inline std::string fmt_complex(Complex z, const char* f = "%.10g", double zero = 5e-11) {
  auto clean = [&](double v) { return std::abs(v) < zero ? 0.0 : v; };
  const double re = clean(z.real()), im = clean(z.imag());
  if (im == 0) return fmt(f, re);
  return fmt(f, re) + (im < 0 ? "-" : "+") + fmt(f, std::abs(im)) + "i";
}

inline std::string join(const std::vector<std::int64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

class Timer {
 public:
  double lap() {
    auto now = std::chrono::steady_clock::now();
    double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

struct Prepared {
  std::vector<SparsePolynomial> polys;  // matrix input: n+1 polynomials
  std::optional<OverconstrainedSystem> oc;
  std::uint64_t seed = 1;
};

/// Square systems are overconstrained by the flags, else by the file's HIDE
/// line, else in u mode; n+1 polynomials are used as given.
inline Prepared prepare(const SystemFile& sys, const CliOptions& o, std::ostream& out) {
  Prepared p;
  p.seed = o.seed.value_or(sys.seed.value_or(1));
  const std::size_t n = sys.n;
  for (const auto& f : sys.polys)
    if (f.dim() != n) throw InputError("polynomial in the wrong number of variables");
  const bool square = sys.polys.size() == n;
  bool use_u = o.u, use_hide = o.hide.has_value();
  if (use_u && use_hide) throw InputError("--u and --hide are exclusive");
  if (!use_u && !use_hide && square) {
    use_hide = sys.hide.has_value();
    use_u = !use_hide;
  }
  if (use_u || use_hide) {
    if (!square) throw InputError("overconstraining needs n polynomials in n variables");
    if (use_u) {
      p.oc = overconstrain_u(sys.polys, p.seed, sys.ucoef);
      out << "MODE: u\nUCOEF:";
      for (const auto& c : p.oc->u_coeffs) out << " " << c.str();
      out << "\n";
    } else {
      const std::size_t k = o.hide ? *o.hide : *sys.hide;
      if (k < 1 || k > n) throw InputError("hidden variable index out of range");
      p.oc = overconstrain_hidden(sys.polys, k - 1);
      out << "MODE: hidden " << k << "\n";
    }
    p.polys = p.oc->polys;
  } else {
    if (sys.polys.size() != n + 1) throw InputError("expected n+1 polynomials, or n with --u or --hide");
    p.polys = sys.polys;
    out << "MODE: given\n";
  }
  return p;
}

inline ResultantMatrix build(const Prepared& p, const SystemFile& sys, const CliOptions& o, std::ostream& out) {
  std::string algo = o.algo;
  if (algo == "auto") algo = p.oc && p.oc->mode == Mode::hidden ? "incremental" : "subdivision";
  MatrixOptions mo;
  mo.seed = p.seed;
  mo.direction = sys.direction;
  if (!o.matrix_in.empty()) {
    out << "ALGO: loaded\n";
    return load_matrix(o.matrix_in, p.polys);
  }
  out << "ALGO: " << algo << "\n";
  if (algo == "subdivision") return build_subdivision_matrix(p.polys, mo);
  if (algo == "incremental") return build_incremental_matrix(p.polys, mo);
  throw InputError("unknown algorithm '" + algo + "'");
}

inline void report_matrix(const ResultantMatrix& m, const Prepared& p, std::ostream& out) {
  out << "MATRIX_DIM: " << m.dim() << "\n";
  std::vector<std::int64_t> rows;
  for (auto r : m.def.rows_per_poly()) rows.push_back(static_cast<std::int64_t>(r));
  out << "ROWS_PER_POLY: " << join(rows) << "\n";
  out << "X0_DEGREE: " << m.x0_degree() << "\n";
  // M [x^q] = [x^b f_i(x)] at random complex points
  std::mt19937_64 rng(derive_seed(p.seed, 5000));
  std::uniform_real_distribution<double> d(0.5, 1.5), ang(0, 6.283185307179586);
  double worst = 0;
  for (int t = 0; t < 5; ++t) {
    std::vector<Complex> alpha;
    for (std::size_t i = 0; i < m.def.n; ++i) alpha.push_back(std::polar(d(rng), ang(rng)));
    worst = std::max(worst, evaluation_residual(m, p.polys, alpha, std::polar(d(rng), ang(rng))));
  }
  out << "EVAL_CHECK: " << (worst <= 1e-10 ? "ok" : "FAILED") << "\n";
}

inline void report_volumes(const Prepared& p, const SystemFile& sys, std::ostream& out) {
  if (sys.polys.size() == sys.n) out << "MV: " << mixed_volume(supports_of(sys.polys), p.seed) << "\n";
  auto dv = mv_deficient(supports_of(p.polys), p.seed);
  out << "MV_DEFICIENT: " << join(dv.per_poly) << "\n";
  out << "DEG_R: " << dv.degree << "\n";
}

inline int cmd_mv(const CliOptions& o, std::ostream& out) {
  Timer timer;
  auto sys = parse_system(o.file);
  const std::uint64_t seed = o.seed.value_or(sys.seed.value_or(1));
  out << "COMMAND: mv\nN: " << sys.n << "\nPOLYS: " << sys.polys.size() << "\n";
  if (sys.polys.size() == sys.n) {
    auto sub = mixed_subdivision(supports_of(sys.polys), seed);
    std::size_t mixed = 0;
    for (const auto& c : sub.cells) mixed += c.is_mixed;
    out << "MV: " << sub.mixed_cell_volume() << "\n";
    out << "MIXED_CELLS: " << mixed << "\n";
    std::istringstream lines(sub.dump());
    for (std::string l; std::getline(lines, l);)
      if (l.size() >= 6 && l.compare(l.size() - 6, 6, " mixed") == 0) out << "CELL: " << l << "\n";
    if (o.u || o.hide || sys.hide) {
      auto p = prepare(sys, o, out);
      auto dv = mv_deficient(supports_of(p.polys), seed);
      out << "MV_DEFICIENT: " << join(dv.per_poly) << "\nDEG_R: " << dv.degree << "\n";
    }
  } else if (sys.polys.size() == sys.n + 1) {
    auto dv = mv_deficient(supports_of(sys.polys), seed);
    out << "MV_DEFICIENT: " << join(dv.per_poly) << "\nDEG_R: " << dv.degree << "\n";
  } else {
    throw InputError("mv needs n or n+1 polynomials");
  }
  out << "TIME_MV: " << fmt("%.3f", timer.lap()) << "\n";
  return kOk;
}

inline int cmd_matrix(const CliOptions& o, std::ostream& out) {
  Timer timer;
  auto sys = parse_system(o.file);
  out << "COMMAND: matrix\nN: " << sys.n << "\nPOLYS: " << sys.polys.size() << "\n";
  auto p = prepare(sys, o, out);
  report_volumes(p, sys, out);
  auto m = build(p, sys, o, out);
  report_matrix(m, p, out);
  if (!o.matrix_out.empty()) {
    store_matrix(m.def, o.matrix_out);
    out << "STORED: " << o.matrix_out << "\n";
  }
  out << "TIME_MATRIX: " << fmt("%.3f", timer.lap()) << "\n";
  return kOk;
}

inline int cmd_solve(const CliOptions& o, std::ostream& out) {
  Timer timer;
  auto sys = parse_system(o.file);
  if (sys.polys.size() != sys.n) throw InputError("solve needs n polynomials in n variables");
  out << "COMMAND: solve\nN: " << sys.n << "\nPOLYS: " << sys.polys.size() << "\n";
  auto p = prepare(sys, o, out);
  report_volumes(p, sys, out);
  auto m = build(p, sys, o, out);
  report_matrix(m, p, out);
  if (!o.matrix_out.empty()) {
    store_matrix(m.def, o.matrix_out);
    out << "STORED: " << o.matrix_out << "\n";
  }
  const double t_matrix = timer.lap();

  SolveOptions so;
  so.cond_threshold = o.cond;
  so.m11_cond = o.m11_cond;
  so.whole_matrix = o.whole_matrix;
  so.accept = o.accept;
  so.tries = o.tries;
  so.seed = p.seed;
  auto run = run_pipeline(*p.oc, m.def, so);
  const auto& s = run.schur;
  const auto& r = run.roots;
  out << "M11_DIM: " << s.m11_dim() << "\n";
  out << "WHOLE_MATRIX: " << (s.whole_matrix ? "yes" : "no") << "\n";
  out << "SCHUR_R: " << s.r() << "\nSCHUR_D: " << s.d() << "\n";
  out << "SCHUR_TIER: " << (s.tier == Tier::refined ? "refined" : "fast") << "\n";
  out << "LEADING_COND: " << fmt("%.2e", r.leading_cond) << "\n";
  out << "TRANSFORM: " << r.transform.t[0] << " " << r.transform.t[1] << " " << r.transform.t[2] << " "
      << r.transform.t[3] << "\n";
  out << "PATH: " << (r.path == EigenPath::companion ? "companion" : "pencil") << "\n";
  out << "EIGEN_DIM: " << r.candidates.size() << "\n";
  if (r.path == EigenPath::pencil) out << "SINGULAR_PENCIL: " << (r.singular_pencil ? "yes" : "no") << "\n";
  out << "EIGEN_FINITE_REAL: " << r.finite_real << "\nEIGEN_FINITE_COMPLEX: " << r.finite_complex
      << "\nEIGEN_INFINITE: " << r.infinite << "\n";

  std::vector<const RootCandidate*> acc;
  std::size_t acc_real = 0, mult_real = 0;
  for (const auto& c : r.candidates) {
    if (c.status == RootStatus::accepted) {
      acc.push_back(&c);
      acc_real += c.real();
    }
    mult_real += c.status == RootStatus::multiple && c.real_eigenvalue;
  }
  out << "ACCEPTED: " << acc.size() << "\nACCEPTED_REAL: " << acc_real << "\n";
  out << "MULTIPLE: " << r.count(RootStatus::multiple) << "\nMULTIPLE_REAL: " << mult_real << "\n";
  out << "REJECTED: " << r.count(RootStatus::rejected) << "\n";
  double max_acc = 0, min_rej = std::numeric_limits<double>::infinity();
  for (const auto& c : r.candidates) {
    if (c.status == RootStatus::accepted) max_acc = std::max(max_acc, c.residual);
    if (c.status == RootStatus::rejected) min_rej = std::min(min_rej, c.residual);
  }
  out << "MAX_ACCEPTED_RESIDUAL: " << fmt("%.1e", max_acc) << "\n";
  out << "MIN_REJECTED_RESIDUAL: " << (std::isfinite(min_rej) ? fmt("%.1e", min_rej) : "none") << "\n";

  std::sort(acc.begin(), acc.end(), [](const RootCandidate* a, const RootCandidate* b) {
    for (std::size_t i = 0; i < a->refined.size(); ++i) {
      if (a->refined[i].real() != b->refined[i].real()) return a->refined[i].real() < b->refined[i].real();
      if (a->refined[i].imag() != b->refined[i].imag()) return a->refined[i].imag() < b->refined[i].imag();
    }
    return false;
  });
  for (const auto* c : acc) {
    out << "ROOT: " << (c->real() ? "real" : "complex") << " residual=" << fmt("%.1e", c->residual) << " x=";
    for (std::size_t i = 0; i < c->refined.size(); ++i) out << (i ? " " : "") << fmt_complex(c->refined[i]);
    out << "\n";
  }
  for (const auto& c : r.candidates) {
    if (c.status != RootStatus::multiple) continue;
    // clustered eigenvalues are only accurate to about the cluster tolerance
    out << "MULTIPLE_EIGENVALUE: " << fmt_complex(c.eigenvalue, "%.6g", 1e-5) << "\n";
  }
  out << "TIME_MATRIX: " << fmt("%.3f", t_matrix) << "\nTIME_SOLVE: " << fmt("%.3f", timer.lap()) << "\n";
  return kOk;
}

}  // namespace detail

/// Runs the command line; reports go to `out`, diagnostics to `err`.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CliOptions o;
  CLI::App app{"Sparse resultants: mixed volumes, resultant matrices and polynomial system solving", "sparseres"};
  app.require_subcommand(1);
  auto add_common = [&](CLI::App* c) {
    c->add_option("file", o.file, "system file")->required();
    c->add_option("--seed", o.seed, "random seed");
  };
  auto add_overconstrain = [&](CLI::App* c) {
    auto u = c->add_flag("--u", o.u, "add the u-polynomial x0 + sum c_j x_j");
    auto h = c->add_option("--hide", o.hide, "hide variable k (1-based)")->check(CLI::PositiveNumber);
    u->excludes(h);
    c->add_option("--algo", o.algo, "subdivision | incremental | auto")
        ->check(CLI::IsMember({"subdivision", "incremental", "auto"}));
  };
  auto* mv = app.add_subcommand("mv", "mixed volume and mixed cells");
  add_common(mv);
  mv->add_flag("--u", o.u, "also report volumes with the u-polynomial");
  mv->add_option("--hide", o.hide, "also report volumes after hiding variable k")->check(CLI::PositiveNumber);
  auto* mat = app.add_subcommand("matrix", "build a resultant matrix");
  add_common(mat);
  add_overconstrain(mat);
  mat->add_option("--store,--matrix-out", o.matrix_out, "write the matrix definition");
  mat->add_option("--load,--matrix-in", o.matrix_in, "reuse a stored matrix definition");
  auto* sol = app.add_subcommand("solve", "solve a square system");
  add_common(sol);
  add_overconstrain(sol);
  sol->add_flag("--whole-matrix", o.whole_matrix, "use A(x0) = M(x0) without a Schur complement");
  sol->add_option("--cond", o.cond, "condition threshold for solves and the leading coefficient");
  sol->add_option("--m11-cond", o.m11_cond, "condition limit for the constant block");
  sol->add_option("--matrix-in", o.matrix_in, "reuse a stored matrix definition");
  sol->add_option("--matrix-out", o.matrix_out, "write the matrix definition");
  sol->add_option("--accept", o.accept, "residual threshold for accepting a root");
  sol->add_option("--tries", o.tries, "random transforms tried by rank balancing")->check(CLI::NonNegativeNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseError;
  }
  try {
    if (mv->parsed()) return detail::cmd_mv(o, out);
    if (mat->parsed()) return detail::cmd_matrix(o, out);
    return detail::cmd_solve(o, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  } catch (const ConstructionError& e) {
    err << "construction failed: " << e.what() << "\n";
    return kConstructionError;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNumericError;
  }
}

}  // namespace sparseres
