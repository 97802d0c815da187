#include "runner.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <ostream>
#include <set>

#include "export_io.hpp"
#include "moprl/moprl.hpp"

namespace moprl::cli {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::string backend_name(const Config& cfg) {
  return cfg.backend == Backend::Rational ? "rational" : "float";
}

struct CheckRecord {
  std::string name;
  std::string residual;
  double threshold = 0;
  bool pass = false;
  double seconds = 0;
};

double default_threshold(const std::string& check, Backend backend) {
  if (backend == Backend::Rational) return 0;  // exact zero required
  if (check == "hankel") return 1e-30;
  if (check == "biorth") return 1e-20;
  if (check == "eigen") return 1e-20;
  if (check == "cd-classical") return 1e-15;
  if (check == "cd-alternative") return 1e-15;
  if (check == "j-factors") return 1e-20;
  if (check == "second-kind") return 1e-25;  // slack past the reported tail bound
  return 0;
}

double threshold_for(const Config& cfg, const std::string& check) {
  double t = default_threshold(check, cfg.backend);
  if (cfg.tol_global) t = *cfg.tol_global;
  auto it = cfg.tol_overrides.find(check);
  if (it != cfg.tol_overrides.end()) t = it->second;
  return t;
}

template <class T>
ProblemSetup<T> make_setup(const Config& cfg) {
  auto build = [](const std::vector<WeightCfg>& ws) {
    std::vector<Weight<T>> out;
    for (const auto& w : ws) {
      if (w.kind == "monomial")
        out.push_back(Weight<T>::monomial(w.param));
      else if (w.kind == "exponential")
        out.push_back(Weight<T>::exponential(w.param));
      else
        out.push_back(Weight<T>::binomial(w.param));
    }
    return out;
  };
  return ProblemSetup<T>(MeasureSpec<T>::interval(cfg.lo, cfg.hi), build(cfg.weights1),
                         build(cfg.weights2), Composition(cfg.n1), Composition(cfg.n2));
}

long exponent_lcm(const Config& cfg) {
  long l = 1;
  auto fold = [&](const std::vector<WeightCfg>& ws) {
    for (const auto& w : ws)
      if (w.kind == "monomial") {
        const long d = denominator(w.param).convert_to<long>();
        l = std::lcm(l, d);
        if (l > 64) throw ConfigError("weight exponent denominators too large for a sample grid");
      }
  };
  fold(cfg.weights1);
  fold(cfg.weights2);
  return l;
}

// Interior sample points: perfect L-th powers of small rationals, so
// fractional-power weights evaluate exactly on the rational backend (for
// the unit interval; custom supports may need explicit samples).
std::vector<Rational> default_samples(const Config& cfg, bool second_set) {
  const long L = exponent_lcm(cfg);
  const std::vector<Rational> base =
      second_set ? std::vector<Rational>{{3, 5}, {3, 4}, {1, 5}, {5, 6}, {4, 7}}
                 : std::vector<Rational>{{1, 2}, {1, 3}, {2, 3}, {1, 4}, {2, 5}};
  std::vector<Rational> out;
  for (const auto& t : base) {
    Rational p(1);
    for (long i = 0; i < L; ++i) p *= t;
    out.push_back(cfg.lo + (cfg.hi - cfg.lo) * p);
  }
  return out;
}

std::vector<Rational> default_z(const Config& cfg) {
  return {Rational(10), Rational(-10), cfg.lo - 5};
}

std::vector<std::string> requested_checks(const Config& cfg) {
  return cfg.checks.empty() ? kAllChecks : cfg.checks;
}

bool wants_cd(const std::vector<std::string>& checks) {
  for (const auto& c : checks)
    if (c == "cd-classical" || c == "cd-alternative") return true;
  return false;
}

std::vector<long> resolve_scales(const Config& cfg, long lmin, long lmax) {
  std::vector<long> scales = cfg.scales;
  if (scales.empty() && lmax >= lmin)
    scales = {lmin, (lmin + lmax) / 2, lmax};
  std::set<long> dedup(scales.begin(), scales.end());
  return {dedup.begin(), dedup.end()};
}

template <class T>
struct ResidualTracker {
  T worst{0};
  void feed(const T& v) {
    T a = abs_value(v);
    if (a > worst) worst = a;
  }
  std::string render() const {
    if constexpr (ScalarTraits<T>::is_exact)
      return worst == 0 ? "0" : exact_string(worst);
    else
      return decimal_string(worst, 3);
  }
  bool within(double threshold) const {
    if (threshold == 0) return worst == 0;
    return ScalarTraits<T>::to_double(worst) <= threshold;
  }
};

template <class T>
struct RunState {
  MomentEngine<T> eng;
  Matrix<T> g;
  FactorizationPair<T> fp;
  LinearFormEvaluator<T> ev;
  JacobiBand<T> js, jsbar;

  explicit RunState(const Config& cfg)
      : eng(make_setup<T>(cfg)),
        g(build_moment_matrix(eng, cfg.N)),
        fp(gauss_borel(g)),
        ev(eng.setup(), fp),
        js(jacobi_from_S(fp, eng.setup().comp1)),
        jsbar(jacobi_from_Sbar(fp, eng.setup().comp2)) {}

  const Composition& n1() const { return eng.setup().comp1; }
  const Composition& n2() const { return eng.setup().comp2; }
};

template <class T>
CheckRecord run_check(const Config& cfg, RunState<T>& st, const std::string& name,
                      const std::vector<Rational>& xs, const std::vector<Rational>& ys,
                      const std::vector<Rational>& zs, const std::vector<long>& scales) {
  CheckRecord rec;
  rec.name = name;
  rec.threshold = threshold_for(cfg, name);
  const auto t0 = Clock::now();
  ResidualTracker<T> res;
  const long N = cfg.N;
  const long total1 = st.n1().total(), total2 = st.n2().total();
  auto from_rat = [](const Rational& q) { return ScalarTraits<T>::from_rational(q); };
  bool structural_ok = true;
  std::string note;

  if (name == "hankel") {
    res.feed(hankel_residual(st.g, st.n1(), st.n2()));
  } else if (name == "biorth") {
    for (long l = 0; l < N; ++l)
      for (long k = 0; k < N; ++k)
        res.feed(check_biorthogonality(st.eng, st.ev, l, k) - T(l == k ? 1 : 0));
  } else if (name == "eigen") {
    for (const auto& xq : xs) res.feed(eigenvalue_residual(st.js, st.jsbar, st.ev, from_rat(xq)));
  } else if (name == "cd-classical") {
    for (long l : scales) {
      const auto forms = build_classical_cd(st.eng, l);
      for (const auto& xq : xs)
        for (const auto& yq : ys) {
          if (xq == yq) continue;
          const T x = from_rat(xq), y = from_rat(yq);
          res.feed(forms.eval_raw(st.eng.setup(), x, y) / (x - y) -
                   cd_kernel_direct(st.ev, l, x, y));
        }
    }
  } else if (name == "cd-alternative") {
    const T dust = max_abs(st.js.J) * ScalarTraits<T>::pivot_floor();
    for (long l : scales) {
      const SigmaSets sig = sigma_sets(st.n1(), st.n2(), l);
      if (!sigma_covers_support(st.js, sig, l, dust)) {
        structural_ok = false;
        note = "sigma rectangles miss nonzero entries of J at scale " + std::to_string(l);
      }
      for (const auto& xq : xs)
        for (const auto& yq : ys) {
          if (xq == yq) continue;
          const T x = from_rat(xq), y = from_rat(yq);
          const T direct = cd_kernel_direct(st.ev, l, x, y);
          res.feed(cd_alternative_rhs(st.js, st.ev, sig, l, x, y) - direct);
          res.feed(cd_splitting_raw(st.js, st.ev, st.n1(), st.n2(), l, x, y) -
                   (y - x) * direct);
        }
    }
  } else if (name == "j-factors") {
    for (long i = 0; i < N; ++i)
      for (long j = 0; j < N; ++j) {
        if (j >= i && i + total1 < N)
          res.feed(jacobi_entry_from_factors(st.fp, st.n1(), st.n2(), i, j) - st.js.J(i, j));
        if (i > j && j + total2 < N)
          res.feed(jacobi_entry_from_factors(st.fp, st.n1(), st.n2(), i, j) - st.jsbar.J(i, j));
      }
  } else if (name == "second-kind") {
    std::set<long> ls = {0};
    for (long l : scales)
      if (l < N) ls.insert(l);
    const Rational radius = std::max(abs_value(cfg.lo), abs_value(cfg.hi));
    for (long l : ls) {
      for (int side = 1; side <= 2; ++side) {
        const int fam_count = (side == 2 ? st.n2() : st.n1()).family_count();
        for (int fam = 1; fam <= fam_count; ++fam) {
          for (const auto& zq : zs) {
            if (abs_value(zq) <= radius) continue;  // series undefined this close
            const T z = from_rat(zq);
            const auto sv = second_kind_series(st.eng, st.fp, st.ev, l, side, fam, z);
            if constexpr (ScalarTraits<T>::is_exact) {
              const long terms =
                  multi_index(side == 2 ? st.n2() : st.n1(), N - 1)[fam];
              res.feed(sv.value - second_kind_expansion(st.eng, st.ev, l, side, fam, z, terms));
            } else {
              const T gap =
                  abs_value(sv.value - second_kind_integral(st.eng, st.ev, l, side, fam, z));
              res.feed(gap > sv.tail_bound ? T(gap - sv.tail_bound) : T(0));
            }
          }
        }
      }
    }
  } else {
    throw ConfigError("unknown check '" + name + "'");
  }

  rec.pass = structural_ok && res.within(rec.threshold);
  rec.residual = structural_ok ? res.render() : note;
  rec.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return rec;
}

nlohmann::ordered_json report_json(const Config& cfg, const std::vector<CheckRecord>& checks,
                                   bool pass, const std::string& error) {
  nlohmann::ordered_json j;
  j["backend"] = backend_name(cfg);
  if (cfg.backend == Backend::Float) j["precision_bits"] = cfg.precision_bits;
  j["N"] = cfg.N;
  j["pass"] = pass;
  if (!error.empty()) j["error"] = error;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    jc["residual"] = c.residual;
    jc["threshold"] = c.threshold;
    jc["pass"] = c.pass;
    j["checks"].push_back(jc);
  }
  return j;
}

void write_report(const fs::path& dir, const nlohmann::ordered_json& j) {
  std::ofstream out(dir / "report.json");
  if (!out) throw Error("cannot write report in '" + dir.string() + "'");
  out << j.dump(2) << "\n";
}

template <class T>
int run_typed(const Config& cfg, std::ostream& log) {
  const fs::path dir = cfg.out_dir.empty() ? fs::path("moprl_out") : fs::path(cfg.out_dir);
  fs::create_directories(dir);

  const auto checks = requested_checks(cfg);
  const long total1 = std::accumulate(cfg.n1.begin(), cfg.n1.end(), 0L);
  const long total2 = std::accumulate(cfg.n2.begin(), cfg.n2.end(), 0L);
  const long lmin = std::max(total1, total2);
  const long lmax = cfg.N - total1 - total2 - 2;
  std::vector<CheckRecord> done;

  if (wants_cd(checks) && lmax < lmin) {
    const std::string msg = "N must be at least max(|n1|,|n2|) + |n1| + |n2| + 2 = " +
                            std::to_string(lmin + total1 + total2 + 2) +
                            " for Christoffel-Darboux checks";
    write_report(dir, report_json(cfg, done, false, msg));
    log << "error: " << msg << "\n";
    return 2;
  }
  for (long l : cfg.scales)
    if (wants_cd(checks) && (l < lmin || l > lmax)) {
      const std::string msg = "scale " + std::to_string(l) + " outside the valid range " +
                              std::to_string(lmin) + ".." + std::to_string(lmax);
      write_report(dir, report_json(cfg, done, false, msg));
      log << "error: " << msg << "\n";
      return 2;
    }

  try {
    RunState<T> st(cfg);

    const std::string route_note =
        "rows 0.." + std::to_string(cfg.N - total1 - 1) + " exact (S route)";
    write_matrix_txt(dir / "g.txt", "g", st.g, backend_name(cfg), cfg.precision_bits, cfg.N, "all");
    write_matrix_txt(dir / "S.txt", "S", st.fp.S, backend_name(cfg), cfg.precision_bits, cfg.N, "all");
    write_matrix_txt(dir / "Sbar.txt", "Sbar", st.fp.Sbar, backend_name(cfg), cfg.precision_bits, cfg.N, "all");
    write_matrix_txt(dir / "J.txt", "J", st.js.J, backend_name(cfg), cfg.precision_bits, cfg.N, route_note);

    const auto xs = cfg.x_samples.empty() ? default_samples(cfg, false) : cfg.x_samples;
    const auto ys = cfg.y_samples.empty() ? default_samples(cfg, true) : cfg.y_samples;
    const auto zs = cfg.z_samples.empty() ? default_z(cfg) : cfg.z_samples;
    const auto scales = resolve_scales(cfg, lmin, lmax);

    bool all_pass = true;
    for (const auto& name : checks) {
      CheckRecord rec = run_check(cfg, st, name, xs, ys, zs, scales);
      all_pass = all_pass && rec.pass;
      log << (rec.pass ? "PASS " : "FAIL ") << rec.name << "  residual=" << rec.residual
          << "  threshold=" << rec.threshold << "  (" << std::fixed << std::setprecision(3)
          << rec.seconds << "s)\n";
      log.unsetf(std::ios_base::floatfield);
      done.push_back(std::move(rec));
    }
    write_report(dir, report_json(cfg, done, all_pass, ""));
    return all_pass ? 0 : 1;
  } catch (const Error& e) {
    write_report(dir, report_json(cfg, done, false, e.what()));
    log << "error: " << e.what() << "\n";
    return 2;
  }
}

template <class T>
Matrix<T> select_matrix(RunState<T>& st, const std::string& what) {
  if (what == "g") return st.g;
  if (what == "S") return st.fp.S;
  if (what == "Sbar") return st.fp.Sbar;
  if (what == "J") return st.js.J;
  throw ConfigError("unknown matrix '" + what + "' (expected g, S, Sbar or J)");
}

template <class T>
int export_typed(const Config& cfg, const std::string& what, const std::string& format,
                 int digits, std::ostream& log) {
  if (format != "csv" && format != "txt")
    throw ConfigError("format must be csv or structured-text (txt)");
  const fs::path dir = cfg.out_dir.empty() ? fs::path("moprl_out") : fs::path(cfg.out_dir);
  fs::create_directories(dir);
  RunState<T> st(cfg);
  const Matrix<T> m = select_matrix(st, what);
  const fs::path path = dir / (what + "." + format);
  if (format == "csv")
    write_matrix_csv(path, m, digits);
  else
    write_matrix_txt(path, what, m, backend_name(cfg), cfg.precision_bits, cfg.N,
                     what == "J" ? "rows 0.." + std::to_string(cfg.N - st.n1().total() - 1) +
                                       " exact (S route)"
                                 : "all");
  log << "wrote " << path.string() << "\n";
  return 0;
}

std::string format_range(long lo, long hi) {
  if (lo == hi) return "{" + std::to_string(lo) + "}";
  return "{" + std::to_string(lo) + ".." + std::to_string(hi) + "}";
}

}  // namespace

int run(const Config& cfg, std::ostream& log) {
  if (cfg.backend == Backend::Float) {
    set_float_precision_bits(cfg.precision_bits);
    return run_typed<BigFloat>(cfg, log);
  }
  return run_typed<Rational>(cfg, log);
}

int export_matrix(const Config& cfg, const std::string& what, const std::string& format,
                  int digits, std::ostream& log) {
  if (cfg.backend == Backend::Float) {
    set_float_precision_bits(cfg.precision_bits);
    return export_typed<BigFloat>(cfg, what, format, digits, log);
  }
  return export_typed<Rational>(cfg, what, format, digits, log);
}

int describe(const Config& cfg, std::ostream& out) {
  const Composition n1(cfg.n1), n2(cfg.n2);
  out << "compositions: n1 = (";
  for (std::size_t i = 0; i < cfg.n1.size(); ++i) out << (i ? "," : "") << cfg.n1[i];
  out << ")  |n1| = " << n1.total() << "  p1 = " << n1.family_count() << "\n";
  out << "              n2 = (";
  for (std::size_t i = 0; i < cfg.n2.size(); ++i) out << (i ? "," : "") << cfg.n2[i];
  out << ")  |n2| = " << n2.total() << "  p2 = " << n2.family_count() << "\n";
  out << "backend: " << (cfg.backend == Backend::Rational ? "rational" : "float") << ", N = "
      << cfg.N << "\n";
  if (n1.family_count() == 1 && n2.family_count() == 1 && n1.part(1) == 1 && n2.part(1) == 1)
    out << "tridiagonal\n";

  out << "staircase:\n";
  for (long l = 0; l < cfg.N; ++l) {
    out << "  l=" << l << ": a1=" << family_of(n1, l) << " x^" << string_exponent(n1, l)
        << "  nu1=(";
    const MultiIndex m1 = multi_index(n1, l), m2 = multi_index(n2, l);
    for (std::size_t i = 0; i < m1.counts.size(); ++i) out << (i ? "," : "") << m1.counts[i];
    out << ")  nu2=(";
    for (std::size_t i = 0; i < m2.counts.size(); ++i) out << (i ? "," : "") << m2.counts[i];
    out << ")\n";
  }

  const long lmin = std::max(n1.total(), n2.total());
  const long lmax = cfg.N - n1.total() - n2.total() - 2;
  const auto scales = resolve_scales(cfg, lmin, lmax);
  if (!scales.empty() && lmax >= lmin) {
    out << "band support:\n";
    for (long l : scales) {
      if (l < lmin) continue;
      const BandSupport b = band_support(n1, n2, l);
      out << "  l=" << l << ": row " << b.row_lo << ".." << b.row_hi << ", column " << b.col_lo
          << ".." << b.col_hi << "\n";
    }
    out << "sigma sets:\n";
    for (long l : scales) {
      if (l < lmin) continue;
      const SigmaSets s = sigma_sets(n1, n2, l);
      out << "  l=" << l << ": sigma1 = " << format_range(s.q1.lo, s.q1.hi) << "x"
          << format_range(s.qbar1.lo, s.qbar1.hi) << ", sigma2 = "
          << format_range(s.q2.lo, s.q2.hi) << "x" << format_range(s.qbar2.lo, s.qbar2.hi)
          << "\n";
    }
  }
  return 0;
}

}  // namespace moprl::cli
