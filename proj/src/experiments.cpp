#include "splitdyn/experiments.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <set>

#include "splitdyn/classify.hpp"
#include "splitdyn/errors.hpp"

namespace splitdyn {

bool ExperimentReport::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

json ExperimentReport::to_json() const {
  json cs = json::array();
  for (const auto& c : checks) cs.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return {{"scenario", scenario}, {"passed", passed()}, {"checks", cs}, {"artifacts", artifacts}};
}

namespace {

using Rng = std::mt19937_64;

template <class T>
T param(const json& p, const char* key, T fallback) {
  return p.contains(key) ? p.at(key).get<T>() : fallback;
}

mpq_class random_rational(Rng& rng, long h, bool nonzero = false) {
  for (;;) {
    const long num = static_cast<long>(rng() % static_cast<std::uint64_t>(2 * h + 1)) - h;
    const long den = 1 + static_cast<long>(rng() % static_cast<std::uint64_t>(h));
    if (nonzero && num == 0) continue;
    mpq_class q(num, den);
    q.canonicalize();
    return q;
  }
}

Poly random_poly(Rng& rng, const FieldPtr& F, int degree, long h) {
  std::vector<mpq_class> c;
  for (int i = 0; i < degree; ++i) c.push_back(random_rational(rng, h));
  c.push_back(random_rational(rng, h, true));
  return Poly::from_rationals(F, c);
}

std::vector<mpq_class> rationals_from(const json& p, const char* key, std::vector<std::string> fallback) {
  if (p.contains(key)) fallback = p.at(key).get<std::vector<std::string>>();
  std::vector<mpq_class> out;
  for (const auto& s : fallback) {
    mpq_class q(s);
    q.canonicalize();
    out.push_back(q);
  }
  return out;
}

RationalMap parse_map_q(const std::string& s) { return parse_rational_map(s); }

BiCurve diagonal() { return parse_curve("x - y"); }

ExperimentReport pairing_grid(const json& p) {
  ExperimentReport r;
  const auto degrees = param<std::vector<int>>(p, "degrees", {2, 3, 4});
  const auto grid = rationals_from(p, "grid", {"-3", "-2", "-1", "-1/2", "1/2", "1", "2", "3"});
  const FieldPtr Q = Field::rationals();
  json table = json::array();
  std::size_t agree = 0, total = 0;
  for (int d1 : degrees)
    for (int d2 : degrees)
      for (const auto& c1 : grid)
        for (const auto& c2 : grid) {
          const UnicriticalMap u1(d1, FieldElement(Q, c1)), u2(d2, FieldElement(Q, c2));
          if (u1.is_exceptional() || u2.is_exceptional()) continue;
          const auto v = classify_unicritical_pair(u1, u2);
          // Pointwise recomputation: c2 = r*c1 for a rational r with r^(d-1) = 1.
          bool expect = false;
          if (d1 == d2)
            for (long r : {1L, -1L}) {
              mpq_class rp = 1;
              for (int k = 0; k < d1 - 1; ++k) rp *= r;
              if (rp == 1 && c2 == r * c1) expect = true;
            }
          const bool got = v.kind == PairingVerdict::Kind::Paired;
          ++total;
          if (got == expect) ++agree;
          table.push_back({{"d1", d1}, {"c1", c1.get_str()}, {"d2", d2}, {"c2", c2.get_str()},
                           {"verdict", to_string(v.kind)}, {"zeta", v.zeta ? v.zeta->to_string() : ""}});
        }
  r.checks.push_back({"verdicts match recomputation", agree == total, {{"agree", agree}, {"total", total}}});
  r.artifacts["verdicts"] = table;
  return r;
}

ExperimentReport pullback_measures(const json& p) {
  ExperimentReport r;
  const auto samples = param<std::size_t>(p, "samples", 10000);
  const auto seed = param<std::uint64_t>(p, "seed", 0);
  const RationalMap f = parse_map_q(param<std::string>(p, "f", "x^3 + 1"));
  const RationalMap g = parse_map_q(param<std::string>(p, "g", "x^3 - 1"));
  const BiCurve curve = parse_curve(param<std::string>(p, "curve", "x + y"));
  const BiCurve control = parse_curve(param<std::string>(p, "control", "x - y"));
  const double invariant_max = param<double>(p, "invariant_max", 0.05);
  const double control_min = param<double>(p, "control_min", 0.15);
  const ComplexMap cf(f), cg(g);

  const bool invariant = is_invariant(curve, {f, g, 1, 1});
  r.checks.push_back({"curve is invariant", invariant, curve.to_string()});
  auto compare = [&](const BiCurve& C) {
    const auto m1 = curve_pullback_measure(C, cf, 1, samples, seed);
    const auto m2 = curve_pullback_measure(C, cg, 2, samples, seed + 1);
    return std::make_tuple(measure_discrepancy(m1, m2), m1, m2);
  };
  const auto [d_inv, a1, a2] = compare(curve);
  const auto [d_ctl, b1, b2] = compare(control);
  r.checks.push_back({"invariant curve discrepancy below threshold", d_inv < invariant_max,
                      {{"discrepancy", d_inv}, {"threshold", invariant_max}}});
  r.checks.push_back({"control curve discrepancy above threshold", d_ctl > control_min,
                      {{"discrepancy", d_ctl}, {"threshold", control_min}}});
  if (p.contains("artifact_dir")) {
    const std::string dir = p.at("artifact_dir").get<std::string>();
    auto dump = [&](const std::string& name, const EmpiricalMeasure& m) {
      std::ofstream out(dir + "/" + name);
      write_measure_csv(out, m);
      r.artifacts["measures"].push_back(dir + "/" + name);
    };
    dump("invariant_pi1.csv", a1);
    dump("invariant_pi2.csv", a2);
    dump("control_pi1.csv", b1);
    dump("control_pi2.csv", b2);
  }
  return r;
}

ExperimentReport curve_transfer(const json& p) {
  ExperimentReport r;
  const auto max_points = param<std::size_t>(p, "max_points", 4'000'000);
  struct Case {
    std::string name;
    BiCurve curve;
    RationalMap f, g;
  };
  const RationalMap quad = parse_map_q("x^2 - 1");
  const RationalMap lattes_like = parse_map_q("(x^2 + 1)/(2x)");
  const std::vector<Case> cases{
      {"diagonal under (x^2 - 1, x^2 - 1)", diagonal(), quad, quad},
      {"graph of x^2 - 1", parse_curve("y = x^2 - 1"), quad, quad},
      {"diagonal under ((x^2 + 1)/(2x), same)", diagonal(), lattes_like, lattes_like},
      {"x + y under (x^3 + 1, x^3 - 1)", parse_curve("x + y"), parse_map_q("x^3 + 1"), parse_map_q("x^3 - 1")},
  };
  for (const auto& c : cases) {
    const bool inv = is_invariant(c.curve, {c.f, c.g, 1, 1});
    const auto rep = preperiodic_pairs_on_curve(c.curve, c.f, c.g, max_points);
    json pairs = json::array();
    for (const auto& [x, y] : rep.pairs) pairs.push_back({x.to_string(), y.to_string()});
    r.checks.push_back({c.name + ": invariant", inv, nullptr});
    r.checks.push_back({c.name + ": no transfer failures", rep.transfer_failures.empty() && !rep.truncated,
                        {{"pairs", pairs},
                         {"failures", rep.transfer_failures.size()},
                         {"preperiodic_x", rep.preperiodic_x_count},
                         {"truncated", rep.truncated}}});
  }
  return r;
}

ExperimentReport semiconjugacy_roundtrip(const json& p) {
  ExperimentReport r;
  const auto count = param<int>(p, "count", 200);
  const auto cap = param<long>(p, "degree_cap", 7776);
  const Budget budget{param<std::size_t>(p, "budget_bits", std::size_t{1} << 28)};
  Rng rng(param<std::uint64_t>(p, "seed", 0));
  const FieldPtr Q = Field::rationals();
  const std::vector<int> ds{2, 3, 4, 6};
  int ok = 0, tried = 0;
  json failures = json::array();
  while (tried < count) {
    const int d = ds[rng() % ds.size()];
    const int n = 1 + static_cast<int>(rng() % 2);
    const int m = static_cast<int>(rng() % 3);
    std::vector<int> divisors;
    for (int k = 1; k <= d; ++k)
      if (d % k == 0) divisors.push_back(k);
    const int delta = divisors[rng() % divisors.size()];
    long degA = delta;
    for (int k = 0; k < m; ++k) degA *= d;
    long degFnA = degA;
    for (int k = 0; k < n; ++k) degFnA *= d;
    if (degFnA > cap) continue;
    const UnicriticalMap u(d, FieldElement(Q, random_rational(rng, 3, true)));
    if (u.is_exceptional()) continue;
    const LinearPoly L(FieldElement(Q, random_rational(rng, 3, true)), FieldElement(Q, random_rational(rng, 3)));
    ++tried;
    const SemiconjugacySolution sol{m, delta, L};
    const auto [A, B] = generate_semiconjugacy(u, n, m, delta, L, budget);
    const bool holds = compose(iterate(u.poly(), n, budget), A, budget) == compose(A, B, budget);
    bool back = false;
    try {
      back = classify_semiconjugacy(u, n, A, B, budget) == canonical_solution(u, sol);
    } catch (const Error&) {
    }
    if (holds && back) ++ok;
    else failures.push_back({{"d", d}, {"c", u.c.to_string()}, {"n", n}, {"m", m}, {"delta", delta}, {"L", L.to_string()}});
  }
  r.checks.push_back({"identity holds and classifies back", ok == tried, {{"ok", ok}, {"total", tried}, {"failures", failures}}});
  return r;
}

ExperimentReport decomposition_oracle(const json& p) {
  ExperimentReport r;
  const auto count = param<int>(p, "count", 100);
  Rng rng(param<std::uint64_t>(p, "seed", 0));
  const FieldPtr Q = Field::rationals();
  auto deg = [&] { return 1 + static_cast<int>(rng() % 3); };
  int left_ok = 0, right_ok = 0;
  for (int k = 0; k < count; ++k) {
    {
      const Poly A = random_poly(rng, Q, deg() + 1, 4), P = random_poly(rng, Q, deg(), 4), D = random_poly(rng, Q, deg(), 4);
      try {
        if (engstrom_left(A, compose(P, D), compose(A, P), D) == P) ++left_ok;
      } catch (const Error&) {
      }
    }
    {
      const Poly C = random_poly(rng, Q, deg() + 1, 4), Qp = random_poly(rng, Q, deg(), 4), B = random_poly(rng, Q, deg(), 4);
      try {
        if (engstrom_right(compose(C, Qp), B, C, compose(Qp, B)) == Qp) ++right_ok;
      } catch (const Error&) {
      }
    }
  }
  r.checks.push_back({"left factor recovered", left_ok == count, {{"ok", left_ok}, {"total", count}}});
  r.checks.push_back({"right factor recovered", right_ok == count, {{"ok", right_ok}, {"total", count}}});
  return r;
}

ExperimentReport gap_preservation(const json& p) {
  ExperimentReport r;
  const auto count = param<int>(p, "count", 100);
  Rng rng(param<std::uint64_t>(p, "seed", 0));
  const FieldPtr Q = Field::rationals();
  int ok = 0;
  json failures = json::array();
  for (int k = 0; k < count; ++k) {
    const int D = 2 + static_cast<int>(rng() % 3);
    const int m = 2 + static_cast<int>(rng() % static_cast<unsigned>(D - 1));
    const int n = 1 + static_cast<int>(rng() % 3);
    std::vector<mpq_class> c(static_cast<std::size_t>(D + 1), 0);
    c[D] = random_rational(rng, 4, true);
    c[D - m] = random_rational(rng, 4, true);
    for (int i = 0; i < D - m; ++i) c[i] = random_rational(rng, 4);
    const Poly P = Poly::from_rationals(Q, c);
    const auto g = gap_data(iterate(P, n));
    if (g.m == m) ++ok;
    else failures.push_back({{"P", P.to_string()}, {"n", n}});
  }
  r.checks.push_back({"gap exponent preserved", ok == count, {{"ok", ok}, {"total", count}, {"failures", failures}}});
  return r;
}

ExperimentReport height_functional_equation(const json& p) {
  ExperimentReport r;
  const auto maps = param<std::vector<std::string>>(
      p, "maps", {"x^2 - 1", "(x^2 + 1)/(2x)", "x^2 + 1/4", "x^3 - 2x", "(x^2 - 2)/(3x)"});
  const auto points = param<int>(p, "points", 10);
  const double tol = param<double>(p, "tol", 1e-6);
  Rng rng(param<std::uint64_t>(p, "seed", 0));
  double worst = 0;
  double worst_preperiodic = 0;
  bool zero_only_on_set = true;
  json sets = json::object();
  for (const auto& text : maps) {
    const RationalMap f = parse_map_q(text);
    for (int k = 0; k < points; ++k) {
      const ProjPointQ x(random_rational(rng, 20));
      const double lhs = canonical_height(f, f(x), 1e-10).value;
      const double rhs = f.degree() * canonical_height(f, x, 1e-10).value;
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    const auto pre = preperiodic_points(f, 0.0);
    json names = json::array();
    std::set<ProjPointQ> in_set(pre.points.begin(), pre.points.end());
    for (const auto& x : pre.points) {
      names.push_back(x.to_string());
      worst_preperiodic = std::max(worst_preperiodic, canonical_height(f, x, 1e-10).value);
    }
    sets[text] = names;
    // Points of small naive height outside the set have positive height.
    for (long a = -4; a <= 4; ++a)
      for (long b = 1; b <= 4; ++b) {
        const ProjPointQ x{mpz_class(a), mpz_class(b)};
        if (in_set.count(x)) continue;
        if (canonical_height(f, x, 1e-10).value <= 1e-8) zero_only_on_set = false;
      }
  }
  r.checks.push_back({"functional equation", worst <= tol, {{"max_error", worst}, {"tol", tol}}});
  r.checks.push_back({"zero on preperiodic points", worst_preperiodic <= 1e-8, {{"max_height", worst_preperiodic}}});
  r.checks.push_back({"positive off the preperiodic set", zero_only_on_set, nullptr});
  r.artifacts["preperiodic"] = sets;
  return r;
}

ExperimentReport product_formula(const json& p) {
  ExperimentReport r;
  const auto count = param<int>(p, "count", 1000);
  Rng rng(param<std::uint64_t>(p, "seed", 0));
  int ok = 0;
  for (int k = 0; k < count; ++k)
    if (product_formula_check(random_rational(rng, 1'000'000, true)).exact_zero) ++ok;
  r.checks.push_back({"exact product formula", ok == count, {{"ok", ok}, {"total", count}}});
  return r;
}

ExperimentReport poincare_germ(const json&) {
  ExperimentReport r;
  const ComplexMap sq(parse_map_q("x^2"));
  const auto s = poincare_series(sq, 1.0, 10);
  double err = 0, factorial = 1;
  for (int k = 1; k <= 10; ++k) {
    factorial *= k;
    err = std::max(err, std::abs(s.coeffs[static_cast<std::size_t>(k - 1)] - 1.0 / factorial));
  }
  r.checks.push_back({"series of x^2 at 1 is exp(w) - 1 shifted", err <= 1e-10, {{"max_error", err}}});
  const ComplexMap quartic(parse_map_q("x^4"));
  const double res = germ_equality_residual(sq, quartic, 2, 1, {1.0, 1.0}, 1.0, 0.1);
  r.checks.push_back({"germ of x^2 iterated twice equals x^4", res < 1e-12, {{"residual", res}}});
  return r;
}

ExperimentReport curve_orbits(const json& p) {
  ExperimentReport r;
  const auto budget = param<int>(p, "degree_budget", 200);
  const RationalMap quad = parse_map_q("x^2 - 1");
  auto fixed = [&](const std::string& name, const BiCurve& C) {
    const auto rep = curve_preperiodicity(C, {quad, quad, 1, 1}, 3, budget);
    r.checks.push_back({name + " is fixed", rep.preperiod == 0 && rep.period == 1,
                        {{"preperiod", rep.preperiod.value_or(-1)}, {"period", rep.period.value_or(-1)}}});
  };
  fixed("diagonal under (x^2 - 1, x^2 - 1)", diagonal());
  fixed("graph of x^2 - 1", parse_curve("y = x^2 - 1"));
  const int steps = param<int>(p, "steps", 4);
  const auto rep = curve_preperiodicity(diagonal(), {parse_map_q("x^2"), parse_map_q("x^3"), 1, 1}, steps, budget);
  bool growth = !rep.decided() && static_cast<int>(rep.bidegrees.size()) == steps + 1;
  json seq = json::array();
  long a = 1, b = 1;
  for (std::size_t k = 0; k < rep.bidegrees.size(); ++k, a *= 3, b *= 2) {
    seq.push_back({rep.bidegrees[k].first, rep.bidegrees[k].second});
    if (rep.bidegrees[k] != std::make_pair(static_cast<int>(a), static_cast<int>(b))) growth = false;
  }
  r.checks.push_back({"diagonal under (x^2, x^3) undecided with bidegrees (3^k, 2^k)", growth,
                      {{"bidegrees", seq}, {"reason", rep.undecided_reason}}});
  return r;
}

using Runner = std::function<ExperimentReport(const json&)>;

const std::vector<std::pair<std::string, Runner>>& registry() {
  static const std::vector<std::pair<std::string, Runner>> r{
      {"pairing-grid", pairing_grid},
      {"semiconjugacy-roundtrip", semiconjugacy_roundtrip},
      {"decomposition-oracle", decomposition_oracle},
      {"gap-preservation", gap_preservation},
      {"height-functional-equation", height_functional_equation},
      {"product-formula", product_formula},
      {"curve-transfer", curve_transfer},
      {"pullback-measures", pullback_measures},
      {"poincare-germ", poincare_germ},
      {"curve-orbits", curve_orbits},
  };
  return r;
}

}  // namespace

std::vector<std::string> experiment_names() {
  std::vector<std::string> out;
  for (const auto& [name, run] : registry()) out.push_back(name);
  return out;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  for (const auto& [name, run] : registry()) {
    if (name != spec.scenario) continue;
    const auto start = std::chrono::steady_clock::now();
    ExperimentReport r = run(spec.parameters);
    r.scenario = name;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  }
  throw PreconditionViolated("unknown scenario '" + spec.scenario + "'");
}

}  // namespace splitdyn
