// splitdyn: command-line front end. Every subcommand prints one JSON
// document (or CSV / PGM) that carries the Command record it was run with.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "splitdyn/classify.hpp"
#include "splitdyn/errors.hpp"
#include "splitdyn/experiments.hpp"
#include "splitdyn/io.hpp"

using namespace splitdyn;

namespace {

// Numeric defaults. SPLITDYN_SEED and SPLITDYN_THREADS are the only
// environment overrides.
namespace defaults {
constexpr std::uint64_t seed = 0;
constexpr double tol = 1e-9;
constexpr long budget_bits = 1L << 20;
constexpr int max_steps = 10;
constexpr int orbit_steps = 10;
constexpr int degree_budget = 200;
constexpr std::size_t max_points = 4'000'000;
constexpr long samples = 10000;
constexpr int burn_in = 50;
constexpr int poincare_order = 20;
constexpr double germ_radius = 0.1;
constexpr int resolution = 256;
constexpr int iterations = 200;
}  // namespace defaults

enum Exit { kOk = 0, kChecksFailed = 1, kUsage = 2, kFailure = 3 };

struct Globals {
  std::uint64_t seed = defaults::seed;
  double tol = defaults::tol;
  bool json_out = false;
  bool csv_out = false;
  long budget_bits = defaults::budget_bits;
  int max_steps = defaults::max_steps;
  std::string field;
  std::string output;
};

class Session {
 public:
  explicit Session(Globals& g) : g_(g) {}

  Command command(const std::string& name, std::map<std::string, std::string> args, long samples = 0) const {
    Command c;
    c.subcommand = name;
    c.arguments = std::move(args);
    c.seed = g_.seed;
    c.tol = g_.tol;
    c.budget_bits = g_.budget_bits;
    c.max_steps = g_.max_steps;
    c.samples = samples;
    c.output = g_.output;
    if (!g_.field.empty()) c.arguments["field"] = g_.field;
    return c;
  }

  FieldPtr field() const { return g_.field.empty() ? Field::rationals() : parse_field(g_.field); }
  Budget budget() const { return Budget{static_cast<std::size_t>(g_.budget_bits)}; }

  std::ostream& sink() {
    if (g_.output.empty()) return std::cout;
    if (!file_) file_.emplace(g_.output, std::ios::binary);
    if (!*file_) throw PreconditionViolated("cannot open " + g_.output);
    return *file_;
  }

  void emit(const Command& c, json result) {
    json doc{{"command", command_to_json(c)}, {"result", std::move(result)}};
    sink() << doc.dump(2) << '\n';
  }

  const Globals& globals() const { return g_; }

 private:
  Globals& g_;
  std::optional<std::ofstream> file_;
};

cplx parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  auto number = [](const std::string& s) {
    if (s.find('/') != std::string::npos) {
      mpq_class q(s);
      q.canonicalize();
      return q.get_d();
    }
    return std::stod(s);
  };
  if (comma == std::string::npos) return {number(text), 0.0};
  return {number(text.substr(0, comma)), number(text.substr(comma + 1))};
}

LinearPoly parse_linear(const std::string& text, const FieldPtr& F) {
  const Poly p = parse_poly(text, F);
  if (p.degree() != 1) throw PreconditionViolated("'" + text + "' is not of the form a*x + b");
  return LinearPoly(p.coeff(1), p.coeff(0));
}

json points_json(const std::vector<ProjPointQ>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(p.to_string());
  return a;
}

json orbit_report_json(const CurveOrbitReport& r) {
  json bideg = json::array();
  for (const auto& [a, b] : r.bidegrees) bideg.push_back({a, b});
  json j{{"decided", r.decided()}, {"bidegrees", bideg}};
  if (r.decided()) {
    j["preperiod"] = *r.preperiod;
    j["period"] = *r.period;
  } else {
    j["undecided_reason"] = r.undecided_reason;
  }
  return j;
}

json periodic_json(const PeriodicPointsResult& r) {
  json pts = json::array();
  for (const auto& p : r.points)
    pts.push_back({{"point", complex_point_to_json(p.point)},
                   {"period", p.period},
                   {"multiplier", {p.multiplier.real(), p.multiplier.imag()}},
                   {"repelling", p.repelling},
                   {"cycle", p.cycle},
                   {"converged", p.converged}});
  json j{{"points", pts}, {"cycles", r.cycles}, {"equation_degree", r.equation_degree}};
  if (r.note) j["note"] = *r.note;
  return j;
}

void emit_measure(Session& s, const Command& c, const EmpiricalMeasure& m) {
  if (s.globals().json_out) {
    json pts = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
      json row{{"x", complex_point_to_json(m.x[i])}, {"weight", m.weights[i]}};
      if (m.dimension == 2) row["y"] = complex_point_to_json(m.y[i]);
      pts.push_back(row);
    }
    s.emit(c, {{"dimension", m.dimension}, {"points", pts}});
    return;
  }
  write_measure_csv(s.sink(), m, command_to_json(c).dump());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and numerical dynamics of split maps (x, y) -> (f(x), g(y))"};
  app.require_subcommand(1);
  Globals g;
  if (const char* env = std::getenv("SPLITDYN_SEED")) g.seed = std::strtoull(env, nullptr, 10);
  if (const char* env = std::getenv("SPLITDYN_THREADS")) set_sampling_threads(std::atoi(env));

  auto globals = [&](CLI::App* sub) {
    sub->add_option("--seed", g.seed, "random seed")->capture_default_str();
    sub->add_option("--tol", g.tol, "numerical tolerance")->capture_default_str();
    sub->add_flag("--json", g.json_out, "JSON output");
    sub->add_flag("--csv", g.csv_out, "CSV output where supported");
    sub->add_option("--budget-bits", g.budget_bits, "coefficient size budget in bits")->capture_default_str();
    sub->add_option("--max-steps", g.max_steps, "step budget for iterative searches")->capture_default_str();
    sub->add_option("--field", g.field, "extension field modulus in t, e.g. \"t^2 + 1\"");
    sub->add_option("-o,--output", g.output, "write to a file instead of stdout");
  };

  Session session(g);
  std::function<int()> action;
  auto add = [&](const std::string& name, const std::string& help) {
    auto* sub = app.add_subcommand(name, help);
    globals(sub);
    return sub;
  };

  // Heights and preperiodic points.
  std::string map_text, point_text;
  double height_bound = 0;
  std::size_t max_points = defaults::max_points;
  int orbit_steps = defaults::orbit_steps;
  {
    auto* sub = add("height", "canonical height of a rational point");
    sub->add_option("map", map_text)->required();
    sub->add_option("point", point_text)->required();
    sub->callback([&] {
      action = [&] {
        const auto f = parse_rational_map(map_text);
        const auto h = canonical_height(f, parse_point(point_text), g.tol);
        json r = height_to_json(h);
        r["map"] = f.to_string();
        r["point"] = parse_point(point_text).to_string();
        session.emit(session.command("height", {{"map", map_text}, {"point", point_text}}), r);
        return kOk;
      };
    });
  }
  {
    auto* sub = add("preperiodic", "decide whether a rational point is preperiodic");
    sub->add_option("map", map_text)->required();
    sub->add_option("point", point_text)->required();
    sub->callback([&] {
      action = [&] {
        const auto d = is_preperiodic(parse_rational_map(map_text), parse_point(point_text));
        json r{{"preperiodic", d.preperiodic}, {"orbit", points_json(d.orbit)}, {"escape_bound", d.escape_bound}};
        if (d.preperiodic) {
          r["tail"] = d.tail;
          r["period"] = d.period;
        }
        session.emit(session.command("preperiodic", {{"map", map_text}, {"point", point_text}}), r);
        return kOk;
      };
    });
  }
  {
    auto* sub = add("orbit", "exact forward orbit");
    sub->add_option("map", map_text)->required();
    sub->add_option("point", point_text)->required();
    sub->add_option("--steps", orbit_steps)->capture_default_str();
    sub->callback([&] {
      action = [&] {
        const auto f = parse_rational_map(map_text);
        std::vector<ProjPointQ> orbit{parse_point(point_text)};
        for (int k = 0; k < orbit_steps; ++k) {
          if (mpz_sizeinbase(orbit.back().norm().get_mpz_t(), 2) > static_cast<std::size_t>(g.budget_bits))
            throw ResourceLimit("orbit point exceeds the bit budget");
          orbit.push_back(f(orbit.back()));
        }
        session.emit(session.command("orbit", {{"map", map_text}, {"point", point_text}, {"steps", std::to_string(orbit_steps)}}),
                     {{"orbit", points_json(orbit)}});
        return kOk;
      };
    });
  }
  bool truncate = false;
  {
    auto* sub = add("enumerate-preperiodic", "all rational preperiodic points");
    sub->add_option("map", map_text)->required();
    sub->add_option("--bound", height_bound, "naive height bound (raised to the escape bound)");
    sub->add_option("--max-points", max_points)->capture_default_str();
    sub->add_flag("--truncate", truncate, "shrink the search instead of failing on budget");
    sub->callback([&] {
      action = [&] {
        const auto e = preperiodic_points(parse_rational_map(map_text), height_bound, max_points, truncate);
        json r{{"points", points_json(e.points)},
               {"escape_bound", e.escape_bound},
               {"searched_bound", e.searched_bound},
               {"truncated", e.truncated}};
        if (e.warning) r["warning"] = *e.warning;
        session.emit(session.command("enumerate-preperiodic", {{"map", map_text},
                                                               {"bound", format_double(height_bound)},
                                                               {"max_points", std::to_string(max_points)},
                                                               {"truncate", truncate ? "1" : "0"}}),
                     r);
        return kOk;
      };
    });
  }

  // Curves.
  std::string curve_text, f_text, g_text;
  int n_iter = 1, m_iter = 1, degree_budget = defaults::degree_budget;
  auto split_options = [&](CLI::App* sub) {
    sub->add_option("curve", curve_text)->required();
    sub->add_option("--f", f_text)->required();
    sub->add_option("--g", g_text, "defaults to f");
    sub->add_option("--n", n_iter)->capture_default_str();
    sub->add_option("--m", m_iter)->capture_default_str();
  };
  auto split_args = [&] {
    return std::map<std::string, std::string>{{"curve", curve_text},
                                              {"f", f_text},
                                              {"g", g_text.empty() ? f_text : g_text},
                                              {"n", std::to_string(n_iter)},
                                              {"m", std::to_string(m_iter)}};
  };
  auto split_endo = [&] {
    return SplitEndo{parse_rational_map(f_text), parse_rational_map(g_text.empty() ? f_text : g_text), n_iter, m_iter};
  };
  {
    auto* sub = add("curve-image", "image of a curve under (f^n, g^m)");
    split_options(sub);
    sub->callback([&] {
      action = [&] {
        session.emit(session.command("curve-image", split_args()),
                     curve_to_json(image_curve(parse_curve(curve_text), split_endo())));
        return kOk;
      };
    });
  }
  {
    auto* sub = add("curve-invariant", "whether (f^n, g^m) maps a curve into itself");
    split_options(sub);
    sub->callback([&] {
      action = [&] {
        session.emit(session.command("curve-invariant", split_args()),
                     {{"invariant", is_invariant(parse_curve(curve_text), split_endo())}});
        return kOk;
      };
    });
  }
  {
    auto* sub = add("curve-orbit", "iterate curve images until a repeat");
    split_options(sub);
    sub->add_option("--degree-budget", degree_budget)->capture_default_str();
    sub->callback([&] {
      action = [&] {
        auto args = split_args();
        args["degree_budget"] = std::to_string(degree_budget);
        const auto r = curve_preperiodicity(parse_curve(curve_text), split_endo(), g.max_steps, degree_budget);
        session.emit(session.command("curve-orbit", args), orbit_report_json(r));
        return kOk;
      };
    });
  }
  std::string L_text = "x";
  {
    auto* sub = add("ms-curve", "the curve f~^n(x) = L(f~^m(y))");
    sub->add_option("ftilde", f_text)->required();
    sub->add_option("--n", n_iter)->capture_default_str();
    sub->add_option("--m", m_iter)->capture_default_str();
    sub->add_option("--L", L_text, "linear polynomial a*x + b")->capture_default_str();
    sub->callback([&] {
      action = [&] {
        const auto F = session.field();
        const auto C = ms_curve(parse_poly(f_text, F), n_iter, m_iter, parse_linear(L_text, F));
        session.emit(session.command("ms-curve", {{"ftilde", f_text},
                                                  {"n", std::to_string(n_iter)},
                                                  {"m", std::to_string(m_iter)},
                                                  {"L", L_text}}),
                     curve_to_json(C));
        return kOk;
      };
    });
  }
  {
    auto* sub = add("curve-preperiodic-pairs", "rational points of a curve with both coordinates preperiodic");
    sub->add_option("curve", curve_text)->required();
    sub->add_option("--f", f_text)->required();
    sub->add_option("--g", g_text, "defaults to f");
    sub->add_option("--max-points", max_points)->capture_default_str();
    sub->callback([&] {
      action = [&] {
        const auto f = parse_rational_map(f_text);
        const auto gm = parse_rational_map(g_text.empty() ? f_text : g_text);
        const auto r = preperiodic_pairs_on_curve(parse_curve(curve_text), f, gm, max_points);
        auto pairs = [](const auto& v) {
          json a = json::array();
          for (const auto& [x, y] : v) a.push_back({x.to_string(), y.to_string()});
          return a;
        };
        session.emit(session.command("curve-preperiodic-pairs", {{"curve", curve_text},
                                                                 {"f", f_text},
                                                                 {"g", g_text.empty() ? f_text : g_text},
                                                                 {"max_points", std::to_string(max_points)}}),
                     {{"pairs", pairs(r.pairs)},
                      {"transfer_failures", pairs(r.transfer_failures)},
                      {"vertical_fibres", points_json(r.vertical_fibres)},
                      {"preperiodic_x_count", r.preperiodic_x_count},
                      {"truncated", r.truncated}});
        return kOk;
      };
    });
  }

  // Unicritical maps and decompositions.
  int d1 = 2, d2 = 2, d = 2, n_semi = 1, m_semi = 0, delta = 1;
  std::string c1_text, c2_text, c_text, A_text, B_text, poly_text;
  {
    auto* sub = add("classify-pair", "pairing verdict for x^d1 + c1 and x^d2 + c2");
    sub->add_option("--d1", d1)->required();
    sub->add_option("--c1", c1_text)->required();
    sub->add_option("--d2", d2)->required();
    sub->add_option("--c2", c2_text)->required();
    sub->callback([&] {
      action = [&] {
        const auto F = session.field();
        auto constant = [&](const std::string& s) {
          const Poly p = parse_poly(s, F);
          if (p.degree() > 0) throw PreconditionViolated("'" + s + "' is not a constant");
          return p.coeff(0);
        };
        const auto v = classify_unicritical_pair(UnicriticalMap(d1, constant(c1_text)), UnicriticalMap(d2, constant(c2_text)));
        json r{{"verdict", to_string(v.kind)}};
        if (v.zeta) {
          const FieldElement z = *v.zeta;
          r["zeta"] = z.is_rational() ? z.rational().get_str() : z.to_string();
          r["witness"] = "x^" + std::to_string(d1) + " + c2 = zeta^-1 * f1(zeta*x)";
        }
        session.emit(session.command("classify-pair", {{"d1", std::to_string(d1)},
                                                       {"c1", c1_text},
                                                       {"d2", std::to_string(d2)},
                                                       {"c2", c2_text}}),
                     r);
        return kOk;
      };
    });
  }
  auto unicritical_options = [&](CLI::App* sub) {
    sub->add_option("--d", d)->required();
    sub->add_option("--c", c_text)->required();
    sub->add_option("--n", n_semi)->capture_default_str();
  };
  auto unicritical = [&] {
    const Poly c = parse_poly(c_text, session.field());
    if (c.degree() > 0) throw PreconditionViolated("'" + c_text + "' is not a constant");
    return UnicriticalMap(d, c.is_zero() ? FieldElement::zero(c.field()) : c.coeff(0));
  };
  {
    auto* sub = add("semiconj-generate", "A and B with f^n(A) = A(B) from (m, delta, L)");
    unicritical_options(sub);
    sub->add_option("--m", m_semi)->capture_default_str();
    sub->add_option("--delta", delta)->capture_default_str();
    sub->add_option("--L", L_text)->capture_default_str();
    sub->callback([&] {
      action = [&] {
        const auto u = unicritical();
        const auto [A, B] = generate_semiconjugacy(u, n_semi, m_semi, delta, parse_linear(L_text, u.c.field()), session.budget());
        session.emit(session.command("semiconj-generate", {{"d", std::to_string(d)},
                                                           {"c", c_text},
                                                           {"n", std::to_string(n_semi)},
                                                           {"m", std::to_string(m_semi)},
                                                           {"delta", std::to_string(delta)},
                                                           {"L", L_text}}),
                     {{"A", poly_to_json(A)}, {"B", poly_to_json(B)}, {"A_text", A.to_string()}, {"B_text", B.to_string()}});
        return kOk;
      };
    });
  }
  {
    auto* sub = add("semiconj-classify", "canonical (m, delta, L) for a solution of f^n(A) = A(B)");
    unicritical_options(sub);
    sub->add_option("--A", A_text)->required();
    sub->add_option("--B", B_text)->required();
    sub->callback([&] {
      action = [&] {
        const auto u = unicritical();
        const auto F = u.c.field();
        const auto s = classify_semiconjugacy(u, n_semi, parse_poly(A_text, F), parse_poly(B_text, F), session.budget());
        session.emit(session.command("semiconj-classify", {{"d", std::to_string(d)},
                                                           {"c", c_text},
                                                           {"n", std::to_string(n_semi)},
                                                           {"A", A_text},
                                                           {"B", B_text}}),
                     {{"m", s.m}, {"delta", s.delta}, {"L", linear_to_json(s.L)}});
        return kOk;
      };
    });
  }
  {
    auto* sub = add("symmetries", "linear L with g(L) = g");
    sub->add_option("poly", poly_text)->required();
    sub->callback([&] {
      action = [&] {
        json a = json::array();
        for (const auto& L : symmetries_of(parse_poly(poly_text, session.field()))) a.push_back(linear_to_json(L));
        session.emit(session.command("symmetries", {{"poly", poly_text}}), {{"symmetries", a}});
        return kOk;
      };
    });
  }
  {
    auto* sub = add("gap", "degree, gap exponent and eta of a polynomial");
    sub->add_option("poly", poly_text)->required();
    sub->callback([&] {
      action = [&] {
        const auto gd = gap_data(parse_poly(poly_text, session.field()));
        json r{{"D", gd.D}, {"eta", gd.eta}};
        r["m"] = gd.m ? json(*gd.m) : json(nullptr);
        session.emit(session.command("gap", {{"poly", poly_text}}), r);
        return kOk;
      };
    });
  }

  // Numerics.
  int period = 1;
  long samples = defaults::samples;
  int burn_in = defaults::burn_in, coordinate = 1, order = defaults::poincare_order;
  int resolution = defaults::resolution, iterations = defaults::iterations;
  std::string x0_text = "0", h_text = "x", center_text = "0";
  double radius = defaults::germ_radius, window_radius = 0;
  std::string file_a, file_b;
  {
    auto* sub = add("periodic-points", "points of exact period n with multipliers");
    sub->add_option("map", map_text)->required();
    sub->add_option("--period", period)->capture_default_str();
    sub->callback([&] {
      action = [&] {
        const auto r = periodic_points(ComplexMap(parse_rational_map(map_text)), period, g.tol);
        session.emit(session.command("periodic-points", {{"map", map_text}, {"period", std::to_string(period)}}),
                     periodic_json(r));
        return kOk;
      };
    });
  }
  {
    auto* sub = add("sample-measure", "samples of the maximal-entropy measure (CSV unless --json)");
    sub->add_option("map", map_text)->required();
    sub->add_option("--samples", samples)->capture_default_str();
    sub->add_option("--burn-in", burn_in)->capture_default_str();
    sub->callback([&] {
      action = [&] {
        const auto m = sample_invariant_measure(ComplexMap(parse_rational_map(map_text)), static_cast<std::size_t>(samples),
                                                burn_in, g.seed);
        emit_measure(session, session.command("sample-measure", {{"map", map_text}, {"burn_in", std::to_string(burn_in)}}, samples),
                     m);
        return kOk;
      };
    });
  }
  {
    auto* sub = add("pullback-measure", "pullback of the maximal-entropy measure to a curve");
    sub->add_option("curve", curve_text)->required();
    sub->add_option("--f", f_text)->required();
    sub->add_option("--coordinate", coordinate, "1 pulls back through x, 2 through y")->capture_default_str();
    sub->add_option("--samples", samples)->capture_default_str();
    sub->add_option("--burn-in", burn_in)->capture_default_str();
    sub->callback([&] {
      action = [&] {
        const auto m = curve_pullback_measure(parse_curve(curve_text), ComplexMap(parse_rational_map(f_text)), coordinate,
                                              static_cast<std::size_t>(samples), g.seed, burn_in);
        emit_measure(session,
                     session.command("pullback-measure", {{"curve", curve_text},
                                                          {"f", f_text},
                                                          {"coordinate", std::to_string(coordinate)},
                                                          {"burn_in", std::to_string(burn_in)}},
                                     samples),
                     m);
        return kOk;
      };
    });
  }
  {
    auto* sub = add("discrepancy", "test-function discrepancy between two measure CSV files");
    sub->add_option("a", file_a)->required()->check(CLI::ExistingFile);
    sub->add_option("b", file_b)->required()->check(CLI::ExistingFile);
    sub->callback([&] {
      action = [&] {
        std::ifstream ia(file_a), ib(file_b);
        const double v = measure_discrepancy(read_measure_csv(ia), read_measure_csv(ib));
        session.emit(session.command("discrepancy", {{"a", file_a}, {"b", file_b}}),
                     {{"discrepancy", v}, {"dictionary_version", kDiscrepancyDictionaryVersion}});
        return kOk;
      };
    });
  }
  {
    auto* sub = add("poincare", "Poincare series at a repelling fixed point");
    sub->add_option("map", map_text)->required();
    sub->add_option("--x0", x0_text, "fixed point, \"re,im\" or a number")->required();
    sub->add_option("--order", order)->capture_default_str();
    sub->callback([&] {
      action = [&] {
        const auto s = poincare_series(ComplexMap(parse_rational_map(map_text)), parse_complex(x0_text), order);
        json coeffs = json::array();
        for (const auto& c : s.coeffs) coeffs.push_back({c.real(), c.imag()});
        session.emit(session.command("poincare", {{"map", map_text}, {"x0", x0_text}, {"order", std::to_string(order)}}),
                     {{"x0", {s.x0.real(), s.x0.imag()}},
                      {"lambda", {s.lambda.real(), s.lambda.imag()}},
                      {"coeffs", coeffs},
                      {"radius", s.radius},
                      {"residual", s.residual}});
        return kOk;
      };
    });
  }
  {
    auto* sub = add("germ-check", "max |h(f^n) - g^m(h)| on a disc around x0");
    sub->add_option("--f", f_text)->required();
    sub->add_option("--g", g_text)->required();
    sub->add_option("--n", n_iter)->capture_default_str();
    sub->add_option("--m", m_iter)->capture_default_str();
    sub->add_option("--germ", h_text, "polynomial germ h")->capture_default_str();
    sub->add_option("--x0", x0_text)->capture_default_str();
    sub->add_option("--radius", radius)->capture_default_str();
    sub->callback([&] {
      action = [&] {
        const Poly h = parse_poly(h_text);
        const cplx x0 = parse_complex(x0_text);
        std::vector<cplx> hc;
        if (h.degree() < 1) {
          hc.push_back(h.is_zero() ? 0.0 : h.coeff(0).rational().get_d());
        } else {
          hc = taylor_coefficients(ComplexMap(RationalMap(h)), x0, h.degree());
        }
        const double res = germ_equality_residual(ComplexMap(parse_rational_map(f_text)), ComplexMap(parse_rational_map(g_text)),
                                                  n_iter, m_iter, hc, x0, radius);
        session.emit(session.command("germ-check", {{"f", f_text},
                                                    {"g", g_text},
                                                    {"n", std::to_string(n_iter)},
                                                    {"m", std::to_string(m_iter)},
                                                    {"germ", h_text},
                                                    {"x0", x0_text},
                                                    {"radius", format_double(radius)}}),
                     {{"residual", res}, {"below_tol", res < g.tol}});
        return kOk;
      };
    });
  }
  {
    auto* sub = add("julia-render", "grayscale Julia set image (binary PGM)");
    sub->add_option("map", map_text)->required();
    sub->add_option("--resolution", resolution)->capture_default_str();
    sub->add_option("--iterations", iterations)->capture_default_str();
    sub->add_option("--center", center_text, "window centre \"re,im\"")->capture_default_str();
    sub->add_option("--radius", window_radius, "window half-width; 0 picks one")->capture_default_str();
    sub->callback([&] {
      action = [&] {
        const auto img = julia_render(ComplexMap(parse_rational_map(map_text)), resolution, iterations,
                                      RenderWindow{parse_complex(center_text), window_radius});
        const auto c = session.command("julia-render", {{"map", map_text},
                                                        {"resolution", std::to_string(resolution)},
                                                        {"iterations", std::to_string(iterations)},
                                                        {"center", center_text},
                                                        {"radius", format_double(window_radius)}});
        write_pgm(session.sink(), img, command_to_json(c).dump());
        return kOk;
      };
    });
  }

  // Batch scenarios.
  std::string scenario, params_text = "{}";
  bool list = false;
  {
    auto* sub = add("experiment", "run a named scenario; exit code 1 when a check fails");
    sub->add_option("scenario", scenario);
    sub->add_option("--params", params_text, "JSON object of scenario parameters")->capture_default_str();
    sub->add_flag("--list", list, "list scenario names");
    sub->callback([&] {
      action = [&] {
        if (list || scenario.empty()) {
          for (const auto& n : experiment_names()) session.sink() << n << '\n';
          return scenario.empty() && !list ? kUsage : kOk;
        }
        json params = json::parse(params_text);
        if (!params.contains("seed")) params["seed"] = g.seed;
        const auto report = run_experiment({scenario, params});
        std::cerr << scenario << ": " << (report.passed() ? "PASS" : "FAIL") << " in " << report.seconds << " s\n";
        session.emit(session.command("experiment", {{"scenario", scenario}, {"params", params.dump()}}), report.to_json());
        return report.passed() ? kOk : kChecksFailed;
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }
  try {
    return action ? action() : kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "bad JSON: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
