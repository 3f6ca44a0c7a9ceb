#include "splitdyn/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>

#include "splitdyn/errors.hpp"

namespace splitdyn {

namespace {

constexpr long kMaxExponent = 100000;

struct Node {
  enum Kind { Number, Variable, Add, Sub, Mul, Div, Neg, Pow } kind;
  mpq_class value;
  char var = 0;
  long exponent = 0;
  std::unique_ptr<Node> lhs, rhs;
  int line = 1, column = 1;
};

using NodePtr = std::unique_ptr<Node>;

// Recursive descent. Implicit products bind tighter than * and /, so
// "1/2x" reads as 1/(2x).
class Parser {
 public:
  Parser(const std::string& text, std::string variables) : s_(text), vars_(std::move(variables)) {}

  NodePtr parse_expression_only() {
    auto e = expression();
    skip_space();
    if (pos_ < s_.size()) fail_here("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

  // "lhs = rhs" becomes lhs - rhs.
  NodePtr parse_equation() {
    auto e = expression();
    skip_space();
    if (peek() == '=') {
      auto [l, c] = here();
      ++pos_;
      auto r = expression();
      e = binary(Node::Sub, std::move(e), std::move(r), l, c);
    }
    skip_space();
    if (pos_ < s_.size()) fail_here("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  std::pair<int, int> here() const {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < s_.size(); ++i) {
      if (s_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return {line, col};
  }

  [[noreturn]] void fail_here(const std::string& what) const {
    auto [l, c] = here();
    throw ParseError(what, l, c);
  }

  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  char peek() {
    skip_space();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  static NodePtr binary(Node::Kind k, NodePtr a, NodePtr b, int line, int column) {
    auto n = std::make_unique<Node>();
    n->kind = k;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    n->line = line;
    n->column = column;
    return n;
  }

  NodePtr expression() {
    auto e = term();
    for (char c = peek(); c == '+' || c == '-'; c = peek()) {
      auto [l, col] = here();
      ++pos_;
      e = binary(c == '+' ? Node::Add : Node::Sub, std::move(e), term(), l, col);
    }
    return e;
  }

  NodePtr term() {
    auto e = product();
    for (char c = peek(); c == '*' || c == '/'; c = peek()) {
      auto [l, col] = here();
      ++pos_;
      e = binary(c == '*' ? Node::Mul : Node::Div, std::move(e), product(), l, col);
    }
    return e;
  }

  bool starts_atom(char c) const {
    return std::isdigit(static_cast<unsigned char>(c)) || c == '(' || std::isalpha(static_cast<unsigned char>(c));
  }

  NodePtr product() {
    auto e = unary();
    while (starts_atom(peek())) {
      auto [l, col] = here();
      e = binary(Node::Mul, std::move(e), power(), l, col);
    }
    return e;
  }

  NodePtr unary() {
    const char c = peek();
    if (c == '-' || c == '+') {
      auto [l, col] = here();
      ++pos_;
      auto inner = unary();
      if (c == '+') return inner;
      auto n = std::make_unique<Node>();
      n->kind = Node::Neg;
      n->lhs = std::move(inner);
      n->line = l;
      n->column = col;
      return n;
    }
    return power();
  }

  NodePtr power() {
    auto base = atom();
    if (peek() != '^') return base;
    auto [l, col] = here();
    ++pos_;
    bool negative = false;
    if (peek() == '-' || peek() == '+') negative = s_[pos_++] == '-';
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail_here("exponent must be an integer literal");
    if (pos_ - start > 9) fail_here("exponent too large");
    long e = std::stol(s_.substr(start, pos_ - start));
    if (e > kMaxExponent) throw ResourceLimit("exponent " + std::to_string(e) + " exceeds " + std::to_string(kMaxExponent));
    auto n = std::make_unique<Node>();
    n->kind = Node::Pow;
    n->lhs = std::move(base);
    n->exponent = negative ? -e : e;
    n->line = l;
    n->column = col;
    return n;
  }

  NodePtr atom() {
    const char c = peek();
    auto [l, col] = here();
    auto n = std::make_unique<Node>();
    n->line = l;
    n->column = col;
    if (c == '(') {
      ++pos_;
      auto inner = expression();
      if (peek() != ')') fail_here("expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ < s_.size() && s_[pos_] == '.') fail_here("decimal literals are not exact; write p/q");
      n->kind = Node::Number;
      n->value = mpq_class(mpz_class(s_.substr(start, pos_ - start)));
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < s_.size() && std::isalnum(static_cast<unsigned char>(s_[end]))) ++end;
      const std::string word = s_.substr(pos_, end - pos_);
      if (word.size() != 1 || vars_.find(word[0]) == std::string::npos) fail_here("unsupported symbol '" + word + "'");
      pos_ = end;
      n->kind = Node::Variable;
      n->var = word[0];
      return n;
    }
    if (c == '\0') fail_here("unexpected end of input");
    fail_here("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  std::string vars_;
  std::size_t pos_ = 0;
};

std::string position(const Node& n) { return std::to_string(n.line) + ":" + std::to_string(n.column); }

// Quotients of polynomials in x over a field, kept reduced with monic
// denominator.
struct Fraction {
  Poly num, den;

  static Fraction of(Poly p) {
    Poly one = Poly::constant(FieldElement::one(p.field()));
    return {std::move(p), std::move(one)};
  }

  void reduce() {
    if (num.is_zero()) {
      den = Poly::constant(FieldElement::one(den.field()));
      return;
    }
    const Poly g = gcd(num, den);
    if (g.degree() > 0) {
      num = divmod(num, g).first;
      den = divmod(den, g).first;
    }
    const FieldElement lead = den.leading();
    if (!lead.is_one()) {
      num = lead.inverse() * num;
      den = lead.inverse() * den;
    }
  }
};

Fraction eval_fraction(const Node& n, const FieldPtr& field) {
  switch (n.kind) {
    case Node::Number:
      return Fraction::of(Poly::constant(FieldElement(field, n.value)));
    case Node::Variable:
      if (n.var == 'x') return Fraction::of(Poly::x(field));
      if (field->is_rational()) throw ParseError("'t' needs an extension field", n.line, n.column);
      return Fraction::of(Poly::constant(FieldElement::generator(field)));
    case Node::Neg: {
      auto a = eval_fraction(*n.lhs, field);
      return {-a.num, a.den};
    }
    case Node::Add:
    case Node::Sub: {
      auto a = eval_fraction(*n.lhs, field);
      auto b = eval_fraction(*n.rhs, field);
      Fraction r{n.kind == Node::Add ? a.num * b.den + b.num * a.den : a.num * b.den - b.num * a.den, a.den * b.den};
      r.reduce();
      return r;
    }
    case Node::Mul: {
      auto a = eval_fraction(*n.lhs, field);
      auto b = eval_fraction(*n.rhs, field);
      Fraction r{a.num * b.num, a.den * b.den};
      r.reduce();
      return r;
    }
    case Node::Div: {
      auto a = eval_fraction(*n.lhs, field);
      auto b = eval_fraction(*n.rhs, field);
      if (b.num.is_zero()) throw DivisionByZero("division by zero at " + position(n));
      Fraction r{a.num * b.den, a.den * b.num};
      r.reduce();
      return r;
    }
    case Node::Pow: {
      auto a = eval_fraction(*n.lhs, field);
      long e = n.exponent;
      if (e < 0) {
        if (a.num.is_zero()) throw DivisionByZero("zero to a negative power at " + position(n));
        std::swap(a.num, a.den);
        e = -e;
      }
      Fraction r{pow(a.num, static_cast<int>(e)), pow(a.den, static_cast<int>(e))};
      r.reduce();
      return r;
    }
  }
  throw Error("unreachable");
}

using Terms = std::map<std::pair<int, int>, mpq_class>;

void prune(Terms& t) {
  for (auto it = t.begin(); it != t.end();) it = it->second == 0 ? t.erase(it) : std::next(it);
}

Terms mul(const Terms& a, const Terms& b) {
  Terms r;
  for (const auto& [ka, va] : a)
    for (const auto& [kb, vb] : b) r[{ka.first + kb.first, ka.second + kb.second}] += va * vb;
  prune(r);
  return r;
}

Terms eval_terms(const Node& n) {
  switch (n.kind) {
    case Node::Number:
      return n.value == 0 ? Terms{} : Terms{{{0, 0}, n.value}};
    case Node::Variable:
      return n.var == 'x' ? Terms{{{1, 0}, 1}} : Terms{{{0, 1}, 1}};
    case Node::Neg: {
      auto a = eval_terms(*n.lhs);
      for (auto& [k, v] : a) v = -v;
      return a;
    }
    case Node::Add:
    case Node::Sub: {
      auto a = eval_terms(*n.lhs);
      for (const auto& [k, v] : eval_terms(*n.rhs)) a[k] += n.kind == Node::Add ? v : mpq_class(-v);
      prune(a);
      return a;
    }
    case Node::Mul:
      return mul(eval_terms(*n.lhs), eval_terms(*n.rhs));
    case Node::Div: {
      auto a = eval_terms(*n.lhs);
      const auto b = eval_terms(*n.rhs);
      if (b.empty()) throw DivisionByZero("division by zero at " + position(n));
      if (b.size() != 1 || b.begin()->first != std::make_pair(0, 0))
        throw ParseError("curve equations must be polynomial", n.line, n.column);
      for (auto& [k, v] : a) v /= b.begin()->second;
      return a;
    }
    case Node::Pow: {
      if (n.exponent < 0) throw ParseError("negative exponent in a curve equation", n.line, n.column);
      const auto base = eval_terms(*n.lhs);
      Terms r{{{0, 0}, 1}};
      for (long k = 0; k < n.exponent; ++k) r = mul(r, base);
      return r;
    }
  }
  throw Error("unreachable");
}

std::vector<mpq_class> rational_coeffs(const Poly& p) {
  std::vector<mpq_class> out;
  for (const auto& c : p.coeffs()) {
    if (!c.is_rational()) throw FieldMismatch("rational maps need rational coefficients");
    out.push_back(c.rational());
  }
  return out;
}

std::string exact_string(const FieldElement& c) {
  if (c.is_rational()) return c.rational().get_str();
  std::string s = c.to_string();
  return s.substr(1, s.size() - 2);
}

}  // namespace

std::variant<Poly, RationalMap> parse_map(const std::string& text, const FieldPtr& field) {
  Parser parser(text, "xt");
  const auto tree = parser.parse_expression_only();
  Fraction f = eval_fraction(*tree, field);
  if (f.den.degree() == 0) return f.num;
  const auto qfield = Field::rationals();
  return RationalMap(Poly::from_rationals(qfield, rational_coeffs(f.num)),
                     Poly::from_rationals(qfield, rational_coeffs(f.den)));
}

Poly parse_poly(const std::string& text, const FieldPtr& field) {
  auto v = parse_map(text, field);
  if (auto* p = std::get_if<Poly>(&v)) return *p;
  throw PreconditionViolated("expected a polynomial, got " + std::get<RationalMap>(v).to_string());
}

RationalMap parse_rational_map(const std::string& text) {
  auto v = parse_map(text);
  if (auto* p = std::get_if<Poly>(&v)) {
    if (p->degree() < 1) throw PreconditionViolated("a map needs degree >= 1");
    return RationalMap(*p);
  }
  return std::get<RationalMap>(v);
}

BiCurve parse_curve(const std::string& text) {
  Parser parser(text, "xy");
  const auto tree = parser.parse_equation();
  const Terms t = eval_terms(*tree);
  if (t.empty()) throw PreconditionViolated("the zero polynomial does not define a curve");
  std::vector<std::tuple<int, int, mpq_class>> terms;
  for (const auto& [k, v] : t) terms.emplace_back(k.first, k.second, v);
  return curve_from_rationals(terms);
}

FieldPtr parse_field(const std::string& text) {
  std::string as_x = text;
  for (char& c : as_x) {
    if (c == 't') c = 'x';
    else if (c == 'x') c = '?';
  }
  const Poly m = parse_poly(as_x);
  if (m.degree() < 1) throw PreconditionViolated("field modulus must have degree >= 1");
  auto coeffs = rational_coeffs(m);
  const mpq_class lead = coeffs.back();
  for (auto& c : coeffs) c /= lead;
  return Field::extension(coeffs);
}

json field_to_json(const FieldPtr& field) {
  if (field->is_rational()) return {{"type", "Q"}};
  json mod = json::array();
  for (const auto& c : field->modulus()) mod.push_back(c.get_str());
  return {{"type", "extension"}, {"modulus", mod}};
}

FieldPtr field_from_json(const json& j) {
  if (j.at("type") == "Q") return Field::rationals();
  std::vector<mpq_class> m;
  for (const auto& c : j.at("modulus")) m.emplace_back(c.get<std::string>());
  for (auto& c : m) c.canonicalize();
  return Field::extension(m);
}

json poly_to_json(const Poly& p) {
  json coeffs = json::array();
  for (const auto& c : p.coeffs()) coeffs.push_back(exact_string(c));
  return {{"field", field_to_json(p.field())}, {"coeffs", coeffs}};
}

Poly poly_from_json(const json& j) {
  const FieldPtr field = j.contains("field") ? field_from_json(j.at("field")) : Field::rationals();
  std::vector<FieldElement> coeffs;
  for (const auto& c : j.at("coeffs")) {
    // Each coefficient is a constant expression in t.
    const Poly p = parse_poly(c.get<std::string>(), field);
    if (p.degree() > 0) throw PreconditionViolated("coefficient '" + c.get<std::string>() + "' is not a constant");
    coeffs.push_back(p.coeff(0));
  }
  return Poly(field, std::move(coeffs));
}

json map_to_json(const RationalMap& f) {
  json j{{"text", f.to_string()}, {"degree", f.degree()}, {"resultant", f.resultant().get_str()}};
  if (f.is_polynomial()) {
    j["poly"] = poly_to_json(f.as_poly());
  } else {
    j["numerator"] = poly_to_json(f.numerator());
    j["denominator"] = poly_to_json(f.denominator());
  }
  return j;
}

json linear_to_json(const LinearPoly& L) {
  return {{"a", exact_string(L.a())}, {"b", exact_string(L.b())}, {"text", L.to_string()}};
}

json curve_to_json(const BiCurve& C) {
  json mons = json::array();
  for (const auto& [i, j, c] : C.monomials()) mons.push_back(json::array({i, j, c.get_str()}));
  return {{"monomials", mons}, {"text", C.to_string()}};
}

BiCurve curve_from_json(const json& j) {
  std::vector<std::tuple<int, int, mpq_class>> terms;
  for (const auto& m : j.at("monomials")) {
    mpq_class c(m.at(2).get<std::string>());
    c.canonicalize();
    terms.emplace_back(m.at(0).get<int>(), m.at(1).get<int>(), c);
  }
  return curve_from_rationals(terms);
}

json height_to_json(const HeightValue& h) {
  json places = json::array();
  for (const auto& [v, lambda] : h.per_place) places.push_back({{"v", v.to_string()}, {"lambda", lambda}});
  return {{"value", h.value}, {"error", h.error_radius}, {"places", places}};
}

json complex_point_to_json(const ComplexPoint& p) {
  if (p.inverted && std::abs(p.w) < 1e-12) return "inf";
  const cplx v = p.value();
  return json::array({v.real(), v.imag()});
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void write_point(std::ostream& out, const ComplexPoint& p) {
  if (p.inverted && std::abs(p.w) == 0) {
    out << "inf,inf";
    return;
  }
  const cplx v = p.value();
  out << format_double(v.real()) << ',' << format_double(v.imag());
}

}  // namespace

void write_measure_csv(std::ostream& out, const EmpiricalMeasure& m, const std::string& comment) {
  if (!comment.empty()) out << "# " << comment << '\n';
  out << (m.dimension == 1 ? "re,im,weight\n" : "re1,im1,re2,im2,weight\n");
  for (std::size_t i = 0; i < m.size(); ++i) {
    write_point(out, m.x[i]);
    if (m.dimension == 2) {
      out << ',';
      write_point(out, m.y[i]);
    }
    out << ',' << format_double(m.weights[i]) << '\n';
  }
}

EmpiricalMeasure read_measure_csv(std::istream& in) {
  std::string line;
  int line_no = 0;
  do {
    if (!std::getline(in, line)) throw ParseError("missing measure header", line_no + 1, 1);
    ++line_no;
  } while (!line.empty() && line[0] == '#');
  EmpiricalMeasure m;
  if (line == "re,im,weight") m.dimension = 1;
  else if (line == "re1,im1,re2,im2,weight") m.dimension = 2;
  else throw ParseError("unknown measure header '" + line + "'", line_no, 1);
  const std::size_t fields = m.dimension == 1 ? 3 : 5;
  auto point = [](double re, double im) {
    if (std::isinf(re) || std::isinf(im)) return ComplexPoint::infinity();
    return ComplexPoint::from(cplx(re, im));
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      v.push_back(std::strtod(cell.c_str(), &end));
      if (end == cell.c_str()) throw ParseError("bad number '" + cell + "'", line_no, 1);
    }
    if (v.size() != fields) throw ParseError("expected " + std::to_string(fields) + " fields", line_no, 1);
    m.x.push_back(point(v[0], v[1]));
    if (m.dimension == 2) m.y.push_back(point(v[2], v[3]));
    m.weights.push_back(v.back());
  }
  return m;
}

void write_pgm(std::ostream& out, const GrayImage& image, const std::string& comment) {
  out << "P5\n";
  if (!comment.empty()) out << "# " << comment << '\n';
  out << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()), static_cast<std::streamsize>(image.pixels.size()));
}

GrayImage read_pgm(std::istream& in) {
  std::string magic;
  int maxval = 0;
  GrayImage img;
  auto skip_comments = [&] {
    in >> std::ws;
    while (in.peek() == '#') {
      std::string ignored;
      std::getline(in, ignored);
      in >> std::ws;
    }
  };
  in >> magic;
  skip_comments();
  in >> img.width;
  skip_comments();
  in >> img.height;
  skip_comments();
  in >> maxval;
  if (magic != "P5" || maxval != 255 || img.width <= 0 || img.height <= 0) throw ParseError("not an 8-bit P5 image", 1, 1);
  in.get();
  img.pixels.resize(static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height));
  in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  if (!in) throw ParseError("truncated image data", 1, 1);
  return img;
}

json command_to_json(const Command& c) {
  json args = json::object();
  for (const auto& [k, v] : c.arguments) args[k] = v;
  json j{{"subcommand", c.subcommand}, {"arguments", args},       {"seed", c.seed},
         {"tol", c.tol},               {"budget_bits", c.budget_bits}, {"max_steps", c.max_steps},
         {"samples", c.samples}};
  if (!c.output.empty()) j["output"] = c.output;
  return j;
}

}  // namespace splitdyn
