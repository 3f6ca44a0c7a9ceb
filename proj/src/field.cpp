#include "splitdyn/field.hpp"

#include <atomic>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <sstream>

#include <Eigen/Dense>

#include "splitdyn/arith.hpp"
#include "splitdyn/errors.hpp"

namespace splitdyn {

namespace {

using QVec = std::vector<mpq_class>;

std::atomic<int> next_field_id{1};

void trim(QVec& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

QVec qmul(const QVec& a, const QVec& b) {
  if (a.empty() || b.empty()) return {};
  QVec r(a.size() + b.size() - 1, mpq_class(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}

QVec qsub(const QVec& a, const QVec& b) {
  QVec r(std::max(a.size(), b.size()), mpq_class(0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

// Quotient and remainder over Q; b nonzero.
std::pair<QVec, QVec> qdivmod(QVec a, const QVec& b) {
  trim(a);
  if (a.size() < b.size()) return {{}, a};
  QVec q(a.size() - b.size() + 1, mpq_class(0));
  const mpq_class& lead = b.back();
  while (!a.empty() && a.size() >= b.size()) {
    const std::size_t shift = a.size() - b.size();
    mpq_class coef = a.back() / lead;
    q[shift] = coef;
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= coef * b[i];
    a.pop_back();
    trim(a);
  }
  trim(q);
  return {q, a};
}

// Reduce modulo the monic modulus, pad to `n` coordinates.
QVec reduce(QVec v, const QVec& modulus) {
  trim(v);
  const std::size_t n = modulus.size() - 1;
  for (std::size_t k = v.size(); k-- > n;) {
    if (v[k] == 0) continue;
    mpq_class c = v[k];
    for (std::size_t i = 0; i <= n; ++i) v[k - n + i] -= c * modulus[i];
  }
  v.resize(n, mpq_class(0));
  return v;
}


// Continued-fraction approximation with bounded denominator.
std::optional<mpq_class> rationalise(double x) {
  if (!std::isfinite(x) || std::abs(x) > 1e12) return std::nullopt;
  long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int it = 0; it < 40; ++it) {
    const double a = std::floor(r);
    if (std::abs(a) > 1e12) break;
    const long ai = static_cast<long>(a);
    const long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > 1000000000L) break;
    h0 = h1, h1 = h2, k0 = k1, k1 = k2;
    if (std::abs(x - static_cast<double>(h1) / static_cast<double>(k1)) <= 1e-9 * std::max(1.0, std::abs(x))) {
      mpq_class q(h1, k1);
      q.canonicalize();
      return q;
    }
    if (r == a) break;
    r = 1.0 / (r - a);
  }
  return std::nullopt;
}

using cd = std::complex<double>;

cd embed(const QVec& coords, cd theta) {
  cd acc = 0;
  for (std::size_t i = coords.size(); i-- > 0;) acc = acc * theta + coords[i].get_d();
  return acc;
}

// Roots of x^k = value in an extension field, found by choosing a k-th root
// at each complex embedding, solving the Vandermonde system for the
// coordinates, rounding to rationals and verifying exactly. Embeddings that
// come in conjugate pairs share one choice; real embeddings admit only real
// roots. Gives up (returning what was found) above `max_combinations`.
std::vector<FieldElement> embedding_roots(const FieldElement& value, long k, long max_combinations = 200000) {
  const FieldPtr& field = value.field();
  const QVec& m = field->modulus();
  const int n = field->degree();
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (i + 1 < n) companion(i + 1, i) = 1;
    companion(i, n - 1) = -m[static_cast<std::size_t>(i)].get_d();
  }
  const Eigen::VectorXcd theta = Eigen::EigenSolver<Eigen::MatrixXd>(companion, false).eigenvalues();

  // Independent embeddings (real ones and one of each conjugate pair).
  std::vector<int> free_index, partner(static_cast<std::size_t>(n), -1);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (int j = 0; j < n; ++j) {
    if (used[static_cast<std::size_t>(j)]) continue;
    used[static_cast<std::size_t>(j)] = true;
    free_index.push_back(j);
    if (std::abs(theta[j].imag()) <= 1e-9 * std::max(1.0, std::abs(theta[j]))) continue;
    int best = -1;
    for (int i = 0; i < n; ++i)
      if (!used[static_cast<std::size_t>(i)] && (best < 0 || std::abs(theta[i] - std::conj(theta[j])) < std::abs(theta[best] - std::conj(theta[j]))))
        best = i;
    if (best < 0) return {};
    used[static_cast<std::size_t>(best)] = true;
    partner[static_cast<std::size_t>(best)] = j;
  }

  std::vector<std::vector<cd>> choices;
  long combinations = 1;
  for (int j : free_index) {
    const cd a = embed(value.coords(), theta[j]);
    const bool real = partner[static_cast<std::size_t>(j)] < 0 &&
                      std::abs(theta[j].imag()) <= 1e-9 * std::max(1.0, std::abs(theta[j]));
    std::vector<cd> c;
    const double mod = std::pow(std::abs(a), 1.0 / static_cast<double>(k));
    const double arg = std::arg(a);
    for (long l = 0; l < k; ++l) {
      const cd z = std::polar(mod, (arg + 2 * M_PI * static_cast<double>(l)) / static_cast<double>(k));
      if (real && std::abs(z.imag()) > 1e-7 * std::max(1.0, mod)) continue;
      c.push_back(real ? cd(z.real(), 0) : z);
    }
    if (c.empty()) return {};
    combinations *= static_cast<long>(c.size());
    if (combinations > max_combinations) return {};
    choices.push_back(std::move(c));
  }

  Eigen::MatrixXcd V(n, n);
  for (int j = 0; j < n; ++j) {
    cd p = 1;
    for (int i = 0; i < n; ++i, p *= theta[j]) V(j, i) = p;
  }
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(V);

  std::vector<FieldElement> found;
  std::vector<std::size_t> pick(choices.size(), 0);
  for (long c = 0; c < combinations; ++c) {
    Eigen::VectorXcd s(n);
    for (std::size_t f = 0; f < free_index.size(); ++f) s[free_index[f]] = choices[f][pick[f]];
    for (int j = 0; j < n; ++j)
      if (partner[static_cast<std::size_t>(j)] >= 0) s[j] = std::conj(s[partner[static_cast<std::size_t>(j)]]);
    const Eigen::VectorXcd r = lu.solve(s);
    QVec coords;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      const auto q = rationalise(r[i].real());
      ok = q.has_value() && std::abs(r[i].imag()) <= 1e-6 * std::max(1.0, std::abs(r[i]));
      if (ok) coords.push_back(*q);
    }
    if (ok) {
      FieldElement cand(field, coords);
      if (cand.pow(k) == value && std::find(found.begin(), found.end(), cand) == found.end()) found.push_back(cand);
    }
    for (std::size_t f = 0; f < pick.size(); ++f) {
      if (++pick[f] < choices[f].size()) break;
      pick[f] = 0;
    }
  }
  return found;
}

}  // namespace

FieldPtr Field::rationals() {
  static const FieldPtr q(new Field(0, {}));
  return q;
}

FieldPtr Field::extension(std::vector<mpq_class> modulus) {
  trim(modulus);
  if (modulus.size() < 2) throw PreconditionViolated("extension modulus must be nonconstant");
  if (modulus.back() != 1) throw PreconditionViolated("extension modulus must be monic");
  const std::size_t deg = modulus.size() - 1;
  if (deg >= 2 && deg <= 3) {
    // Reducible in degree 2 or 3 iff there is a rational root. Clear
    // denominators and apply the rational root theorem.
    mpz_class lcm_den = 1;
    for (const auto& c : modulus) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), c.get_den().get_mpz_t());
    std::vector<mpz_class> z;
    for (const auto& c : modulus) z.push_back(mpz_class(c * lcm_den));
    auto has_root = [&](const mpq_class& r) {
      mpq_class acc = 0;
      for (std::size_t i = z.size(); i-- > 0;) acc = acc * r + z[i];
      return acc == 0;
    };
    if (z[0] == 0) throw PreconditionViolated("extension modulus is reducible (root 0)");
    for (const auto& p : divisors(z[0]))
      for (const auto& q : divisors(z.back()))
        for (int s : {1, -1})
          if (has_root(mpq_class(s * p, q)))
            throw PreconditionViolated("extension modulus is reducible over Q");
  }
  return FieldPtr(new Field(next_field_id++, std::move(modulus)));
}

std::string Field::describe() const {
  if (is_rational()) return "Q";
  std::ostringstream os;
  os << "Q[t]/(";
  bool first = true;
  for (std::size_t i = modulus_.size(); i-- > 0;) {
    if (modulus_[i] == 0) continue;
    if (!first) os << (modulus_[i] > 0 ? " + " : " - ");
    mpq_class a = first ? modulus_[i] : abs(modulus_[i]);
    if (i == 0 || a != 1) os << (a == -1 && i > 0 ? "-" : a.get_str()) << (i > 0 && a != -1 ? "*" : "");
    if (i > 0) os << "t" << (i > 1 ? "^" + std::to_string(i) : "");
    first = false;
  }
  os << ")";
  return os.str();
}

void require_same_field(const FieldPtr& a, const FieldPtr& b, const char* where) {
  if (a.get() != b.get() && a->id() != b->id())
    throw FieldMismatch(std::string(where) + ": operands live in different fields (" + a->describe() +
                        " vs " + b->describe() + ")");
}

FieldElement::FieldElement() : FieldElement(Field::rationals(), mpq_class(0)) {}

FieldElement::FieldElement(FieldPtr field, mpq_class value) : field_(std::move(field)) {
  value.canonicalize();
  coords_.assign(static_cast<std::size_t>(field_->degree()), mpq_class(0));
  coords_[0] = std::move(value);
}

FieldElement::FieldElement(FieldPtr field, std::vector<mpq_class> coords) : field_(std::move(field)) {
  for (auto& c : coords) c.canonicalize();
  if (field_->is_rational()) {
    trim(coords);
    if (coords.size() > 1) throw PreconditionViolated("Q element with more than one coordinate");
    coords.resize(1, mpq_class(0));
    coords_ = std::move(coords);
  } else {
    coords_ = reduce(std::move(coords), field_->modulus());
  }
}

FieldElement FieldElement::generator(const FieldPtr& field) {
  if (field->is_rational()) throw PreconditionViolated("Q has no extension generator t");
  return {field, QVec{mpq_class(0), mpq_class(1)}};
}

void FieldElement::check_field(const FieldElement& other) const {
  require_same_field(field_, other.field_, "field arithmetic");
}

bool FieldElement::is_zero() const {
  for (const auto& c : coords_)
    if (c != 0) return false;
  return true;
}

bool FieldElement::is_one() const {
  if (coords_[0] != 1) return false;
  for (std::size_t i = 1; i < coords_.size(); ++i)
    if (coords_[i] != 0) return false;
  return true;
}

bool FieldElement::is_rational() const {
  for (std::size_t i = 1; i < coords_.size(); ++i)
    if (coords_[i] != 0) return false;
  return true;
}

const mpq_class& FieldElement::rational() const {
  if (!is_rational()) throw PreconditionViolated("element " + to_string() + " is not rational");
  return coords_[0];
}

FieldElement FieldElement::operator-() const {
  FieldElement r = *this;
  for (auto& c : r.coords_) c = -c;
  return r;
}

FieldElement& FieldElement::operator+=(const FieldElement& rhs) {
  check_field(rhs);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += rhs.coords_[i];
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& rhs) {
  check_field(rhs);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= rhs.coords_[i];
  return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& rhs) {
  check_field(rhs);
  if (field_->is_rational()) {
    coords_[0] *= rhs.coords_[0];
    return *this;
  }
  coords_ = reduce(qmul(coords_, rhs.coords_), field_->modulus());
  return *this;
}

FieldElement& FieldElement::operator/=(const FieldElement& rhs) {
  check_field(rhs);
  return *this *= rhs.inverse();
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) throw DivisionByZero("inverse of zero field element");
  if (field_->is_rational()) return {field_, mpq_class(1) / coords_[0]};
  // Extended Euclid: find s with s*a = 1 mod m.
  QVec r0 = field_->modulus(), r1 = coords_;
  trim(r1);
  QVec s0, s1{mpq_class(1)};
  while (!r1.empty() && r1.size() > 1) {
    auto [q, r] = qdivmod(r0, r1);
    QVec s2 = qsub(s0, qmul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r1.empty()) throw PreconditionViolated("extension modulus is not irreducible: zero divisor found");
  for (auto& c : s1) c /= r1[0];
  return {field_, s1};
}

FieldElement FieldElement::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  FieldElement result = one(field_);
  FieldElement base = *this;
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

bool operator==(const FieldElement& a, const FieldElement& b) {
  return a.field_->id() == b.field_->id() && a.coords_ == b.coords_;
}

std::size_t FieldElement::bit_size() const {
  std::size_t bits = 0;
  for (const auto& c : coords_) bits += splitdyn::bit_size(c);
  return bits;
}

std::string FieldElement::to_string() const {
  if (is_rational()) return coords_[0].get_str();
  std::ostringstream os;
  os << "(";
  bool first = true;
  for (std::size_t i = coords_.size(); i-- > 0;) {
    const mpq_class& c = coords_[i];
    if (c == 0) continue;
    if (!first) os << (c > 0 ? " + " : " - ");
    mpq_class a = first ? c : mpq_class(abs(c));
    if (i == 0) {
      os << a.get_str();
    } else {
      if (a == -1) os << "-";
      else if (a != 1) os << a.get_str() << "*";
      os << "t" << (i > 1 ? "^" + std::to_string(i) : "");
    }
    first = false;
  }
  os << ")";
  return os.str();
}

namespace {

std::vector<FieldElement> compute_roots_of_unity(const FieldPtr& field) {
  const FieldElement one = FieldElement::one(field);
  std::vector<FieldElement> group{one, -one};
  if (field->is_rational()) return group;
  // Any root of unity of order w in K has phi(w) <= [K:Q]; phi(w) >= sqrt(w/2),
  // so w <= 2 n^2 bounds the orders worth testing.
  const long n = field->degree();
  const long max_order = std::max(2L, 2 * n * n);
  auto has_finite_order = [&](const FieldElement& r) {
    FieldElement p = r;
    for (long k = 1; k <= max_order; ++k) {
      if (p.is_one()) return true;
      p *= r;
    }
    return false;
  };
  auto contains = [&](const FieldElement& r) {
    for (const auto& g : group)
      if (g == r) return true;
    return false;
  };
  FieldElement tj = one;
  for (long j = 1; j < n; ++j) {
    tj *= FieldElement::generator(field);
    for (const FieldElement& cand : {tj, -tj}) {
      if (contains(cand) || !has_finite_order(cand)) continue;
      // Close the group under multiplication by the new generator.
      std::vector<FieldElement> frontier = group;
      for (std::size_t i = 0; i < frontier.size(); ++i) {
        FieldElement prod = frontier[i] * cand;
        if (!contains(prod)) {
          group.push_back(prod);
          frontier.push_back(prod);
        }
      }
    }
  }
  // Roots of unity not of the form +-t^j, e.g. (-1 + t)/2 when t^2 = -3.
  for (long w = 3; w <= max_order; ++w)
    for (const auto& cand : embedding_roots(one, w)) {
      if (contains(cand)) continue;
      std::vector<FieldElement> frontier = group;
      for (std::size_t i = 0; i < frontier.size(); ++i) {
        FieldElement prod = frontier[i] * cand;
        if (!contains(prod)) {
          group.push_back(prod);
          frontier.push_back(prod);
        }
      }
    }
  return group;
}

}  // namespace

std::vector<FieldElement> roots_of_unity(const FieldPtr& field) {
  if (field->is_rational()) return compute_roots_of_unity(field);
  static std::mutex lock;
  static std::map<int, std::vector<FieldElement>> cache;
  {
    std::lock_guard<std::mutex> guard(lock);
    if (auto it = cache.find(field->id()); it != cache.end()) return it->second;
  }
  auto group = compute_roots_of_unity(field);
  std::lock_guard<std::mutex> guard(lock);
  cache.emplace(field->id(), group);
  return group;
}

std::vector<FieldElement> roots_of_unity(const FieldPtr& field, long k) {
  std::vector<FieldElement> out;
  for (const auto& r : roots_of_unity(field))
    if (r.pow(k).is_one()) out.push_back(r);
  return out;
}

std::optional<FieldElement> nth_root(const FieldElement& value, long k) {
  if (k <= 0) throw PreconditionViolated("nth_root: k must be positive");
  if (k == 1) return value;
  if (value.is_zero()) return value;
  const FieldPtr& field = value.field();
  if (!value.is_rational()) {
    const auto r = embedding_roots(value, k);
    if (r.empty()) return std::nullopt;
    return r.front();
  }
  const mpq_class& q = value.rational();
  auto base = rational_root(abs(q), static_cast<unsigned long>(k));
  if (!base) {
    if (field->is_rational()) return std::nullopt;
    const auto r = embedding_roots(value, k);
    if (r.empty()) return std::nullopt;
    return r.front();
  }
  FieldElement b(field, *base);
  if (q > 0) return b;
  // Negative value: need a root of unity z with z^k = -1.
  if (k % 2 == 1) return -b;
  for (const auto& z : roots_of_unity(field))
    if ((z.pow(k) + FieldElement::one(field)).is_zero()) return b * z;
  return std::nullopt;
}

}  // namespace splitdyn
