#pragma once

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace splitdyn {

class Field;
using FieldPtr = std::shared_ptr<const Field>;

/// The ambient field of exact scalars: Q itself, or Q[t]/(m(t)) for a monic
/// irreducible m declared by the caller. Fields are compared by handle, so two
/// separately declared extensions never mix even if their moduli agree.
class Field {
 public:
  static FieldPtr rationals();

  /// Declares Q[t]/(m). `modulus` is lowest degree first and must be monic of
  /// degree >= 1. Irreducibility is verified for degree <= 3 (no rational
  /// root) and trusted above that.
  static FieldPtr extension(std::vector<mpq_class> modulus);

  bool is_rational() const noexcept { return modulus_.empty(); }
  /// [K:Q].
  int degree() const noexcept { return is_rational() ? 1 : static_cast<int>(modulus_.size()) - 1; }
  int id() const noexcept { return id_; }
  const std::vector<mpq_class>& modulus() const noexcept { return modulus_; }
  std::string describe() const;

 private:
  Field(int id, std::vector<mpq_class> modulus) : id_(id), modulus_(std::move(modulus)) {}

  int id_;
  std::vector<mpq_class> modulus_;
};

/// An exact element of a Field. Rationals are always canonical (lowest terms,
/// positive denominator); extension elements are reduced mod m(t) and stored
/// as `degree()` rational coordinates in the power basis 1, t, t^2, ...
class FieldElement {
 public:
  /// Zero of Q.
  FieldElement();
  FieldElement(FieldPtr field, mpq_class value);
  FieldElement(FieldPtr field, long value) : FieldElement(std::move(field), mpq_class(value)) {}
  /// Element from power-basis coordinates; reduced mod m(t).
  FieldElement(FieldPtr field, std::vector<mpq_class> coords);

  static FieldElement zero(const FieldPtr& field) { return {field, mpq_class(0)}; }
  static FieldElement one(const FieldPtr& field) { return {field, mpq_class(1)}; }
  /// The class of t in Q[t]/(m); for Q this is an error.
  static FieldElement generator(const FieldPtr& field);

  const FieldPtr& field() const noexcept { return field_; }
  const std::vector<mpq_class>& coords() const noexcept { return coords_; }

  bool is_zero() const;
  bool is_one() const;
  bool is_rational() const;
  /// The rational value; throws PreconditionViolated unless is_rational().
  const mpq_class& rational() const;

  FieldElement operator-() const;
  FieldElement& operator+=(const FieldElement& rhs);
  FieldElement& operator-=(const FieldElement& rhs);
  FieldElement& operator*=(const FieldElement& rhs);
  FieldElement& operator/=(const FieldElement& rhs);
  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
  friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
  friend FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }

  FieldElement inverse() const;
  /// Integer power; negative exponents invert.
  FieldElement pow(long e) const;

  /// Same field and same value. Elements of different fields compare unequal.
  friend bool operator==(const FieldElement& a, const FieldElement& b);

  std::size_t bit_size() const;
  /// "3/2" for rationals, "(1/2*t + 3)" style for extension elements.
  std::string to_string() const;

 private:
  void check_field(const FieldElement& other) const;

  FieldPtr field_;
  std::vector<mpq_class> coords_;
};

/// Throws FieldMismatch unless both handles name the same field.
void require_same_field(const FieldPtr& a, const FieldPtr& b, const char* where);

/// All roots of unity that the enumeration finds in `field`, closed under
/// multiplication. For Q this is {1, -1}. For extensions the search tries
/// +-t^j for j < [K:Q], then roots of x^w = 1 (w <= 2[K:Q]^2) found through
/// the complex embeddings, and closes the group they generate. The embedding
/// search is capped, so in large fields an answer of {1, -1} is a
/// field-relative absence, not a proof. Results are cached per field.
std::vector<FieldElement> roots_of_unity(const FieldPtr& field);

/// Elements r found by roots_of_unity() with r^k = 1.
std::vector<FieldElement> roots_of_unity(const FieldPtr& field, long k);

/// Some k-th root of `value` in its field: exact rational radicals first,
/// then (in extensions) candidates read off the complex embeddings, rounded
/// to rationals and verified exactly. Absent when none is found.
std::optional<FieldElement> nth_root(const FieldElement& value, long k);

}  // namespace splitdyn
