#pragma once

#include <gmpxx.h>

#include <Eigen/Core>

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace Eigen {

template<>
struct NumTraits<mpz_class> : GenericNumTraits<mpz_class> {
  typedef mpz_class Real;
  typedef mpq_class NonInteger;
  typedef mpz_class Nested;
  typedef mpz_class Literal;
  enum {
    IsInteger = 1,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100
  };
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
};

template<>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  typedef mpq_class Real;
  typedef mpq_class NonInteger;
  typedef mpq_class Nested;
  typedef mpq_class Literal;
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100
  };
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace indef {

using Int = mpz_class;
using Rat = mpq_class;

template<typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template<typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;
using IntVector = Vector<Int>;
using RatVector = Vector<Rat>;

inline int sgn(const Int& x) { return mpz_sgn(x.get_mpz_t()); }
inline int sgn(const Rat& x) { return mpq_sgn(x.get_mpq_t()); }

Int floor_of(const Rat& x);
Int ceil_of(const Rat& x);

/// Closest integer; ties go toward zero.
Int nearest_int(const Rat& x);

Int isqrt(const Int& x);

/// r with r*r == x and r >= 0, if x is the square of a rational.
std::optional<Rat> is_rational_square(const Rat& x);

/// Exact sign of p - q*sqrt(D). Throws std::domain_error when D < 0.
std::strong_ordering cmp_with_sqrt(const Rat& p, const Rat& q, const Rat& D);

/// floor(a + sqrt(E)) for E >= 0.
Int floor_plus_sqrt(const Rat& a, const Rat& E);
/// ceil(a - sqrt(E)) for E >= 0.
Int ceil_minus_sqrt(const Rat& a, const Rat& E);

bool is_integral(const Rat& x);
Rat pow(const Rat& x, unsigned long e);
std::size_t bit_length(const Rat& x);

Int parse_int(std::string_view s);
/// Accepts "n" or "p/q".
Rat parse_rational(std::string_view s);
std::string to_string(const Int& x);
std::string to_string(const Rat& x);

/// Decimal approximation with `digits` fractional digits, truncated.
std::string to_decimal(const Rat& x, unsigned digits);

template<typename Scalar>
RatMatrix to_rational(const Matrix<Scalar>& m) {
  RatMatrix r(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = Rat(m(i, j));
  return r;
}

}  // namespace indef
