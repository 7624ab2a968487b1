#include "indeflll/numerics.hpp"

#include <stdexcept>

namespace indef {

Int floor_of(const Rat& x) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

Int ceil_of(const Rat& x) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

Int nearest_int(const Rat& x) {
  Int fl = floor_of(x);
  Rat frac = x - Rat(fl);
  static const Rat half(1, 2);
  if (frac < half) return fl;
  if (frac > half) return fl + 1;
  return x > 0 ? fl : Int(fl + 1);
}

Int isqrt(const Int& x) {
  if (x < 0) throw std::domain_error("isqrt of a negative integer");
  Int r;
  mpz_sqrt(r.get_mpz_t(), x.get_mpz_t());
  return r;
}

std::optional<Rat> is_rational_square(const Rat& x) {
  if (x < 0) return std::nullopt;
  const Int& n = x.get_num();
  const Int& d = x.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
  Rat r(isqrt(n), isqrt(d));
  r.canonicalize();
  return r;
}

std::strong_ordering cmp_with_sqrt(const Rat& p, const Rat& q, const Rat& D) {
  if (D < 0) throw std::domain_error("cmp_with_sqrt: negative radicand");
  int sp = sgn(p);
  int sq = D == 0 ? 0 : sgn(q);
  if (sp != sq) return sp <=> sq;
  if (sp == 0) return std::strong_ordering::equal;
  Rat lhs = p * p;
  Rat rhs = q * q * D;
  int c = cmp(lhs, rhs);
  if (sp < 0) c = -c;
  return c <=> 0;
}

Int floor_plus_sqrt(const Rat& a, const Rat& E) {
  if (E < 0) throw std::domain_error("floor_plus_sqrt: negative radicand");
  // floor(sqrt(E)) == isqrt(floor(E)), so the answer is n0 or n0 + 1.
  Int s = isqrt(floor_of(E));
  Int n = floor_of(a + Rat(s));
  // n + 1 <= a + sqrt(E)  <=>  (n + 1 - a) - sqrt(E) <= 0
  if (cmp_with_sqrt(Rat(n + 1) - a, 1, E) <= 0) n += 1;
  return n;
}

Int ceil_minus_sqrt(const Rat& a, const Rat& E) { return -floor_plus_sqrt(-a, E); }

bool is_integral(const Rat& x) { return x.get_den() == 1; }

Rat pow(const Rat& x, unsigned long e) {
  Rat r;
  mpz_pow_ui(r.get_num_mpz_t(), x.get_num_mpz_t(), e);
  mpz_pow_ui(r.get_den_mpz_t(), x.get_den_mpz_t(), e);
  r.canonicalize();
  return r;
}

std::size_t bit_length(const Rat& x) {
  std::size_t n = x == 0 ? 0 : mpz_sizeinbase(x.get_num_mpz_t(), 2);
  return n + mpz_sizeinbase(x.get_den_mpz_t(), 2) - 1;
}

Int parse_int(std::string_view s) {
  std::string str(s);
  if (!str.empty() && str.front() == '+') str.erase(0, 1);
  Int r;
  if (str.empty() || r.set_str(str, 10) != 0) throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  return r;
}

Rat parse_rational(std::string_view s) {
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rat(parse_int(s));
  Int num = parse_int(s.substr(0, slash));
  Int den = parse_int(s.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator: '" + std::string(s) + "'");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

std::string to_string(const Int& x) { return x.get_str(); }
std::string to_string(const Rat& x) { return x.get_str(); }

std::string to_decimal(const Rat& x, unsigned digits) {
  Int scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  Rat scaled = abs(x) * Rat(scale);
  Int t = floor_of(scaled);
  std::string body = t.get_str();
  if (digits > 0) {
    if (body.size() <= digits) body.insert(0, digits + 1 - body.size(), '0');
    body.insert(body.size() - digits, ".");
  }
  return (x < 0 ? "-" : "") + body;
}

}  // namespace indef
