#include "indeflll/qform.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace indef {

namespace {

const Transform2 kSwap{0, 1, -1, 0};

Transform2 upper(const Int& lambda) { return {1, lambda, 0, 1}; }
Transform2 lower(const Int& lambda) { return {1, 0, lambda, 1}; }

FormStep then(const FormStep& s, const Transform2& t) {
  return {apply(s.form, t), s.transform * t};
}

// delta for the step (a,b,c) -> (c, -b + 2c*delta, ...), c != 0, D > 0.
Int choose_delta(const BQForm& f, const Rat& D) {
  const Rat& b = f.b;
  const Rat& c = f.c;
  if (cmp_with_sqrt(abs(c), 1, D) > 0) {
    // -|c| < -b + 2c*delta <= |c|
    if (c > 0) return floor_of((b + c) / (2 * c));
    return ceil_of((b - c) / (2 * c));
  }
  // sqrt(D) - 2|c| < -b + 2c*delta < sqrt(D), upper bound inclusive for square D
  Rat a0 = b / (2 * c);
  Rat e = D / (4 * c * c);
  if (c > 0) return floor_plus_sqrt(a0, e);
  return ceil_minus_sqrt(a0, e);
}

// (a, b, 0) with b < 0 to (a', -b, 0) by moving to the other isotropic line.
FormStep isotropic_switch(const BQForm& f) {
  if (f.a == 0) return {apply(f, kSwap), kSwap};
  Int l;
  mpz_lcm(l.get_mpz_t(), f.a.get_den_mpz_t(), f.b.get_den_mpz_t());
  Int A = Rat(f.a * l).get_num();
  Int B = Rat(f.b * l).get_num();
  Int g = gcd(A, B);
  Int a1 = A / g, b1 = B / g;
  Int g2, s, t;
  mpz_gcdext(g2.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a1.get_mpz_t(), b1.get_mpz_t());
  Transform2 T{-s, b1, -t, -a1};
  BQForm out = apply(f, T);
  if (out.c != 0 || out.b != -f.b) throw std::logic_error("isotropic switch failed");
  return {out, T};
}

// (a, b, 0) with b = sqrt(D) > 0: bring a into [-b/2, b/2], then resolve the
// equality case into the b = 0 shape.
FormStep normalize_terminal(const BQForm& f) {
  Int lambda = nearest_int(-f.a / f.b);
  FormStep s{apply(f, lower(lambda)), lower(lambda)};
  if (2 * abs(s.form.a) == s.form.b) s = then(s, upper(s.form.a > 0 ? Int(-1) : Int(1)));
  return s;
}

FormStep first_reduced(const BQForm& f) {
  FormStep cur{f, Transform2::identity()};
  std::size_t budget = step_budget(f);
  for (std::size_t n = 0; !is_reduced(cur.form); ++n) {
    if (n >= budget) throw std::logic_error("indefinite reduction exceeded its step budget");
    FormStep s = cycle_step(cur.form);
    cur = {s.form, cur.transform * s.transform};
  }
  return cur;
}

}  // namespace

Transform2 operator*(const Transform2& s, const Transform2& t) {
  return {s.alpha * t.alpha + s.beta * t.gamma, s.alpha * t.beta + s.beta * t.delta,
          s.gamma * t.alpha + s.delta * t.gamma, s.gamma * t.beta + s.delta * t.delta};
}

std::ostream& operator<<(std::ostream& os, const BQForm& f) {
  return os << "(" << f.a << ", " << f.b << ", " << f.c << ")";
}

std::ostream& operator<<(std::ostream& os, const Transform2& t) {
  return os << "[[" << t.alpha << ", " << t.beta << "], [" << t.gamma << ", " << t.delta << "]]";
}

Rat discriminant(const BQForm& f) { return f.b * f.b - 4 * f.a * f.c; }

BQForm apply(const BQForm& f, const Transform2& t) {
  Int d = t.det();
  if (d != 1 && d != -1) throw std::invalid_argument("apply: transform is not unimodular");
  Rat al(t.alpha), be(t.beta), ga(t.gamma), de(t.delta);
  return {f.a * al * al + f.b * al * ga + f.c * ga * ga,
          2 * f.a * al * be + f.b * (al * de + be * ga) + 2 * f.c * ga * de,
          f.a * be * be + f.b * be * de + f.c * de * de};
}

bool is_reduced(const BQForm& f) {
  Rat D = discriminant(f);
  if (D < 0) return abs(f.b) <= abs(f.a) && abs(f.a) <= abs(f.c);
  if (D == 0) return f.a == 0 && f.b == 0;
  Rat two_a = 2 * abs(f.a);
  if (auto r = is_rational_square(D)) {
    if (f.b == 0) return f.c == -f.a && two_a == *r;
    return f.b == *r && f.c == 0 && two_a < f.b;
  }
  return cmp_with_sqrt(f.b, 1, D) < 0 && cmp_with_sqrt(two_a - f.b, 1, D) < 0 &&
         cmp_with_sqrt(two_a + f.b, 1, D) > 0;
}

FormStep reduce_definite(const BQForm& f) {
  Rat D = discriminant(f);
  if (D > 0) throw std::invalid_argument("reduce_definite: positive discriminant");
  FormStep cur{f, Transform2::identity()};
  if (f.a == 0 && f.b == 0 && f.c == 0) return cur;
  for (;;) {
    if (abs(cur.form.a) > abs(cur.form.c)) cur = then(cur, kSwap);
    if (cur.form.a == 0) return cur;  // D == 0 and then b == 0 too
    Int lambda = nearest_int(-cur.form.b / (2 * cur.form.a));
    if (lambda != 0) cur = then(cur, upper(lambda));
    // With D == 0, c shrinks below |a| until it vanishes; the swap above then finishes.
    if (D < 0 && abs(cur.form.a) <= abs(cur.form.c)) return cur;
  }
}

FormStep reduce_indefinite_step(const BQForm& f) {
  Rat D = discriminant(f);
  if (D <= 0) throw std::invalid_argument("reduce_indefinite_step: discriminant is not positive");
  if (f.c == 0) throw std::invalid_argument("reduce_indefinite_step: c = 0 leaves delta undefined");
  Int delta = choose_delta(f, D);
  Transform2 t{0, -1, 1, delta};
  return {apply(f, t), t};
}

FormStep cycle_step(const BQForm& f) {
  Rat D = discriminant(f);
  if (D <= 0) throw std::invalid_argument("cycle_step: discriminant is not positive");
  auto r = is_rational_square(D);
  if (!r) return reduce_indefinite_step(f);
  if (f.c == 0) {
    if (f.b < 0) {
      FormStep s = isotropic_switch(f);
      FormStep n = normalize_terminal(s.form);
      return {n.form, s.transform * n.transform};
    }
    return normalize_terminal(f);
  }
  if (f.b == 0 && f.c == -f.a) return {apply(f, kSwap), kSwap};
  if (f.a == 0) return {apply(f, kSwap), kSwap};
  return reduce_indefinite_step(f);
}

std::vector<FormStep> reduce_indefinite(const BQForm& f, std::size_t max_extra) {
  if (discriminant(f) <= 0) throw std::invalid_argument("reduce_indefinite: discriminant is not positive");
  std::vector<FormStep> out{first_reduced(f)};
  for (std::size_t i = 0; i < max_extra; ++i) {
    FormStep s = cycle_step(out.back().form);
    out.push_back({s.form, out.back().transform * s.transform});
  }
  return out;
}

FormStep reduce_square_disc(const BQForm& f) {
  Rat D = discriminant(f);
  if (D <= 0 || !is_rational_square(D)) throw std::invalid_argument("reduce_square_disc: discriminant is not a positive square");
  return first_reduced(f);
}

std::size_t step_budget(const BQForm& f) {
  std::size_t bits = std::max({bit_length(f.a), bit_length(f.b), bit_length(f.c)});
  return 4 * bits + 64;
}

}  // namespace indef
