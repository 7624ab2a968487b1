#pragma once

#include "indeflll/numerics.hpp"

#include <iosfwd>
#include <vector>

namespace indef {

/// a*x^2 + b*x*y + c*y^2
struct BQForm {
  Rat a, b, c;

  bool operator==(const BQForm&) const = default;
  BQForm scaled(const Rat& s) const { return {a * s, b * s, c * s}; }
};

/// Integer change of variables (x, y) -> (alpha*x + beta*y, gamma*x + delta*y).
struct Transform2 {
  Int alpha = 1, beta = 0, gamma = 0, delta = 1;

  static Transform2 identity() { return {}; }
  Int det() const { return alpha * delta - beta * gamma; }
  bool is_identity() const { return alpha == 1 && beta == 0 && gamma == 0 && delta == 1; }
  bool operator==(const Transform2&) const = default;
};

/// Matrix product; apply(apply(f, s), t) == apply(f, s * t).
Transform2 operator*(const Transform2& s, const Transform2& t);

std::ostream& operator<<(std::ostream& os, const BQForm& f);
std::ostream& operator<<(std::ostream& os, const Transform2& t);

Rat discriminant(const BQForm& f);
BQForm apply(const BQForm& f, const Transform2& t);
bool is_reduced(const BQForm& f);

struct FormStep {
  BQForm form;
  Transform2 transform;  // cumulative, from the input form
};

FormStep reduce_definite(const BQForm& f);

/// One step (a,b,c) -> (c, -b + 2c*delta, a - b*delta + c*delta^2).
FormStep reduce_indefinite_step(const BQForm& f);

/// Trajectory starting at the first reduced form, followed by up to
/// max_extra further cycle steps.
std::vector<FormStep> reduce_indefinite(const BQForm& f, std::size_t max_extra);

FormStep reduce_square_disc(const BQForm& f);

/// Single step of the positive-discriminant engine: the generic delta step,
/// or the dedicated moves for square discriminants.
FormStep cycle_step(const BQForm& f);

/// Ceiling on generic steps before a first reduced form.
std::size_t step_budget(const BQForm& f);

}  // namespace indef
