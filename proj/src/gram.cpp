#include "indeflll/gram.hpp"

#include <string>

namespace indef {

namespace {

// Coefficients of w - w* on the generalized Gram vectors 0 .. upto-1, given
// the products b(w, v*_j). Positions at or past `stop` are ignored.
RatVector star_coefficients(const GsoState& s, const RatVector& products, Index stop) {
  RatVector c = RatVector::Zero(stop);
  for (Index j = 0; j < stop; ++j) {
    if (s.bad[j]) {
      if (j + 1 < stop) {
        c(j) = products(j + 1) / s.cross[j];
        c(j + 1) = products(j) / s.cross[j];
      }
      ++j;
    } else {
      c(j) = products(j) / s.star_norms[j];
    }
  }
  return c;
}

}  // namespace

InadmissiblePrefix::InadmissiblePrefix(Index pos)
    : std::runtime_error("inadmissible prefix: zero Gram vector norm at position " + std::to_string(pos)),
      position(pos) {}

Index trace_length(const AdmissibleTrace& trace) { return trace.empty() ? 0 : trace.back().end(); }

std::vector<Index> bad_indices(const AdmissibleTrace& trace) {
  std::vector<Index> out;
  for (const Block& b : trace)
    if (b.kind == BlockKind::Hyperbolic) out.push_back(b.index);
  return out;
}

RatVector GsoState::theta(Index i) const {
  RatVector t = -star.col(i);
  t(i) += 1;
  return t;
}

GsoState GsoState::truncated(Index to) const {
  if (to > 0 && bad[to - 1]) throw std::invalid_argument("truncation at a bad index");
  GsoState t;
  t.upto = to;
  t.star_norms.assign(star_norms.begin(), star_norms.begin() + to);
  t.cross.assign(cross.begin(), cross.begin() + to);
  t.bad.assign(bad.begin(), bad.begin() + to);
  t.star = star.topLeftCorner(to, to);
  return t;
}

GsoState generalized_gso(const RatMatrix& G, Index upto, const std::vector<Index>& bad) {
  GsoState s;
  s.upto = upto;
  s.star_norms.assign(upto, Rat(0));
  s.cross.assign(upto, Rat(0));
  s.bad.assign(upto, false);
  for (Index j : bad) {
    if (j < 0 || j + 1 >= upto) throw std::invalid_argument("bad index outside the prefix");
    s.bad[j] = true;
  }
  s.star = RatMatrix::Zero(upto, upto);
  Index done = 0;  // v*_0 .. v*_{done-1} are final
  for (Index i = 0; i < upto; ++i) {
    RatVector row = G.row(i).head(upto).transpose();
    RatVector products = RatVector::Zero(done);
    for (Index j = 0; j < done; ++j) products(j) = row.dot(s.star.col(j).head(upto));
    RatVector c = star_coefficients(s, products, done);
    RatVector v = RatVector::Zero(upto);
    v(i) = 1;
    for (Index j = 0; j < done; ++j)
      if (c(j) != 0) v -= c(j) * s.star.col(j);
    s.star.col(i) = v;
    s.star_norms[i] = row.dot(v);
    bool second = i > 0 && s.bad[i - 1];
    if (s.bad[i]) {
      if (s.star_norms[i] != 0) throw InadmissiblePrefix(i);
      continue;  // v*_{i+1} is orthogonalized against the same prefix
    }
    if (second) {
      // b(v*_{i-1}, v*_i) = b(v*_{i-1}, v_i) since v*_i - v_i lies before i-1.
      s.cross[i - 1] = row.dot(s.star.col(i - 1));
      if (s.star_norms[i] != 0 || s.cross[i - 1] == 0) throw InadmissiblePrefix(i);
    } else if (s.star_norms[i] == 0) {
      throw InadmissiblePrefix(i);
    }
    done = i + 1;
  }
  return s;
}

GsoState generalized_gso(const RatMatrix& G, const AdmissibleTrace& trace) {
  return generalized_gso(G, trace_length(trace), bad_indices(trace));
}

Rat prefix_determinant(const GsoState& state, Index upto) {
  if (upto > state.upto) throw std::invalid_argument("prefix_determinant: beyond the computed prefix");
  if (upto > 0 && state.bad[upto - 1]) throw std::invalid_argument("prefix_determinant: truncation at a bad index");
  Rat det(1);
  for (Index j = 0; j < upto; ++j) {
    if (state.bad[j]) {
      det *= -state.cross[j] * state.cross[j];
      ++j;
    } else {
      det *= state.star_norms[j];
    }
  }
  return det;
}

Rat local_potential(const AdmissibleTrace& trace, const GsoState& state) {
  Rat pot(1), det(1);
  for (const Block& b : trace) {
    if (b.kind == BlockKind::Scalar) {
      det *= state.star_norms[b.index];
      pot *= abs(det);
    } else {
      Rat a = abs(state.cross[b.index]);
      pot *= a * a * a * det * det;
      det *= -a * a;
    }
  }
  return pot;
}

RatVector theta_vector(const RatMatrix& G_prefix, const RatVector& products) {
  const Index n = G_prefix.rows();
  RatMatrix m(n, n + 1);
  m.leftCols(n) = G_prefix;
  m.col(n) = products;
  for (Index k = 0; k < n; ++k) {
    Index r = k;
    while (r < n && m(r, k) == 0) ++r;
    if (r == n) throw std::logic_error("theta_vector: singular prefix Gram matrix");
    if (r != k) m.row(k).swap(m.row(r));
    for (Index i = 0; i < n; ++i) {
      if (i == k || m(i, k) == 0) continue;
      Rat f = m(i, k) / m(k, k);
      m.row(i) -= f * m.row(k);
    }
  }
  RatVector theta(n);
  for (Index i = 0; i < n; ++i) theta(i) = m(i, n) / m(i, i);
  return theta;
}

Projection project(const GsoState& state, const RatVector& row, const Rat& self) {
  const Index n = state.upto;
  Projection p;
  RatVector r = row.head(n);
  p.products.resize(n);
  for (Index j = 0; j < n; ++j) p.products(j) = r.dot(state.star.col(j));
  RatVector c = star_coefficients(state, p.products, n);
  p.theta = RatVector::Zero(n);
  p.norm = self;
  for (Index j = 0; j < n; ++j) {
    if (c(j) == 0) continue;
    p.theta += c(j) * state.star.col(j);
    p.norm -= c(j) * p.products(j);
  }
  return p;
}

Projection project(const GsoState& state, const RatMatrix& G, Index i) {
  return project(state, RatVector(G.row(i).transpose()), G(i, i));
}

Adherence classify(const Projection& proj) {
  if (proj.norm != 0) return Adherence::NonAdherent;
  for (Index j = 0; j < proj.theta.size(); ++j)
    if (!is_integral(proj.theta(j))) return Adherence::Adherent;
  return Adherence::GZero;
}

Adherence classify(const GsoState& state, const RatMatrix& G, Index i) { return classify(project(state, G, i)); }

AdmissibleTrace extend_admissible(const AdmissibleTrace& trace, const GsoState& state, const RatMatrix& G, Index i) {
  if (i != state.upto) throw std::invalid_argument("extend_admissible: vector is not next to the prefix");
  if (classify(state, G, i) != Adherence::NonAdherent) throw std::invalid_argument("extend_admissible: vector adheres to the prefix");
  AdmissibleTrace out = trace;
  out.push_back({BlockKind::Scalar, i});
  return out;
}

std::optional<AdmissibleTrace> greedy_trace(const RatMatrix& G, Index K) {
  AdmissibleTrace trace;
  Index j = 0;
  while (j < K) {
    GsoState s = generalized_gso(G, trace);
    Projection p = project(s, G, j);
    if (p.norm != 0) {
      trace.push_back({BlockKind::Scalar, j});
      ++j;
      continue;
    }
    if (j + 1 >= K || G(j, j) != 0 || G(j + 1, j + 1) != 0 || G(j, j + 1) == 0) return std::nullopt;
    for (Index i = 0; i < j; ++i)
      if (G(i, j) != 0 || G(i, j + 1) != 0) return std::nullopt;
    trace.push_back({BlockKind::Hyperbolic, j});
    j += 2;
  }
  return trace;
}

std::vector<int> star_signs(const AdmissibleTrace& trace, const GsoState& state) {
  std::vector<int> out;
  for (const Block& b : trace) {
    if (b.kind == BlockKind::Scalar) {
      out.push_back(sgn(state.star_norms[b.index]));
    } else {
      out.push_back(0);
      out.push_back(0);
    }
  }
  return out;
}

}  // namespace indef
