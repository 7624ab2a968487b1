#pragma once

#include "indeflll/numerics.hpp"

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace indef {

using Index = Eigen::Index;

enum class BlockKind { Scalar, Hyperbolic };

/// One block of an admissible prefix: a single vector, or a hyperbolic
/// plane occupying index and index + 1.
struct Block {
  BlockKind kind;
  Index index;

  Index size() const { return kind == BlockKind::Scalar ? 1 : 2; }
  Index end() const { return index + size(); }
  bool operator==(const Block&) const = default;
};

using AdmissibleTrace = std::vector<Block>;

Index trace_length(const AdmissibleTrace& trace);
std::vector<Index> bad_indices(const AdmissibleTrace& trace);

struct InadmissiblePrefix : std::runtime_error {
  Index position;
  explicit InadmissiblePrefix(Index pos);
};

/// Generalized Gram vectors of the first `upto` basis vectors.
struct GsoState {
  Index upto = 0;
  std::vector<Rat> star_norms;  // b(v*_i, v*_i)
  std::vector<Rat> cross;       // b(v*_j, v*_{j+1}) for bad j, zero otherwise
  std::vector<bool> bad;        // j in B
  RatMatrix star;               // column i holds v*_i in the basis v_0 .. v_{upto-1}

  bool is_bad(Index j) const { return bad[j]; }
  bool in_pair(Index j) const { return bad[j] || (j > 0 && bad[j - 1]); }
  bool is_good(Index j) const { return !in_pair(j); }

  /// Coefficients of v_i - v*_i on v_0 .. v_{upto-1}.
  RatVector theta(Index i) const;
  GsoState truncated(Index to) const;
};

/// `bad` lists the first index of each hyperbolic pair.
GsoState generalized_gso(const RatMatrix& G, Index upto, const std::vector<Index>& bad);
GsoState generalized_gso(const RatMatrix& G, const AdmissibleTrace& trace);

Rat prefix_determinant(const GsoState& state, Index upto);
Rat local_potential(const AdmissibleTrace& trace, const GsoState& state);

/// Solves G_prefix * theta = products exactly.
RatVector theta_vector(const RatMatrix& G_prefix, const RatVector& products);

/// Orthogonalization of an extra vector w against an admissible prefix.
struct Projection {
  RatVector products;  // b(w, v*_j)
  RatVector theta;     // w - w* = sum theta_j v_j
  Rat norm;            // b(w*, w*)
};

/// `row` holds b(w, v_j) for j < upto (longer rows are truncated), `self` is b(w, w).
Projection project(const GsoState& state, const RatVector& row, const Rat& self);
/// Basis vector i of G, with i >= state.upto.
Projection project(const GsoState& state, const RatMatrix& G, Index i);

enum class Adherence { NonAdherent, Adherent, GZero };

Adherence classify(const Projection& proj);
Adherence classify(const GsoState& state, const RatMatrix& G, Index i);

/// Appends vector `i` (which must sit at position state.upto) as a Scalar block.
AdmissibleTrace extend_admissible(const AdmissibleTrace& trace, const GsoState& state, const RatMatrix& G, Index i);

/// Scalar blocks where the Gram vector is anisotropic, hyperbolic blocks for
/// isotropic pairs orthogonal to everything before them. Empty optional when
/// the first K vectors admit no such decomposition.
std::optional<AdmissibleTrace> greedy_trace(const RatMatrix& G, Index K);

/// Gram vector kinds of a trace: one entry per position, +1/-1 for the sign of
/// an anisotropic Scalar block, 0 for positions in a hyperbolic plane.
std::vector<int> star_signs(const AdmissibleTrace& trace, const GsoState& state);

template<typename Scalar>
bool is_symmetric(const Matrix<Scalar>& m) {
  if (m.rows() != m.cols()) return false;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = i + 1; j < m.cols(); ++j)
      if (m(i, j) != m(j, i)) return false;
  return true;
}

/// First (i, j), i < j, with m(i, j) != m(j, i).
template<typename Scalar>
std::optional<std::pair<Index, Index>> first_asymmetry(const Matrix<Scalar>& m) {
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = i + 1; j < m.cols(); ++j)
      if (m(i, j) != m(j, i)) return std::pair{i, j};
  return std::nullopt;
}

/// Fraction-free (Bareiss) elimination with row pivoting.
template<typename Scalar>
Scalar determinant(Matrix<Scalar> m) {
  const Index n = m.rows();
  if (n == 0) return Scalar(1);
  Scalar prev(1);
  int sign = 1;
  for (Index k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      Index r = k + 1;
      while (r < n && m(r, k) == 0) ++r;
      if (r == n) return Scalar(0);
      m.row(k).swap(m.row(r));
      sign = -sign;
    }
    for (Index i = k + 1; i < n; ++i) {
      for (Index j = k + 1; j < n; ++j) {
        Scalar v = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        m(i, j) = v / prev;
      }
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  return sign > 0 ? Scalar(m(n - 1, n - 1)) : Scalar(-m(n - 1, n - 1));
}

template<typename Scalar>
Matrix<Scalar> congruence(const Matrix<Scalar>& G, const Matrix<Scalar>& U) {
  return U.transpose() * G * U;
}

}  // namespace indef
