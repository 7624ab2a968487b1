#pragma once

#include "indeflll/reducer.hpp"

#include <vector>

namespace indef {

struct LatticeInvariants {
  Index dim = 0;
  Index rank = 0;
  Index n_plus = 0;
  Index n_minus = 0;
  Index signature = 0;  // |n_plus - n_minus|
  Rat nondeg_det{1};
};

struct KernelSplit {
  IntMatrix U;     // U^T G U = diag(G_ell, 0)
  IntMatrix G_ell;
  Index rank = 0;
};

/// Unimodular U whose trailing columns span ker(G) over the integers.
KernelSplit kernel_split(const IntMatrix& G);

/// Counts through the reducer's Gram vectors: each hyperbolic plane adds one
/// positive and one negative direction.
LatticeInvariants signature_via_gso(const IntMatrix& G);

/// Characteristic polynomial plus Sturm sequences. Here nondeg_det is the
/// product of the nonzero eigenvalues, which is the lattice determinant only
/// when G is nondegenerate.
LatticeInvariants signature_via_sturm(const RatMatrix& G);

/// Dense polynomial over Q, coefficient i multiplies x^i.
using Poly = std::vector<Rat>;

/// det(x I - G) by Faddeev-LeVerrier.
Poly characteristic_polynomial(const RatMatrix& G);
/// Number of distinct roots of p in the open interval (0, +inf), resp. (-inf, 0).
Index sturm_positive_roots(const Poly& p);
Index sturm_negative_roots(const Poly& p);

struct BoundReport {
  Index rank = 0;
  std::uint64_t sum_N = 0;
  Rat nondeg_det;       // |det_{!=0}|
  Rat first;            // |b(v1,v1)| or |b(v1,v2)|
  Rat lhs;              // first^rank
  Rat rhs;              // gamma0^{-rank(rank-1)} D^{sum_N} |det|
  bool theorem_ok = false;
  Rat slack;            // rhs / lhs (0 when lhs = 0)
  Index signature = 0;
  Rat heuristic_rhs;    // (4/3)^{sigma(sigma-1)} |det|
  bool heuristic_ok = false;
};

Rat d_lll(const Rat& gamma0);

/// Throws std::invalid_argument when result is not a reduction of G_in.
BoundReport verify_theorem_bound(const ReductionResult& result, const IntMatrix& G_in, const Rat& gamma0);

/// Rebuilds trace, Gram vectors and pair kinds of a reduced basis from its Gram
/// matrix alone. Throws std::invalid_argument when the leading rank positions
/// are not admissible.
ReductionResult describe_reduced(const IntMatrix& U, const IntMatrix& reduced_gram);

struct BlockCheck {
  Index position;
  PairKind kind;          // of the pair (position - 1, position)
  bool strictly_reduced;  // local binary form passes is_reduced
  bool settled;           // the reducer's own step keeps the block
};

/// One entry per block after the first. Settled blocks are those the step that
/// admitted them would leave alone when replayed on the final basis.
std::vector<BlockCheck> check_blocks(const IntMatrix& gram, const AdmissibleTrace& trace, const ReducerParams& params);
std::vector<BlockCheck> check_blocks(const ReductionResult& r, const ReducerParams& params);

/// 2d x 2d real symmetric matrix with a + ib replaced by [[a, -b], [b, a]].
RatMatrix hermitian_embed(const RatMatrix& re, const RatMatrix& im);

struct PlaneRemoval {
  RatMatrix gram;
  IntMatrix U;
};

/// [[1,0,0],[0,0,a],[0,a,0]] in the basis (u+v-w, u+v, u-w), with w negated first when a < 0.
PlaneRemoval remove_hyperbolic_plane(const RatMatrix& G3);

template<typename Scalar>
bool automorphy_check(const Matrix<Scalar>& G, const Matrix<Scalar>& U) {
  if (G.rows() != U.rows() || U.rows() != U.cols()) return false;
  return Matrix<Scalar>(U.transpose() * G * U) == G;
}

}  // namespace indef
