#pragma once

#include "indeflll/gram.hpp"
#include "indeflll/qform.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace indef {

struct ReducerParams {
  Rat gamma0{99, 100};
  bool gamma_h_one = false;  // gamma_h = 1 instead of gamma0
  std::size_t max_extra = 8;
  bool sign_strategy = true;

  Rat gamma_h() const { return gamma_h_one ? Rat(1) : gamma0; }
  void validate() const;
};

enum class PairKind { Definite, Indefinite, HyperbolicAdjacent };

std::string to_string(PairKind k);

struct ReductionStats {
  std::uint64_t iterations = 0;
  std::uint64_t swaps = 0;
  std::uint64_t adherent_integrations = 0;
  std::uint64_t gzero_reorders = 0;
  std::uint64_t plane_moves = 0;
  std::uint64_t line10_firings = 0;
  std::uint64_t potential_drops = 0;
  std::uint64_t documented_events = 0;
  std::uint64_t potential_violations = 0;
};

struct ReductionResult {
  IntMatrix U;
  IntMatrix reduced_gram;
  Index rank = 0;
  AdmissibleTrace trace;
  GsoState gso;
  std::vector<PairKind> block_kinds;  // adjacent positions (j, j+1), j + 1 < rank
  ReductionStats stats;

  /// Sum over definite pairs (j, j+1) of rank - j - 1.
  std::uint64_t sum_N() const;
  bool first_is_hyperbolic() const;
  /// |b(v1, v1)|, or |b(v1, v2)| when v1 starts a hyperbolic plane.
  Rat first_value() const;
};

struct IsotropicError : std::runtime_error {
  Index index;
  explicit IsotropicError(Index i);
};

/// Internal invariant violation.
struct ReducerError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Clean-up multiplier for w + lambda * v_kappa, from N1 = b(v*_kappa, v*_kappa),
/// S = b(v*_kappa, w) and N2 = b(w*, w*) + S^2 / N1.
Int cleanup_lambda(const Rat& N1, const Rat& S, const Rat& N2);

/// Working state of one reduction run; columns of U are the current basis.
class ReductionState {
 public:
  ReductionState(const IntMatrix& G, const ReducerParams& params);
  /// Resumes from a basis whose first positions already carry `trace`.
  ReductionState(const IntMatrix& G, const ReducerParams& params, const AdmissibleTrace& trace);

  Index dim() const { return d_; }
  Index prefix() const { return p_; }
  const AdmissibleTrace& trace() const { return trace_; }
  const IntMatrix& U() const { return U_; }
  const RatMatrix& gram() const { return G_; }
  const ReductionStats& stats() const { return stats_; }

  GsoState gso(Index upto) const;

  void add_multiple(Index i, Index j, const Int& lambda);  // v_i += lambda v_j
  void swap_columns(Index i, Index j);
  void negate(Index i);
  /// (v_from, .., ) moves vector `from` to position `to` <= from, shifting the rest right.
  void rotate(Index from, Index to);
  /// (v_i, v_j) -> (alpha v_i + gamma v_j, beta v_i + delta v_j).
  void apply_pair(Index i, Index j, const Transform2& t);

  /// Size-reduces vector i against the prefix of length q, anticipating its
  /// move to position q: ordinary against everything except a trailing Scalar
  /// block, which gets the clean-up rule.
  void size_reduce(Index i, Index q, const AdmissibleTrace& prefix_trace);
  /// Same, with the current trace truncated to q.
  void size_reduce(Index i, Index q);

  /// Vector at position p against the Scalar block at p - 1. Returns -1 or +1.
  int vector_reduce();
  int vector_reduce_nosign();
  int vector_reduce_sign();
  /// Hyperbolic plane at (p-2, p-1) followed by the vector at p.
  int plane_then_vector();
  /// Scalar block at p - 1 followed by the plane at (p, p+1).
  int vector_then_plane();
  /// Plane at (p-2, p-1) followed by the plane at (p, p+1).
  int plane_plane();
  /// Adherent vector at p after a Scalar block.
  int integrate_adherent();

  /// Re-runs the step that admitted the block starting at q > 0 against the
  /// blocks before it. Positive return: the block would be kept as is.
  int step_at(Index q);

  /// Runs the main loop to completion.
  void run();
  ReductionResult result() const;

 private:
  Index d_;
  ReducerParams params_;
  IntMatrix U_;
  RatMatrix G_;
  AdmissibleTrace trace_;
  Index p_ = 0;
  ReductionStats stats_;

  AdmissibleTrace truncated_trace(Index q) const;
  void set_prefix(Index q);
  void push(BlockKind kind);
  int block_reduce(const Transform2& t, bool documented = false);
  int last_sign_before(Index kappa) const;
  void check_potential(const AdmissibleTrace& before_trace, Index K, const RatMatrix& before_gram, bool documented);
};

ReductionResult reduce(const IntMatrix& G, const ReducerParams& params = {});

/// LLL on the Gram matrix with absolute values around every norm comparison.
ReductionResult reduce_baseline_simon(const IntMatrix& G, const Rat& gamma0 = Rat(99, 100));

/// Adjacent-pair classification of a reduced prefix.
std::vector<PairKind> classify_pairs(const AdmissibleTrace& trace, const GsoState& gso);

}  // namespace indef
