#include "indeflll/reducer.hpp"

#include <algorithm>

namespace indef {

namespace {

const Transform2 kSwap{0, 1, -1, 0};

std::size_t max_bits(const IntMatrix& G) {
  std::size_t bits = 0;
  for (Index i = 0; i < G.rows(); ++i)
    for (Index j = 0; j < G.cols(); ++j) bits = std::max(bits, bit_length(Rat(G(i, j))));
  return bits;
}

std::uint64_t iteration_cap(Index d, const IntMatrix& G) {
  auto n = static_cast<std::uint64_t>(d + 1);
  return 200 * n * n * (max_bits(G) + 8) + 10000;
}

IntMatrix to_integer(const RatMatrix& m) {
  IntMatrix r(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      if (!is_integral(m(i, j))) throw ReducerError("non-integral Gram entry");
      r(i, j) = m(i, j).get_num();
    }
  return r;
}

FormStep then(const FormStep& s, const Transform2& t) { return {apply(s.form, t), s.transform * t}; }

FormStep step(const FormStep& s) {
  FormStep n = cycle_step(s.form);
  return {n.form, s.transform * n.transform};
}

bool same_up_to_sign(const IntMatrix& a, Index i, const IntMatrix& b, Index j) {
  return a.col(i) == b.col(j) || a.col(i) == IntVector(-b.col(j));
}

}  // namespace

void ReducerParams::validate() const {
  if (!(gamma0 > Rat(1, 4) && gamma0 < 1)) throw std::invalid_argument("gamma0 must lie in (1/4, 1)");
}

std::string to_string(PairKind k) {
  switch (k) {
    case PairKind::Definite: return "definite";
    case PairKind::Indefinite: return "indefinite";
    case PairKind::HyperbolicAdjacent: return "hyperbolic-adjacent";
  }
  return "?";
}

std::uint64_t ReductionResult::sum_N() const {
  std::uint64_t total = 0;
  for (std::size_t j = 0; j < block_kinds.size(); ++j)
    if (block_kinds[j] == PairKind::Definite) total += static_cast<std::uint64_t>(rank) - j - 1;
  return total;
}

bool ReductionResult::first_is_hyperbolic() const {
  return !trace.empty() && trace.front().kind == BlockKind::Hyperbolic;
}

Rat ReductionResult::first_value() const {
  if (rank == 0) return 0;
  return Rat(abs(first_is_hyperbolic() ? reduced_gram(0, 1) : reduced_gram(0, 0)));
}

IsotropicError::IsotropicError(Index i)
    : std::runtime_error("isotropic GSO vector encountered at position " + std::to_string(i + 1)), index(i) {}

Int cleanup_lambda(const Rat& N1, const Rat& S, const Rat& N2) {
  Rat D = S * S - N1 * N2;
  if (D <= 0) return -nearest_int(S / N1);
  if (S == 0 && N1 + N2 == 0) return 0;
  auto r = is_rational_square(D);
  bool terminal = N2 == 0 && r && abs(S) == *r && abs(N1) == *r;
  if (!terminal) {
    if (cmp_with_sqrt(abs(N1), 1, D) > 0) return nearest_int(-S / N1);
    Rat a0 = -S / N1;
    Rat e = D / (N1 * N1);
    return N1 > 0 ? floor_plus_sqrt(a0, e) : ceil_minus_sqrt(a0, e);
  }
  return nearest_int(-S / N1);
}

std::vector<PairKind> classify_pairs(const AdmissibleTrace& trace, const GsoState& gso) {
  std::vector<PairKind> out;
  Index n = trace_length(trace);
  for (Index j = 0; j + 1 < n; ++j) {
    if (gso.in_pair(j) || gso.in_pair(j + 1)) {
      out.push_back(PairKind::HyperbolicAdjacent);
    } else {
      out.push_back(sgn(gso.star_norms[j]) == sgn(gso.star_norms[j + 1]) ? PairKind::Definite : PairKind::Indefinite);
    }
  }
  return out;
}

ReductionState::ReductionState(const IntMatrix& G, const ReducerParams& params)
    : d_(G.rows()), params_(params), U_(IntMatrix::Identity(G.rows(), G.rows())), G_(to_rational(G)) {
  params_.validate();
  if (auto bad = first_asymmetry(G))
    throw std::invalid_argument("matrix is not symmetric at (" + std::to_string(bad->first + 1) + ", " +
                                std::to_string(bad->second + 1) + ")");
}

ReductionState::ReductionState(const IntMatrix& G, const ReducerParams& params, const AdmissibleTrace& trace)
    : ReductionState(G, params) {
  if (trace_length(trace) > d_) throw std::invalid_argument("trace is longer than the basis");
  trace_ = trace;
  p_ = trace_length(trace);
  generalized_gso(G_, trace_);
}

int ReductionState::step_at(Index q) {
  AdmissibleTrace full = trace_;
  auto it = std::find_if(full.begin(), full.end(), [&](const Block& b) { return b.index == q; });
  if (q <= 0 || it == full.end()) throw std::invalid_argument("step_at: no block starts at this position");
  set_prefix(q);
  bool plane_before = trace_.back().kind == BlockKind::Hyperbolic;
  if (it->kind == BlockKind::Scalar) return plane_before ? plane_then_vector() : vector_reduce();
  return plane_before ? plane_plane() : vector_then_plane();
}

GsoState ReductionState::gso(Index upto) const { return generalized_gso(G_, truncated_trace(upto)); }

AdmissibleTrace ReductionState::truncated_trace(Index q) const {
  AdmissibleTrace t;
  for (const Block& b : trace_) {
    if (b.end() > q) break;
    t.push_back(b);
  }
  if (trace_length(t) != q) throw ReducerError("prefix length " + std::to_string(q) + " splits a hyperbolic plane");
  return t;
}

void ReductionState::set_prefix(Index q) {
  trace_ = truncated_trace(q);
  p_ = q;
}

void ReductionState::push(BlockKind kind) {
  trace_.push_back({kind, p_});
  p_ = trace_.back().end();
}

void ReductionState::add_multiple(Index i, Index j, const Int& lambda) {
  if (lambda == 0) return;
  U_.col(i) += lambda * U_.col(j);
  Rat l(lambda);
  G_.row(i) += l * G_.row(j);
  G_.col(i) += l * G_.col(j);
}

void ReductionState::swap_columns(Index i, Index j) {
  if (i == j) return;
  U_.col(i).swap(U_.col(j));
  G_.row(i).swap(G_.row(j));
  G_.col(i).swap(G_.col(j));
}

void ReductionState::negate(Index i) {
  U_.col(i) = -U_.col(i);
  G_.row(i) = -G_.row(i);
  G_.col(i) = -G_.col(i);
}

void ReductionState::rotate(Index from, Index to) {
  for (Index i = from; i > to; --i) swap_columns(i, i - 1);
}

void ReductionState::apply_pair(Index i, Index j, const Transform2& t) {
  IntVector ui = U_.col(i), uj = U_.col(j);
  U_.col(i) = t.alpha * ui + t.gamma * uj;
  U_.col(j) = t.beta * ui + t.delta * uj;
  Rat al(t.alpha), be(t.beta), ga(t.gamma), de(t.delta);
  RatVector ri = G_.row(i).transpose(), rj = G_.row(j).transpose();
  G_.row(i) = (al * ri + ga * rj).transpose();
  G_.row(j) = (be * ri + de * rj).transpose();
  RatVector ci = G_.col(i), cj = G_.col(j);
  G_.col(i) = al * ci + ga * cj;
  G_.col(j) = be * ci + de * cj;
}

void ReductionState::size_reduce(Index i, Index q) { size_reduce(i, q, truncated_trace(q)); }

void ReductionState::size_reduce(Index i, Index q, const AdmissibleTrace& tr) {
  if (q == 0) return;
  GsoState s = generalized_gso(G_, tr);
  auto product = [&](Index j) { return RatVector(G_.row(i).head(q).transpose()).dot(s.star.col(j)); };
  for (auto it = tr.rbegin(); it != tr.rend(); ++it) {
    Index j = it->index;
    if (it->kind == BlockKind::Hyperbolic) {
      const Rat& a = s.cross[j];
      Int x = nearest_int(product(j + 1) / a);
      Int y = nearest_int(product(j) / a);
      add_multiple(i, j, -x);
      add_multiple(i, j + 1, -y);
    } else if (it == tr.rbegin()) {
      Projection proj = project(s, G_, i);
      const Rat& N1 = s.star_norms[j];
      const Rat& S = proj.products(j);
      add_multiple(i, j, cleanup_lambda(N1, S, proj.norm + S * S / N1));
    } else {
      add_multiple(i, j, -nearest_int(product(j) / s.star_norms[j]));
    }
  }
}

int ReductionState::last_sign_before(Index kappa) const {
  GsoState s = gso(kappa);
  for (auto it = trace_.rbegin(); it != trace_.rend(); ++it) {
    if (it->index >= kappa) continue;
    if (it->kind == BlockKind::Scalar) return sgn(s.star_norms[it->index]);
  }
  return 0;
}

void ReductionState::check_potential(const AdmissibleTrace& before_trace, Index K, const RatMatrix& before_gram,
                                     bool documented) {
  if (documented) {
    ++stats_.documented_events;
    return;
  }
  auto after_trace = greedy_trace(G_, K);
  if (!after_trace) {
    ++stats_.documented_events;
    return;
  }
  Rat before = local_potential(before_trace, generalized_gso(before_gram, before_trace));
  Rat after = local_potential(*after_trace, generalized_gso(G_, *after_trace));
  if (after < before) ++stats_.potential_drops;
  if (after > before) ++stats_.potential_violations;
}

// Lifts t onto (v_{p-1}, v_p) and applies the acceptance rules; -1 when the
// new pair replaces the old one, +1 after reverting.
int ReductionState::block_reduce(const Transform2& t, bool documented) {
  const Index kappa = p_ - 1;
  const IntMatrix oldU = U_;
  const RatMatrix oldG = G_;
  AdmissibleTrace before = trace_;
  before.push_back({BlockKind::Scalar, p_});

  apply_pair(kappa, p_, t);
  size_reduce(kappa, kappa);
  Adherence cls = classify(gso(kappa), G_, kappa);
  auto unchanged = [&] { return same_up_to_sign(U_, kappa, oldU, kappa) && same_up_to_sign(U_, p_, oldU, p_); };
  if (cls != Adherence::GZero && !unchanged()) {
    ++stats_.swaps;
    check_potential(before, p_ + 1, oldG, documented);
    return -1;
  }
  if (cls == Adherence::GZero) {
    swap_columns(kappa, p_);
    if (!unchanged()) {
      ++stats_.swaps;
      ++stats_.gzero_reorders;
      check_potential(before, p_ + 1, oldG, true);
      return -1;
    }
  }
  U_ = oldU;
  G_ = oldG;
  return +1;
}

int ReductionState::vector_reduce() { return params_.sign_strategy ? vector_reduce_sign() : vector_reduce_nosign(); }

namespace {

struct LocalBlock {
  Rat N1, S, N2, D;
};

}  // namespace

int ReductionState::vector_reduce_nosign() {
  const Index kappa = p_ - 1;
  GsoState s = gso(p_);
  Projection proj = project(s, G_, p_);
  LocalBlock b{s.star_norms[kappa], proj.products(kappa), 0, 0};
  b.N2 = proj.norm + b.S * b.S / b.N1;
  b.D = b.S * b.S - b.N1 * b.N2;
  if (b.D == 0) return integrate_adherent();
  if (b.D < 0) {
    Int lambda = nearest_int(b.S / b.N1);
    Rat n2 = b.N2 - 2 * Rat(lambda) * b.S + Rat(lambda * lambda) * b.N1;
    if (!(abs(n2) < params_.gamma0 * abs(b.N1))) return +1;
    return block_reduce(Transform2{-lambda, -1, 1, 0});
  }
  BQForm f{b.N1, 2 * b.S, b.N2};
  const Rat a = abs(f.a);
  FormStep cur{f, Transform2::identity()};
  bool worthwhile = false;
  if (!is_reduced(f)) {
    std::size_t budget = step_budget(f);
    for (std::size_t n = 0; !is_reduced(cur.form) && !(abs(cur.form.a) * 2 <= a); ++n) {
      if (n >= budget) throw ReducerError("block reduction exceeded its step budget");
      cur = step(cur);
    }
    worthwhile = abs(cur.form.a) < params_.gamma0 * a;
    if (!worthwhile && abs(cur.form.a) <= a && f.c == 0 && cur.form.c != 0) {
      worthwhile = true;
      ++stats_.line10_firings;
    }
  } else {
    for (std::size_t m = 0; m < params_.max_extra && !worthwhile; ++m) {
      cur = step(cur);
      worthwhile = abs(cur.form.a) < params_.gamma0 * a;
    }
  }
  if (!worthwhile) return +1;
  return block_reduce(cur.transform);
}

int ReductionState::vector_reduce_sign() {
  const Index kappa = p_ - 1;
  int sigma = last_sign_before(kappa);
  if (sigma == 0) return vector_reduce_nosign();
  GsoState s = gso(p_);
  Projection proj = project(s, G_, p_);
  Rat N1 = s.star_norms[kappa];
  Rat S = proj.products(kappa);
  Rat N2 = proj.norm + S * S / N1;
  if (S * S - N1 * N2 <= 0) return vector_reduce_nosign();

  BQForm f{N1, 2 * S, N2};
  const Rat a = abs(f.a);
  const Rat disc = discriminant(f);
  auto right = [&](const Rat& x) { return x == 0 || sgn(x) == -sigma; };
  FormStep cur{f, Transform2::identity()};
  bool worthwhile = false;
  if (!is_reduced(f)) {
    std::size_t budget = step_budget(f);
    for (std::size_t n = 0; !is_reduced(cur.form) && !(abs(cur.form.a) * 2 <= a && right(cur.form.a)); ++n) {
      if (n >= budget) throw ReducerError("block reduction exceeded its step budget");
      cur = step(cur);
    }
    const Rat& c = cur.form.c;
    if (!right(cur.form.a) && c != 0 && abs(c) < params_.gamma0 * a && 4 * c * c <= disc) cur = then(cur, kSwap);
    worthwhile = abs(cur.form.a) < params_.gamma0 * a;
    if (!worthwhile && abs(cur.form.a) <= a && f.c == 0 && cur.form.c != 0) {
      worthwhile = true;
      ++stats_.line10_firings;
    }
  } else {
    for (std::size_t m = 0; m < params_.max_extra && !worthwhile; ++m) {
      cur = step(cur);
      worthwhile = right(cur.form.a) && abs(cur.form.a) < params_.gamma0 * a;
    }
  }
  if (!worthwhile) return +1;
  return block_reduce(cur.transform);
}

int ReductionState::integrate_adherent() {
  const Index kappa = p_ - 1;
  GsoState s = gso(p_);
  Projection proj = project(s, G_, p_);
  if (proj.norm != 0) throw ReducerError("integrate_adherent: vector does not adhere");
  const Rat& N = s.star_norms[kappa];
  const Rat& S = proj.products(kappa);
  FormStep r = reduce_definite({N, 2 * S, S * S / N});
  ++stats_.adherent_integrations;
  if (block_reduce(r.transform, true) != -1) throw ReducerError("adherent integration left the basis unchanged");
  return -1;
}

int ReductionState::plane_then_vector() {
  const Index j = p_ - 2;
  const Rat A = G_(j, j + 1);
  Rat x = G_(p_, j), y = G_(p_, j + 1);
  Rat nstar = project(gso(p_), G_, p_).norm;
  Rat gamma = (nstar + 2 * x * y / A) / A;
  AdmissibleTrace before = trace_;
  before.push_back({BlockKind::Scalar, p_});
  const RatMatrix oldG = G_;
  if (x != 0 || y != 0) {
    if (x == 0) swap_columns(j, j + 1);
    rotate(p_, j);
    ++stats_.swaps;
    ++stats_.plane_moves;
    check_potential(before, p_ + 1, oldG, true);
    return -2;
  }
  if (abs(gamma) < params_.gamma_h()) {
    rotate(p_, j);
    ++stats_.swaps;
    check_potential(before, p_ + 1, oldG, nstar == 0);
    return -2;
  }
  return +1;
}

int ReductionState::vector_then_plane() {
  const Index kappa = p_ - 1;
  Rat n = gso(p_).star_norms[kappa];
  Rat gamma = n / G_(p_, p_ + 1);
  if (params_.gamma_h() * abs(gamma) <= 1) return +2;
  AdmissibleTrace before = trace_;
  before.push_back({BlockKind::Hyperbolic, p_});
  const RatMatrix oldG = G_;
  rotate(p_, kappa);
  rotate(p_ + 1, p_);
  ++stats_.swaps;
  check_potential(before, p_ + 2, oldG, false);
  return -1;
}

int ReductionState::plane_plane() {
  const Index j = p_ - 2;
  Rat alpha = G_(j, j + 1), beta = G_(p_, p_ + 1);
  if (params_.gamma_h() * abs(alpha) <= abs(beta)) return +2;
  AdmissibleTrace before = trace_;
  before.push_back({BlockKind::Hyperbolic, p_});
  const RatMatrix oldG = G_;
  rotate(p_, j);
  rotate(p_ + 1, j + 1);
  ++stats_.swaps;
  check_potential(before, p_ + 2, oldG, false);
  return -2;
}

void ReductionState::run() {
  const std::uint64_t cap = iteration_cap(d_, to_integer(G_));
  while (p_ < d_) {
    if (++stats_.iterations > cap) throw ReducerError("iteration cap exceeded");
    GsoState s = gso(p_);
    Index pos = -1, pi = -1, pj = -1;
    for (Index i = p_; i < d_; ++i) {
      Projection proj = project(s, G_, i);
      if (classify(proj) != Adherence::GZero) {
        size_reduce(i, p_, trace_);
        pos = i;
        break;
      }
      for (Index j = 0; j < p_; ++j) add_multiple(i, j, -proj.theta(j).get_num());
      if (i > p_ && G_(i - 1, i) != 0) {
        pi = i - 1;
        pj = i;
        break;
      }
    }
    if (pos < 0 && pi < 0) {
      for (Index i = p_; i < d_ && pi < 0; ++i)
        for (Index j = i + 1; j < d_; ++j)
          if (G_(i, j) != 0) {
            pi = i;
            pj = j;
            break;
          }
      if (pi < 0) break;
    }
    if (pos >= 0) {
      rotate(pos, p_);
      if (p_ == 0) {
        push(BlockKind::Scalar);
        continue;
      }
      int change = trace_.back().kind == BlockKind::Hyperbolic ? plane_then_vector() : vector_reduce();
      if (change > 0) {
        push(BlockKind::Scalar);
      } else {
        set_prefix(std::max<Index>(0, p_ + change));
      }
    } else {
      rotate(pi, p_);
      rotate(pj, p_ + 1);
      if (p_ == 0) {
        push(BlockKind::Hyperbolic);
        continue;
      }
      int change = trace_.back().kind == BlockKind::Hyperbolic ? plane_plane() : vector_then_plane();
      if (change > 0) {
        push(BlockKind::Hyperbolic);
      } else {
        set_prefix(std::max<Index>(0, p_ + change));
      }
    }
  }
}

ReductionResult ReductionState::result() const {
  ReductionResult r;
  r.U = U_;
  r.reduced_gram = to_integer(G_);
  r.rank = p_;
  r.trace = trace_;
  r.gso = gso(p_);
  r.block_kinds = classify_pairs(r.trace, r.gso);
  r.stats = stats_;
  return r;
}

ReductionResult reduce(const IntMatrix& G, const ReducerParams& params) {
  ReductionState state(G, params);
  state.run();
  return state.result();
}

ReductionResult reduce_baseline_simon(const IntMatrix& G, const Rat& gamma0) {
  ReducerParams params;
  params.gamma0 = gamma0;
  ReductionState st(G, params);
  const Index d = st.dim();
  ReductionStats stats;
  const std::uint64_t cap = iteration_cap(d, G);
  auto prefix_gso = [&](Index k) {
    try {
      return generalized_gso(st.gram(), k, {});
    } catch (const InadmissiblePrefix& e) {
      throw IsotropicError(e.position);
    }
  };
  if (d > 0 && st.gram()(0, 0) == 0) throw IsotropicError(0);
  Index k = 1;
  while (k < d) {
    if (++stats.iterations > cap) throw ReducerError("iteration cap exceeded");
    GsoState s = prefix_gso(k);
    for (Index j = k - 1; j >= 0; --j) {
      Rat prod = RatVector(st.gram().row(k).head(k).transpose()).dot(s.star.col(j));
      st.add_multiple(k, j, -nearest_int(prod / s.star_norms[j]));
    }
    Projection proj = project(s, st.gram(), k);
    const Rat& prev = s.star_norms[k - 1];
    Rat mu = proj.products(k - 1) / prev;
    if (abs(proj.norm + mu * mu * prev) < gamma0 * abs(prev)) {
      st.swap_columns(k - 1, k);
      ++stats.swaps;
      k = std::max<Index>(k - 1, 1);
    } else {
      ++k;
    }
  }
  GsoState s = prefix_gso(d);
  ReductionResult r;
  r.U = st.U();
  r.reduced_gram = to_integer(st.gram());
  r.rank = d;
  for (Index i = 0; i < d; ++i) r.trace.push_back({BlockKind::Scalar, i});
  r.gso = s;
  r.block_kinds = classify_pairs(r.trace, r.gso);
  r.stats = stats;
  return r;
}

}  // namespace indef
