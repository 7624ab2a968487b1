#include "indeflll/analysis.hpp"

#include <stdexcept>

namespace indef {

namespace {

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly derivative(const Poly& p) {
  Poly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<unsigned long>(i));
  trim(d);
  return d;
}

Poly remainder(Poly a, const Poly& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    Rat f = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    a.pop_back();
    trim(a);
  }
  return a;
}

Poly poly_gcd(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = remainder(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Rat lead = a.back();
    for (Rat& c : a) c /= lead;
  }
  return a;
}

std::vector<Poly> sturm_chain(const Poly& p) {
  std::vector<Poly> chain{p, derivative(p)};
  while (!chain.back().empty()) {
    Poly r = remainder(chain[chain.size() - 2], chain.back());
    for (Rat& c : r) c = -c;
    chain.push_back(std::move(r));
  }
  chain.pop_back();
  return chain;
}

int variations(const std::vector<int>& signs) {
  int v = 0, last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

// Distinct roots of p in (0, inf) (positive = true) or (-inf, 0); p(0) != 0.
Index distinct_roots(const Poly& p, bool positive) {
  if (p.size() <= 1) return 0;
  auto chain = sturm_chain(p);
  std::vector<int> at0, atinf;
  for (const Poly& q : chain) {
    at0.push_back(sgn(q.front()));
    int lead = sgn(q.back());
    if (!positive && (q.size() - 1) % 2 == 1) lead = -lead;
    atinf.push_back(lead);
  }
  return positive ? variations(at0) - variations(atinf) : variations(atinf) - variations(at0);
}

Poly strip_zero_roots(Poly p) {
  trim(p);
  std::size_t k = 0;
  while (k < p.size() && p[k] == 0) ++k;
  return Poly(p.begin() + static_cast<std::ptrdiff_t>(k), p.end());
}

// Roots counted with multiplicity: a root of multiplicity m divides the first m
// members of p, gcd(p, p'), gcd of that with its derivative, ...
Index roots_with_multiplicity(const Poly& p, bool positive) {
  Index total = 0;
  Poly cur = strip_zero_roots(p);
  while (cur.size() > 1) {
    total += distinct_roots(cur, positive);
    cur = poly_gcd(cur, derivative(cur));
  }
  return total;
}

// (a, b) -> (g, 0) on columns i, j of M and U through a determinant-1 transform.
void gcd_columns(IntMatrix& M, IntMatrix& U, Index r, Index i, Index j) {
  Int a = M(r, i), b = M(r, j);
  if (b == 0) return;
  Int g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  Int bg = b / g, ag = a / g;
  for (IntMatrix* X : {&M, &U}) {
    IntVector ci = X->col(i), cj = X->col(j);
    X->col(i) = s * ci + t * cj;
    X->col(j) = ag * cj - bg * ci;
  }
}

}  // namespace

KernelSplit kernel_split(const IntMatrix& G) {
  if (G.rows() != G.cols()) throw std::invalid_argument("kernel_split: matrix is not square");
  const Index d = G.rows();
  if (determinant(G) != 0) return {IntMatrix::Identity(d, d), G, d};
  IntMatrix M = G;
  IntMatrix U = IntMatrix::Identity(d, d);
  Index c = 0;
  for (Index r = 0; r < d && c < d; ++r) {
    for (Index j = c + 1; j < d; ++j) gcd_columns(M, U, r, c, j);
    if (M(r, c) != 0) ++c;
  }
  KernelSplit out;
  out.rank = c;
  out.U = U;
  IntMatrix C = congruence(G, U);
  out.G_ell = C.topLeftCorner(c, c);
  return out;
}

Poly characteristic_polynomial(const RatMatrix& G) {
  const Index n = G.rows();
  Poly c(static_cast<std::size_t>(n) + 1);
  c[n] = 1;
  RatMatrix M = RatMatrix::Zero(n, n);
  RatMatrix I = RatMatrix::Identity(n, n);
  for (Index k = 1; k <= n; ++k) {
    M = G * M + c[n - k + 1] * I;
    RatMatrix AM = G * M;
    c[n - k] = -AM.trace() / Rat(k);
  }
  return c;
}

Index sturm_positive_roots(const Poly& p) { return distinct_roots(strip_zero_roots(p), true); }
Index sturm_negative_roots(const Poly& p) { return distinct_roots(strip_zero_roots(p), false); }

LatticeInvariants signature_via_sturm(const RatMatrix& G) {
  if (!is_symmetric(G)) throw std::invalid_argument("signature_via_sturm: matrix is not symmetric");
  Poly p = characteristic_polynomial(G);
  LatticeInvariants inv;
  inv.dim = G.rows();
  inv.n_plus = roots_with_multiplicity(p, true);
  inv.n_minus = roots_with_multiplicity(p, false);
  inv.rank = inv.n_plus + inv.n_minus;
  inv.signature = inv.n_plus > inv.n_minus ? inv.n_plus - inv.n_minus : inv.n_minus - inv.n_plus;
  // Lowest nonzero coefficient is (-1)^rank times the product of the nonzero eigenvalues.
  Poly q = strip_zero_roots(p);
  inv.nondeg_det = inv.rank % 2 == 1 ? Rat(-q.front()) : q.front();
  return inv;
}

LatticeInvariants signature_via_gso(const IntMatrix& G) {
  KernelSplit ks = kernel_split(G);
  LatticeInvariants inv;
  inv.dim = G.rows();
  inv.rank = ks.rank;
  inv.nondeg_det = Rat(determinant(ks.G_ell));
  if (ks.rank == 0) return inv;
  ReductionResult r = reduce(ks.G_ell);
  if (r.rank != ks.rank) throw ReducerError("signature_via_gso: reducer lost rank on a nondegenerate matrix");
  for (int s : star_signs(r.trace, r.gso)) {
    if (s > 0) ++inv.n_plus;
    else if (s < 0) ++inv.n_minus;
  }
  for (const Block& b : r.trace)
    if (b.kind == BlockKind::Hyperbolic) {
      ++inv.n_plus;
      ++inv.n_minus;
    }
  inv.signature = inv.n_plus > inv.n_minus ? inv.n_plus - inv.n_minus : inv.n_minus - inv.n_plus;
  return inv;
}

Rat d_lll(const Rat& gamma0) { return gamma0 * gamma0 / (gamma0 - Rat(1, 4)); }

BoundReport verify_theorem_bound(const ReductionResult& result, const IntMatrix& G_in, const Rat& gamma0) {
  const Index d = G_in.rows();
  if (result.U.rows() != d || result.reduced_gram.rows() != d)
    throw std::invalid_argument("verify_theorem_bound: dimension mismatch");
  Int du = determinant(result.U);
  if (du != 1 && du != -1) throw std::invalid_argument("verify_theorem_bound: transform is not unimodular");
  if (congruence(G_in, result.U) != result.reduced_gram)
    throw std::invalid_argument("verify_theorem_bound: reduced Gram matrix is not congruent to the input");
  KernelSplit ks = kernel_split(G_in);
  if (ks.rank != result.rank) throw std::invalid_argument("verify_theorem_bound: rank mismatch");

  BoundReport rep;
  rep.rank = result.rank;
  rep.sum_N = result.sum_N();
  rep.nondeg_det = abs(Rat(determinant(ks.G_ell)));
  rep.first = result.first_value();
  const auto l = static_cast<unsigned long>(rep.rank);
  rep.lhs = pow(rep.first, l);
  rep.rhs = pow(1 / gamma0, l * (l > 0 ? l - 1 : 0)) * pow(d_lll(gamma0), rep.sum_N) * rep.nondeg_det;
  rep.theorem_ok = rep.lhs <= rep.rhs;
  rep.slack = rep.lhs == 0 ? Rat(0) : Rat(rep.rhs / rep.lhs);
  rep.signature = signature_via_sturm(to_rational(G_in)).signature;
  const auto s = static_cast<unsigned long>(rep.signature);
  rep.heuristic_rhs = pow(Rat(4, 3), s * (s > 0 ? s - 1 : 0)) * rep.nondeg_det;
  rep.heuristic_ok = rep.lhs <= rep.heuristic_rhs;
  return rep;
}

ReductionResult describe_reduced(const IntMatrix& U, const IntMatrix& reduced_gram) {
  ReductionResult r;
  r.U = U;
  r.reduced_gram = reduced_gram;
  r.rank = kernel_split(reduced_gram).rank;
  RatMatrix G = to_rational(reduced_gram);
  auto trace = greedy_trace(G, r.rank);
  if (!trace) throw std::invalid_argument("leading block of the reduced Gram matrix is not admissible");
  r.trace = *trace;
  r.gso = generalized_gso(G, r.trace);
  r.block_kinds = classify_pairs(r.trace, r.gso);
  return r;
}

std::vector<BlockCheck> check_blocks(const IntMatrix& gram, const AdmissibleTrace& trace, const ReducerParams& params) {
  std::vector<BlockCheck> out;
  const Index l = trace_length(trace);
  RatMatrix G = to_rational(gram);
  GsoState s = generalized_gso(G, trace);
  std::vector<PairKind> kinds = classify_pairs(trace, s);
  ReductionState base(gram, params, trace);
  for (const Block& b : trace) {
    const Index q = b.index;
    if (q == 0 || q >= l) continue;
    ReductionState probe = base;
    bool settled = probe.step_at(q) > 0;
    bool strict = settled;
    if (b.kind == BlockKind::Scalar && s.is_good(q - 1)) {
      const Rat& N1 = s.star_norms[q - 1];
      Rat S = RatVector(G.row(q).head(q).transpose()).dot(s.star.col(q - 1).head(q));
      strict = is_reduced({N1, 2 * S, s.star_norms[q] + S * S / N1});
    }
    out.push_back({q, kinds[q - 1], strict, settled});
  }
  return out;
}

std::vector<BlockCheck> check_blocks(const ReductionResult& r, const ReducerParams& params) {
  return check_blocks(r.reduced_gram, r.trace, params);
}

RatMatrix hermitian_embed(const RatMatrix& re, const RatMatrix& im) {
  const Index n = re.rows();
  if (re.cols() != n || im.rows() != n || im.cols() != n)
    throw std::invalid_argument("hermitian_embed: real and imaginary parts must be square of equal size");
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (re(i, j) != re(j, i) || im(i, j) != -im(j, i))
        throw std::invalid_argument("hermitian_embed: matrix is not Hermitian at (" + std::to_string(i + 1) + ", " +
                                    std::to_string(j + 1) + ")");
  RatMatrix out(2 * n, 2 * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      out(2 * i, 2 * j) = re(i, j);
      out(2 * i, 2 * j + 1) = -im(i, j);
      out(2 * i + 1, 2 * j) = im(i, j);
      out(2 * i + 1, 2 * j + 1) = re(i, j);
    }
  return out;
}

PlaneRemoval remove_hyperbolic_plane(const RatMatrix& G3) {
  if (G3.rows() != 3 || G3.cols() != 3) throw std::invalid_argument("remove_hyperbolic_plane: expected a 3x3 matrix");
  const Rat alpha = G3(1, 2);
  RatMatrix shape = RatMatrix::Zero(3, 3);
  shape(0, 0) = 1;
  shape(1, 2) = shape(2, 1) = alpha;
  if (alpha == 0 || G3 != shape)
    throw std::invalid_argument("remove_hyperbolic_plane: expected [[1,0,0],[0,0,a],[0,a,0]] with a != 0");
  IntMatrix U(3, 3);
  U << 1, 1, 1, 1, 1, 0, -1, 0, -1;
  if (alpha < 0) U.row(2) = -U.row(2);
  return {congruence(G3, to_rational(U)), U};
}

}  // namespace indef
