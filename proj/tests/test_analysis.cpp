#include "indeflll/generators.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace indef;
using oracle::ints;
using oracle::rats;

namespace {

IntMatrix conclusion_U() { return ints(4, {1, 0, 1, 1, -1, 1, 0, -1, 1, -1, -1, 0, 0, 1, 1, 1}); }

}  // namespace

TEST_CASE("kernel_split examples") {
  auto a = kernel_split(ints(2, {1, 1, 1, 1}));
  CHECK(a.rank == 1);
  CHECK(IntMatrix(a.U.transpose() * ints(2, {1, 1, 1, 1}) * a.U) == ints(2, {1, 0, 0, 0}));
  CHECK(a.G_ell == ints(1, {1}));

  IntMatrix inv = ints(2, {2, 1, 1, -3});
  auto b = kernel_split(inv);
  CHECK(b.rank == 2);
  CHECK(IntMatrix(b.U.transpose() * inv * b.U) == b.G_ell);

  auto c = kernel_split(IntMatrix::Zero(3, 3));
  CHECK(c.rank == 0);
  CHECK(c.U == IntMatrix::Identity(3, 3));
}

TEST_CASE("kernel_split on random degenerate matrices") {
  oracle::Gen g(51);
  for (int n = 0; n < 150; ++n) {
    Index d = g.range(1, 7), r = g.range(0, d);
    IntMatrix B(r, d);
    for (Index i = 0; i < r; ++i)
      for (Index j = 0; j < d; ++j) B(i, j) = g.range(-4, 4);
    IntMatrix D = IntMatrix::Zero(r, r);
    for (Index i = 0; i < r; ++i) D(i, i) = g.range(1, 5) * (g.coin() ? 1 : -1);
    IntMatrix G = B.transpose() * D * B;
    auto k = kernel_split(G);
    IntMatrix T = k.U.transpose() * G * k.U;
    Int det = determinant(k.U);
    CHECK((det == 1 || det == -1));
    CHECK(T.topLeftCorner(k.rank, k.rank) == k.G_ell);
    CHECK(determinant(k.G_ell) != 0);
    for (Index i = k.rank; i < d; ++i)
      for (Index j = 0; j < d; ++j) CHECK(T(i, j) == 0);
    CHECK(k.rank == signature_via_sturm(to_rational(G)).rank);
  }
}

TEST_CASE("signature examples") {
  auto a = signature_via_gso(ints(3, {1, 0, 0, 0, -1, 0, 0, 0, 1}));
  CHECK(a.n_plus == 2);
  CHECK(a.n_minus == 1);
  CHECK(a.signature == 1);
  auto b = signature_via_gso(ints(2, {0, 1, 1, 0}));
  CHECK(b.n_plus == 1);
  CHECK(b.n_minus == 1);
  CHECK(b.signature == 0);

  auto c = signature_via_sturm(rats(2, {2, 0, 0, -3}));
  CHECK(c.n_plus == 1);
  CHECK(c.n_minus == 1);
  CHECK(c.nondeg_det == -6);
  auto d = signature_via_sturm(rats(2, {0, 5, 5, 0}));
  CHECK(d.n_plus == 1);
  CHECK(d.n_minus == 1);
  auto e = signature_via_sturm(RatMatrix::Identity(4, 4));
  CHECK(e.n_plus == 4);
  CHECK(e.n_minus == 0);
  auto f = signature_via_sturm(rats(3, {1, 1, 0, 1, 1, 0, 0, 0, -2}));
  CHECK(f.rank == 2);
  CHECK(f.n_plus == 1);
  CHECK(f.n_minus == 1);
  CHECK(f.nondeg_det == -4);
  CHECK(signature_via_gso(ints(3, {1, 1, 0, 1, 1, 0, 0, 0, -2})).nondeg_det == -2);
}

TEST_CASE("large-signature instance") {
  IntMatrix G = oracle::load_data("large_signature.txt");
  auto s = signature_via_sturm(to_rational(G));
  CHECK(s.signature == 8);
  CHECK(s.rank == 10);
  CHECK(s.nondeg_det == Rat(Int("-324061814117266723750464")));
  auto g = signature_via_gso(G);
  CHECK(g.n_plus == s.n_plus);
  CHECK(g.n_minus == s.n_minus);
  // 224^10 <= |det| < 225^10
  Int lo, hi;
  mpz_ui_pow_ui(lo.get_mpz_t(), 224, 10);
  mpz_ui_pow_ui(hi.get_mpz_t(), 225, 10);
  CHECK(abs(s.nondeg_det) >= Rat(lo));
  CHECK(abs(s.nondeg_det) < Rat(hi));
}

TEST_CASE("worst-case determinant") {
  auto s = signature_via_sturm(to_rational(gen_worstcase(5)));
  Int root;
  mpz_ui_pow_ui(root.get_mpz_t(), 10368, 10);
  CHECK(abs(s.nondeg_det) == Rat(root));
  CHECK(s.signature == 0);
}

TEST_CASE("Sturm counts agree with Descartes on symmetric matrices") {
  oracle::Gen g(52);
  for (int n = 0; n < 200; ++n) {
    Index d = g.range(1, 7);
    IntMatrix M = g.symmetric(d, 20);
    RatMatrix G = to_rational(M);
    Poly p = characteristic_polynomial(G);
    auto [pos, neg] = oracle::descartes_signature(G);
    auto s = signature_via_sturm(G);
    CHECK(s.n_plus == pos);
    CHECK(s.n_minus == neg);
    CHECK(s.n_plus + s.n_minus == s.rank);
    if (s.rank > 0) CHECK(sgn(s.nondeg_det) == (s.n_minus % 2 == 0 ? 1 : -1));
    CHECK(p.back() == 1);
    // Constant term of det(xI - G) is (-1)^d det G.
    Rat det(oracle::laplace_det(M));
    CHECK(p.front() == (d % 2 == 0 ? det : Rat(-det)));
  }
}

TEST_CASE("Sturm root counting on explicit polynomials") {
  // (x - 1)(x - 2)(x + 3) = x^3 - 7x + 6
  Poly p{6, -7, 0, 1};
  CHECK(sturm_positive_roots(p) == 2);
  CHECK(sturm_negative_roots(p) == 1);
  // x^2 (x - 5)
  Poly q{0, 0, -5, 1};
  CHECK(sturm_positive_roots(q) == 1);
  CHECK(sturm_negative_roots(q) == 0);
}

TEST_CASE("gso and Sturm signatures agree") {
  oracle::Gen g(53);
  int seen = 0;
  for (int n = 0; n < 150; ++n) {
    IntMatrix G = g.symmetric(g.range(1, 8), 50);
    if (determinant(G) == 0) continue;
    ++seen;
    auto a = signature_via_gso(G);
    auto b = signature_via_sturm(to_rational(G));
    CHECK(a.n_plus == b.n_plus);
    CHECK(a.n_minus == b.n_minus);
    CHECK(a.nondeg_det == b.nondeg_det);
  }
  CHECK(seen > 100);
}

TEST_CASE("signature survives unimodular congruence") {
  oracle::Gen g(54);
  IntMatrix G = oracle::load_data("random10.txt");
  auto base = signature_via_sturm(to_rational(G));
  for (int n = 0; n < 100; ++n) {
    IntMatrix W = g.unimodular(10, 12);
    auto s = signature_via_sturm(to_rational(IntMatrix(W.transpose() * G * W)));
    CHECK(s.n_plus == base.n_plus);
    CHECK(s.n_minus == base.n_minus);
  }
}

TEST_CASE("theorem bound") {
  IntMatrix I = IntMatrix::Identity(4, 4);
  auto id = verify_theorem_bound(reduce(I), I, Rat(99, 100));
  CHECK(id.theorem_ok);
  CHECK(id.slack >= 1);

  IntMatrix H = gen_worstcase(5);
  BoundReport tight;
  for (Rat gamma : {Rat(99, 100), Rat(999, 1000), Rat(9999, 10000)}) {
    ReducerParams p;
    p.gamma0 = gamma;
    tight = verify_theorem_bound(reduce(H, p), H, gamma);
    CHECK(tight.theorem_ok);
  }
  // lhs / rhs tends to 1 as gamma0 approaches 1.
  CHECK(tight.slack < Rat(11, 10));

  ReductionResult r = reduce(I);
  r.reduced_gram(0, 0) = 2;
  CHECK_THROWS_AS(verify_theorem_bound(r, I, Rat(99, 100)), std::invalid_argument);
  CHECK(d_lll(Rat(99, 100)) == Rat(9801, 10000) / Rat(74, 100));
}

TEST_CASE("describe_reduced reconstructs a run") {
  IntMatrix G = oracle::load_data("random10.txt");
  ReductionResult r = reduce(G);
  ReductionResult again = describe_reduced(r.U, r.reduced_gram);
  CHECK(again.rank == r.rank);
  CHECK(again.trace == r.trace);
  CHECK(again.block_kinds == r.block_kinds);
  auto blocks = check_blocks(again, ReducerParams{});
  for (const auto& b : blocks) CHECK(b.settled);
}

TEST_CASE("hermitian embedding") {
  auto a = hermitian_embed(rats(1, {2}), rats(1, {0}));
  CHECK(a == rats(2, {2, 0, 0, 2}));
  auto b = hermitian_embed(rats(2, {0, 0, 0, 0}), rats(2, {0, 1, -1, 0}));
  CHECK(b.rows() == 4);
  CHECK(is_symmetric(b));
  auto c = hermitian_embed(RatMatrix::Identity(2, 2), RatMatrix::Zero(2, 2));
  CHECK(c == RatMatrix::Identity(4, 4));
  CHECK_THROWS(hermitian_embed(rats(2, {1, 2, 3, 1}), rats(2, {0, 0, 0, 0})));
}

TEST_CASE("hermitian embedding doubles eigenvalue signs") {
  oracle::Gen g(55);
  for (int n = 0; n < 40; ++n) {
    Index d = g.range(1, 3);
    RatMatrix re = to_rational(g.symmetric(d, 6));
    RatMatrix im = RatMatrix::Zero(d, d);
    for (Index i = 0; i < d; ++i)
      for (Index j = i + 1; j < d; ++j) {
        im(i, j) = g.range(-6, 6);
        im(j, i) = -im(i, j);
      }
    // The Hermitian eigenvalues are those of the embedding, each counted twice; recover
    // their signs from the 2d x 2d characteristic polynomial, a perfect square.
    RatMatrix E = hermitian_embed(re, im);
    auto s = signature_via_sturm(E);
    auto [pos, neg] = oracle::descartes_signature(E);
    CHECK(s.n_plus == pos);
    CHECK(s.n_minus == neg);
    CHECK(s.n_plus % 2 == 0);
    CHECK(s.n_minus % 2 == 0);
    if (d == 1) {
      CHECK(s.n_plus == (re(0, 0) > 0 ? 2 : 0));
      CHECK(s.n_minus == (re(0, 0) < 0 ? 2 : 0));
    }
  }
}

TEST_CASE("removing a hyperbolic plane") {
  auto a = remove_hyperbolic_plane(rats(3, {1, 0, 0, 0, 0, 1, 0, 1, 0}));
  CHECK(a.gram == rats(3, {-1, 0, 0, 0, 1, 0, 0, 0, 1}));
  CHECK(to_rational(a.U).transpose() * rats(3, {1, 0, 0, 0, 0, 1, 0, 1, 0}) * to_rational(a.U) == a.gram);

  RatMatrix half(3, 3);
  half << 1, 0, 0, 0, 0, Rat(1, 2), 0, Rat(1, 2), 0;
  RatMatrix expect(3, 3);
  expect << 0, Rat(1, 2), Rat(1, 2), Rat(1, 2), 1, Rat(1, 2), Rat(1, 2), Rat(1, 2), 1;
  CHECK(remove_hyperbolic_plane(half).gram == expect);

  auto neg = remove_hyperbolic_plane(rats(3, {1, 0, 0, 0, 0, -3, 0, -3, 0}));
  CHECK(to_rational(neg.U).transpose() * rats(3, {1, 0, 0, 0, 0, -3, 0, -3, 0}) * to_rational(neg.U) == neg.gram);
  CHECK(abs(Rat(determinant(neg.U))) == 1);

  CHECK_THROWS_AS(remove_hyperbolic_plane(rats(3, {1, 0, 0, 0, 1, 0, 0, 0, 1})), std::invalid_argument);
  CHECK_THROWS_AS(remove_hyperbolic_plane(rats(2, {0, 1, 1, 0})), std::invalid_argument);
}

TEST_CASE("automorphisms") {
  IntMatrix G = oracle::load_data("conclusion_G.txt");
  IntMatrix U = conclusion_U();
  CHECK(abs(Rat(determinant(U))) == 1);
  IntMatrix P = IntMatrix::Identity(4, 4);
  std::vector<IntMatrix> powers;
  for (long k = 1; k <= 6; ++k) {
    P = P * U;
    CHECK(automorphy_check(G, P));
    long expect = ((k % 2 == 0 ? 1 : -1) + 7 + 2 * k * k) / 8;
    CHECK(P(0, 0) == expect);
    for (const auto& Q : powers) CHECK(Q != P);
    powers.push_back(P);
  }
  IntMatrix I = IntMatrix::Identity(2, 2);
  CHECK(automorphy_check(I, I));
  CHECK_FALSE(automorphy_check(I, ints(2, {1, 1, 0, 1})));
}
