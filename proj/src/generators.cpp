#include "indeflll/generators.hpp"

#include <limits>
#include <stdexcept>

namespace indef {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::int64_t SplitMix64::uniform(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw std::invalid_argument("uniform: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (span == std::numeric_limits<std::uint64_t>::max()) return static_cast<std::int64_t>(next());
  const std::uint64_t n = span + 1;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do x = next();
  while (x >= limit);
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + x % n);
}

Int SplitMix64::uniform(const Int& lo, const Int& hi) {
  if (lo > hi) throw std::invalid_argument("uniform: empty range");
  Int span = hi - lo;
  if (span.fits_slong_p() && lo.fits_slong_p() && hi.fits_slong_p())
    return Int(static_cast<long>(uniform(static_cast<std::int64_t>(lo.get_si()), static_cast<std::int64_t>(hi.get_si()))));
  // Wide ranges: draw 64-bit limbs until the candidate falls under the span.
  const std::size_t bits = mpz_sizeinbase(span.get_mpz_t(), 2);
  for (;;) {
    Int x = 0;
    for (std::size_t got = 0; got < bits; got += 64) {
      x <<= 64;
      x += static_cast<unsigned long>(next());
    }
    x >>= static_cast<mp_bitcnt_t>((bits + 63) / 64 * 64 - bits);
    if (x <= span) return lo + x;
  }
}

IntMatrix gen_random_symmetric(Index dim, const Int& bound, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("dimension must be at least 1");
  if (bound < 0) throw std::invalid_argument("bound must be non-negative");
  SplitMix64 rng(seed);
  IntMatrix G(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = i; j < dim; ++j) G(i, j) = G(j, i) = rng.uniform(Int(-bound), bound);
  return G;
}

IntMatrix worstcase_block(Index d, const Int& lambda) {
  IntMatrix G = IntMatrix::Zero(d, d);
  // Entry (3/4)^k lambda must stay integral, so lambda carries enough factors of 4.
  auto scaled = [&](Index k) {
    Int num = lambda;
    Int den = 1;
    for (Index i = 0; i < k; ++i) {
      num *= 3;
      den *= 4;
    }
    if (num % den != 0) throw std::invalid_argument("worstcase_block: lambda is not divisible enough by 4");
    return Int(num / den);
  };
  G(0, 0) = 2 * lambda;
  for (Index i = 1; i < d; ++i) G(i, i) = 2 * scaled(i - 1);
  for (Index i = 0; i + 1 < d; ++i) G(i, i + 1) = G(i + 1, i) = scaled(i);
  return G;
}

IntMatrix gen_worstcase(Index d) {
  if (d < 2) throw std::invalid_argument("worstcase: d must be at least 2");
  Int lambda, mu;
  mpz_ui_pow_ui(lambda.get_mpz_t(), 16, static_cast<unsigned long>(d - 1));
  mpz_ui_pow_ui(mu.get_mpz_t(), 12, static_cast<unsigned long>(d - 1));
  lambda /= 4;
  mu /= 4;
  IntMatrix H = IntMatrix::Zero(2 * d, 2 * d);
  H.topLeftCorner(d, d) = worstcase_block(d, lambda);
  H.bottomRightCorner(d, d) = -worstcase_block(d, mu);
  return H;
}

IntMatrix gen_random_unimodular(Index dim, std::size_t steps, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("dimension must be at least 1");
  SplitMix64 rng(seed);
  IntMatrix U = IntMatrix::Identity(dim, dim);
  const std::int64_t n = static_cast<std::int64_t>(dim);
  for (std::size_t s = 0; s < steps; ++s) {
    std::int64_t move = dim == 1 ? 3 : rng.uniform(0, 3);
    if (move <= 1) {
      Index i = rng.uniform(0, n - 1);
      Index j = rng.uniform(0, n - 2);
      if (j >= i) ++j;
      std::int64_t off = rng.uniform(-3, 2);
      if (off >= 0) ++off;
      U.col(i) += Int(static_cast<long>(off)) * U.col(j);
    } else if (move == 2) {
      Index i = rng.uniform(0, n - 1);
      Index j = rng.uniform(0, n - 2);
      if (j >= i) ++j;
      U.col(i).swap(U.col(j));
    } else {
      Index i = rng.uniform(0, n - 1);
      U.col(i) = -U.col(i);
    }
  }
  return U;
}

IntMatrix gen_hyperbolic_stack(Index n, const std::vector<Int>& alphas) {
  if (n < 1) throw std::invalid_argument("hyperbolic stack needs at least one copy");
  if (static_cast<Index>(alphas.size()) != n) throw std::invalid_argument("hyperbolic stack: expected one alpha per copy");
  IntMatrix G = IntMatrix::Zero(3 * n, 3 * n);
  for (Index k = 0; k < n; ++k) {
    const Int& a = alphas[static_cast<std::size_t>(k)];
    if (a == 0) throw std::invalid_argument("hyperbolic stack: alpha must be nonzero");
    G(3 * k, 3 * k) = 1;
    G(3 * k + 1, 3 * k + 2) = G(3 * k + 2, 3 * k + 1) = a;
  }
  return G;
}

IntMatrix gen_large_signature(Index dim, const Int& bound, std::uint64_t seed) {
  if (dim < 2) throw std::invalid_argument("large-signature: dimension must be at least 2");
  if (bound < 1) throw std::invalid_argument("bound must be at least 1");
  SplitMix64 rng(seed);
  const Index m = dim - 1;
  IntMatrix B(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) B(i, j) = rng.uniform(Int(-bound), bound);
  IntMatrix G = IntMatrix::Zero(dim, dim);
  G.topLeftCorner(m, m) = IntMatrix(B.transpose() * B) + IntMatrix::Identity(m, m);
  Int k = rng.uniform(Int(1), bound);
  G(m, m) = -k * k;
  return G;
}

GenKind parse_gen_kind(const std::string& s) {
  if (s == "random" || s == "random-symmetric") return GenKind::RandomSymmetric;
  if (s == "worstcase") return GenKind::Worstcase;
  if (s == "large-signature") return GenKind::LargeSignature;
  if (s == "hyperbolic-stack") return GenKind::HyperbolicStack;
  if (s == "random-unimodular") return GenKind::RandomUnimodular;
  throw std::invalid_argument("unknown generator kind '" + s + "'");
}

std::string to_string(GenKind k) {
  switch (k) {
    case GenKind::RandomSymmetric: return "random";
    case GenKind::Worstcase: return "worstcase";
    case GenKind::LargeSignature: return "large-signature";
    case GenKind::HyperbolicStack: return "hyperbolic-stack";
    case GenKind::RandomUnimodular: return "random-unimodular";
  }
  return "?";
}

void GenSpec::validate() const {
  if (dim < 1) throw std::invalid_argument("dim must be at least 1");
  if (bound < 0) throw std::invalid_argument("bound must be non-negative");
  if (kind == GenKind::Worstcase && blocks < 2) throw std::invalid_argument("worstcase: d must be at least 2");
  if (kind == GenKind::HyperbolicStack && blocks < 1) throw std::invalid_argument("hyperbolic stack needs n >= 1");
}

IntMatrix generate(const GenSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case GenKind::RandomSymmetric: return gen_random_symmetric(spec.dim, spec.bound, spec.seed);
    case GenKind::Worstcase: return gen_worstcase(spec.blocks);
    case GenKind::LargeSignature: return gen_large_signature(spec.dim, spec.bound, spec.seed);
    case GenKind::HyperbolicStack: {
      std::vector<Int> alphas = spec.alphas;
      if (alphas.empty()) alphas.assign(static_cast<std::size_t>(spec.blocks), Int(1));
      return gen_hyperbolic_stack(spec.blocks, alphas);
    }
    case GenKind::RandomUnimodular:
      return gen_random_unimodular(spec.dim, spec.steps == 0 ? 3 * static_cast<std::size_t>(spec.dim) : spec.steps,
                                   spec.seed);
  }
  throw std::logic_error("unhandled generator kind");
}

}  // namespace indef
