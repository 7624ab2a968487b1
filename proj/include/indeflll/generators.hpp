#pragma once

#include "indeflll/gram.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace indef {

/// SplitMix64 (Steele, Lea, Flood 2014): state += 0x9e3779b97f4a7c15, then mix.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform on [lo, hi] by rejection, no modulo bias.
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  Int uniform(const Int& lo, const Int& hi);

 private:
  std::uint64_t state_;
};

IntMatrix gen_random_symmetric(Index dim, const Int& bound, std::uint64_t seed);

/// diag(G_lambda, -G_mu) of size 2d with lambda = 16^(d-1)/4, mu = 12^(d-1)/4.
IntMatrix gen_worstcase(Index d);
/// The chained block with parameter lambda, d x d.
IntMatrix worstcase_block(Index d, const Int& lambda);

/// Product of `steps` random column moves: translation by an offset in
/// [-3, 3] \ {0}, transposition, or sign flip.
IntMatrix gen_random_unimodular(Index dim, std::size_t steps, std::uint64_t seed);

/// Diagonal assembly of [1] + [[0, a], [a, 0]] for each a in alphas.
IntMatrix gen_hyperbolic_stack(Index n, const std::vector<Int>& alphas);

/// B^T B + I of size dim - 1 (entries of B in [-bound, bound]) next to -k^2, k in [1, bound].
IntMatrix gen_large_signature(Index dim, const Int& bound, std::uint64_t seed);

enum class GenKind { RandomSymmetric, Worstcase, LargeSignature, HyperbolicStack, RandomUnimodular };

GenKind parse_gen_kind(const std::string& s);
std::string to_string(GenKind k);

struct GenSpec {
  GenKind kind = GenKind::RandomSymmetric;
  Index dim = 1;
  Int bound = 100;
  std::uint64_t seed = 0;
  Index blocks = 2;               // d for worstcase, n for hyperbolic stacks
  std::vector<Int> alphas;        // hyperbolic stacks; empty means all ones
  std::size_t steps = 0;          // random unimodular; 0 means 3 * dim

  void validate() const;
};

IntMatrix generate(const GenSpec& spec);

}  // namespace indef
