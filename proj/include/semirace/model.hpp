#pragma once

// Limiting distribution of the normalized prime race (log x / sqrt x) Delta,
// sampled with independent uniform phases per zero, and the bias densities
// derived from it.

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "semirace/residues.hpp"
#include "semirace/zeros.hpp"

namespace semirace {

// Identifier written into run metadata so samples can be regenerated.
inline constexpr const char* kRngAlgorithm =
    "mt19937_64; shard seed = seed_seq{seed_lo, seed_hi, shard_lo, shard_hi}; "
    "shard = 65536 samples; uniform = (u >> 11) * 2^-53; normal = Box-Muller";

inline constexpr std::size_t kSamplesPerShard = 65536;

// One harmonic 2 Re(z * amplitude) of the limiting variable, z uniform on the
// unit circle. Terms cover every zero 0 < gamma <= height of every
// nonprincipal character, ordered by character index then gamma, so that
// variables for different residue pairs share phases term by term.
struct LimitTerm {
  std::complex<double> amplitude;
  double gamma;
  std::size_t character_index;
};

// Gaussian surrogate for the zeros above the height, one per nonprincipal
// character: Re(coefficient * (g1 + i g2)) with g1, g2 standard normal.
struct TailComponent {
  std::complex<double> coefficient;
  std::size_t character_index;
};

struct LimitRV {
  RaceConfig config;
  double mean = 0.0;               // (N(q,b) - N(q,a)) / phi(q)
  double delta2_threshold = 0.0;   // (N(q,b) - N(q,a)) / (2 phi(q))
  double height = 0.0;
  std::vector<LimitTerm> terms;
  std::vector<TailComponent> tail;
  double tail_sigma = 0.0;         // sqrt of sum |coefficient|^2
};

// Analytic tail variance factor: integral over t > T of dN(t) / (1/4 + t^2),
// with dN the density of zero_count_estimate (clamped at zero).
double tail_integral(const DirichletCharacter& chi, double T);

// zeros: one list per nonprincipal character mod q, all with the same height.
LimitRV build_limit_rv(const RaceConfig& cfg, std::span<const ZeroList> zeros);

struct SampleOptions {
  unsigned threads = 0;  // 0: hardware concurrency; results do not depend on it
};

std::vector<double> sample(const LimitRV& rv, std::size_t count, std::uint64_t seed,
                           const SampleOptions& opts = {});

struct DensityEstimate {
  double value = 0.0;
  double half_width = 0.0;  // 95% Wilson interval
  std::size_t samples = 0;
  double zero_height = 0.0;
};

// Estimate from `hits` out of `n` Bernoulli trials with a 95% Wilson interval
// half-width.
DensityEstimate wilson_estimate(std::size_t hits, std::size_t n, double zero_height);

// P[X > 0]: the logarithmic density of {x : Delta(x;q,a,b) > 0}.
DensityEstimate density_delta(const LimitRV& rv, std::size_t count, std::uint64_t seed,
                              const SampleOptions& opts = {});

// P[X < delta2_threshold]: the logarithmic density of {x : Delta2(x;q,a,b) > 0}.
DensityEstimate density_delta2(const LimitRV& rv, std::size_t count, std::uint64_t seed,
                               const SampleOptions& opts = {});

// Joint event for several races sharing one draw of phases. For race i the
// semiprime signal is modelled by Y_i = delta2_threshold_i - X_i; want_positive[i]
// selects Y_i > 0 (Delta2 ahead) or Y_i < 0.
DensityEstimate joint_probability(std::span<const LimitRV> rvs,
                                  const std::vector<bool>& want_positive, std::size_t count,
                                  std::uint64_t seed, const SampleOptions& opts = {});

}  // namespace semirace
