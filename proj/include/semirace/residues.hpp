#pragma once

#include <cstdint>
#include <vector>

namespace semirace {

std::uint64_t gcd(std::uint64_t a, std::uint64_t b);
std::uint64_t euler_phi(std::uint64_t q);

// Residues in [0, q) coprime to q, ascending.
std::vector<std::uint64_t> coprime_residues(std::uint64_t q);

// N(q,a): number of x coprime to q with x^2 = a (mod q), by enumeration.
int n_sqrt(std::uint64_t q, std::uint64_t a);

// A modulus with an ordered pair of distinct reduced residues coprime to it.
class RaceConfig {
 public:
  RaceConfig(std::uint64_t q, std::uint64_t a, std::uint64_t b);

  std::uint64_t q() const { return q_; }
  std::uint64_t a() const { return a_; }
  std::uint64_t b() const { return b_; }
  std::uint64_t phi_q() const { return phi_q_; }
  const std::vector<std::uint64_t>& coprime() const { return coprime_; }

  // The same race with the residues swapped.
  RaceConfig swapped() const { return RaceConfig(q_, b_, a_); }

  // (N(q,b) - N(q,a)) / phi(q), the mean of the normalized prime race.
  double prime_bias() const;
  // (N(q,b) - N(q,a)) / (2 phi(q)), the constant in the semiprime race.
  double semiprime_bias() const { return 0.5 * prime_bias(); }

 private:
  std::uint64_t q_;
  std::uint64_t a_;
  std::uint64_t b_;
  std::uint64_t phi_q_;
  std::vector<std::uint64_t> coprime_;
};

}  // namespace semirace
