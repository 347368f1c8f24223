#include "semirace/residues.hpp"

#include <numeric>
#include <string>

#include "semirace/error.hpp"

namespace semirace {

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

std::uint64_t euler_phi(std::uint64_t q) {
  std::uint64_t result = q;
  std::uint64_t m = q;
  for (std::uint64_t p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    while (m % p == 0) m /= p;
    result -= result / p;
  }
  if (m > 1) result -= result / m;
  return result;
}

std::vector<std::uint64_t> coprime_residues(std::uint64_t q) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t r = 1; r < q; ++r) {
    if (std::gcd(r, q) == 1) out.push_back(r);
  }
  if (q == 1) out.push_back(0);
  return out;
}

int n_sqrt(std::uint64_t q, std::uint64_t a) {
  if (q == 0) throw UsageError("modulus must be positive");
  a %= q;
  if (std::gcd(a, q) != 1) throw UsageError("n_sqrt: residue not coprime to modulus");
  int count = 0;
  for (std::uint64_t x = 1; x < q; ++x) {
    if (std::gcd(x, q) != 1) continue;
    // x < q <= 10^9 keeps x*x inside 64 bits.
    if ((x * x) % q == a) ++count;
  }
  return count;
}

RaceConfig::RaceConfig(std::uint64_t q, std::uint64_t a, std::uint64_t b) : q_(q) {
  if (q < 3) throw UsageError("modulus q must be >= 3, got " + std::to_string(q));
  a_ = a % q;
  b_ = b % q;
  if (std::gcd(a_, q) != 1 || std::gcd(b_, q) != 1) {
    throw UsageError("residues " + std::to_string(a) + "," + std::to_string(b) +
                     " must be coprime to q=" + std::to_string(q));
  }
  if (a_ == b_) throw UsageError("race residues must be distinct mod q");
  coprime_ = coprime_residues(q);
  phi_q_ = coprime_.size();
}

double RaceConfig::prime_bias() const {
  return static_cast<double>(n_sqrt(q_, b_) - n_sqrt(q_, a_)) / static_cast<double>(phi_q_);
}

}  // namespace semirace
