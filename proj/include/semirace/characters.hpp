#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

namespace semirace {

enum class Parity { kEven, kOdd };

namespace detail {
struct CharacterGroup;
}

// A Dirichlet character mod q.
//
// Canonical order: (Z/qZ)* is split into cyclic components, taken in
// ascending order of the prime factors of q. An odd prime power p^k gives one
// component generated by the least primitive root g mod p^k. 4 gives the
// component <-1>; 2^k with k >= 3 gives <-1> followed by <5>. A character is
// fixed by exponents (j_1, ..., j_r) with chi(g_i) = exp(2 pi i j_i / n_i),
// and its index is j_1 + n_1 (j_2 + n_2 (j_3 + ...)). Index 0 is principal.
//
// Values are computed from discrete-log tables shared by all characters of
// the same modulus.
class DirichletCharacter {
 public:
  DirichletCharacter(std::shared_ptr<const detail::CharacterGroup> group, std::size_t index);

  std::uint64_t modulus() const;
  std::size_t index() const { return index_; }
  std::complex<double> operator()(std::uint64_t n) const;
  // Value table over residues [0, q); zero off (Z/qZ)*.
  std::vector<std::complex<double>> values() const;

  bool is_principal() const { return index_ == 0; }
  bool is_real() const { return is_real_; }
  // A(chi): 1 iff chi is real and nonprincipal.
  int a_chi() const { return is_real_ && !is_principal() ? 1 : 0; }
  Parity parity() const { return parity_; }
  std::uint64_t conductor() const { return conductor_; }
  bool is_primitive() const { return conductor_ == modulus(); }
  std::size_t conjugate_index() const { return conjugate_index_; }

  bool operator==(const DirichletCharacter& o) const {
    return modulus() == o.modulus() && index_ == o.index_;
  }

 private:
  std::shared_ptr<const detail::CharacterGroup> group_;
  std::size_t index_;
  std::vector<std::uint64_t> exponents_;
  bool is_real_ = false;
  Parity parity_ = Parity::kEven;
  std::uint64_t conductor_ = 1;
  std::size_t conjugate_index_ = 0;
};

// All phi(q) characters mod q in canonical order. 3 <= q <= 10^6.
std::vector<DirichletCharacter> characters(std::uint64_t q);

// One character by canonical index.
DirichletCharacter character(std::uint64_t q, std::size_t index);

}  // namespace semirace
