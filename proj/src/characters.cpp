#include "semirace/characters.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "semirace/error.hpp"
#include "semirace/residues.hpp"

namespace semirace {

namespace detail {

struct Component {
  std::uint64_t prime;      // p of the prime power this component lives on
  unsigned power;           // k
  std::uint64_t modulus;    // p^k
  std::uint64_t order;      // n_i
  bool two_adic_five;       // the <5> factor of (Z/2^k)*, k >= 3
};

struct CharacterGroup {
  std::uint64_t q = 0;
  std::uint64_t phi = 0;
  std::vector<Component> components;
  // exponents[r * components.size() + i]: discrete log of r in component i.
  // Meaningless for r not coprime to q.
  std::vector<std::uint32_t> exponents;
  std::vector<std::uint8_t> coprime;
  std::uint64_t lcm_order = 1;

  std::size_t rank() const { return components.size(); }
};

}  // namespace detail

namespace {

using detail::CharacterGroup;
using detail::Component;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e > 0) {
    if (e & 1) r = mul_mod(r, b, m);
    b = mul_mod(b, b, m);
    e >>= 1;
  }
  return r;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::uint64_t least_primitive_root(std::uint64_t m, std::uint64_t order) {
  const auto ells = prime_factors(order);
  for (std::uint64_t g = 2; g < m; ++g) {
    if (std::gcd(g, m) != 1) continue;
    bool ok = true;
    for (std::uint64_t ell : ells) {
      if (pow_mod(g, order / ell, m) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw InvariantError("no primitive root mod " + std::to_string(m));
}

std::shared_ptr<const CharacterGroup> build_group(std::uint64_t q) {
  if (q < 3) throw UsageError("characters need modulus q >= 3, got " + std::to_string(q));
  if (q > 1'000'000) throw UsageError("characters support q <= 10^6");
  auto group = std::make_shared<CharacterGroup>();
  group->q = q;
  group->phi = euler_phi(q);

  // Discrete-log tables per prime power, later combined by CRT reduction.
  struct LocalLogs {
    std::uint64_t modulus;
    std::size_t first_component;
    std::size_t count;
    std::vector<std::uint32_t> logs;  // modulus * count entries
  };
  std::vector<LocalLogs> locals;

  std::uint64_t rest = q;
  for (std::uint64_t p : prime_factors(q)) {
    unsigned k = 0;
    std::uint64_t pk = 1;
    while (rest % p == 0) {
      rest /= p;
      pk *= p;
      ++k;
    }
    if (p == 2 && k == 1) continue;
    LocalLogs local{pk, group->components.size(), 0, {}};
    if (p != 2) {
      const std::uint64_t order = pk / p * (p - 1);
      const std::uint64_t g = least_primitive_root(pk, order);
      group->components.push_back({p, k, pk, order, false});
      local.count = 1;
      local.logs.assign(pk, 0);
      std::uint64_t x = 1;
      for (std::uint64_t e = 0; e < order; ++e) {
        local.logs[x] = static_cast<std::uint32_t>(e);
        x = mul_mod(x, g, pk);
      }
    } else if (k == 2) {
      group->components.push_back({2, 2, 4, 2, false});
      local.count = 1;
      local.logs = {0, 0, 0, 1};
    } else {
      const std::uint64_t order5 = pk / 4;
      group->components.push_back({2, k, pk, 2, false});
      group->components.push_back({2, k, pk, order5, true});
      local.count = 2;
      local.logs.assign(pk * 2, 0);
      for (std::uint64_t e0 = 0; e0 < 2; ++e0) {
        std::uint64_t x = e0 == 0 ? 1 : pk - 1;
        for (std::uint64_t e1 = 0; e1 < order5; ++e1) {
          local.logs[x * 2] = static_cast<std::uint32_t>(e0);
          local.logs[x * 2 + 1] = static_cast<std::uint32_t>(e1);
          x = mul_mod(x, 5, pk);
        }
      }
    }
    locals.push_back(std::move(local));
  }

  const std::size_t r = group->rank();
  group->exponents.assign(q * std::max<std::size_t>(r, 1), 0);
  group->coprime.assign(q, 0);
  for (std::uint64_t a = 0; a < q; ++a) {
    if (std::gcd(a, q) != 1) continue;
    group->coprime[a] = 1;
    for (const LocalLogs& local : locals) {
      const std::uint64_t am = a % local.modulus;
      for (std::size_t c = 0; c < local.count; ++c) {
        group->exponents[a * r + local.first_component + c] = local.logs[am * local.count + c];
      }
    }
  }
  for (const Component& c : group->components) {
    group->lcm_order = std::lcm(group->lcm_order, c.order);
  }
  return group;
}

std::uint64_t p_adic_valuation(std::uint64_t n, std::uint64_t p) {
  std::uint64_t v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

std::uint64_t ipow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

DirichletCharacter::DirichletCharacter(std::shared_ptr<const detail::CharacterGroup> group,
                                       std::size_t index)
    : group_(std::move(group)), index_(index) {
  if (index_ >= group_->phi) {
    throw UsageError("character index " + std::to_string(index) + " out of range for q=" +
                     std::to_string(group_->q));
  }
  std::size_t rem = index_;
  std::vector<std::uint64_t> conj(group_->rank());
  exponents_.resize(group_->rank());
  is_real_ = true;
  for (std::size_t i = 0; i < group_->rank(); ++i) {
    const Component& c = group_->components[i];
    exponents_[i] = rem % c.order;
    rem /= c.order;
    if ((2 * exponents_[i]) % c.order != 0) is_real_ = false;
    conj[i] = (c.order - exponents_[i]) % c.order;
  }
  conjugate_index_ = 0;
  for (std::size_t i = group_->rank(); i-- > 0;) {
    conjugate_index_ = conjugate_index_ * group_->components[i].order + conj[i];
  }
  parity_ = std::real((*this)(group_->q - 1)) < 0 ? Parity::kOdd : Parity::kEven;

  // Conductor, one prime power at a time.
  conductor_ = 1;
  for (std::size_t i = 0; i < group_->rank(); ++i) {
    const Component& c = group_->components[i];
    if (c.prime != 2) {
      if (exponents_[i] == 0) continue;
      const std::uint64_t v = p_adic_valuation(exponents_[i], c.prime);
      conductor_ *= ipow(c.prime, c.power - std::min<std::uint64_t>(v, c.power - 1));
    } else if (c.power == 2) {
      if (exponents_[i] != 0) conductor_ *= 4;
    } else if (!c.two_adic_five) {
      const std::uint64_t j5 = exponents_[i + 1];
      if (j5 != 0) {
        conductor_ *= ipow(2, c.power - p_adic_valuation(j5, 2));
      } else if (exponents_[i] != 0) {
        conductor_ *= 4;
      }
    }
  }
}

std::uint64_t DirichletCharacter::modulus() const { return group_->q; }

std::complex<double> DirichletCharacter::operator()(std::uint64_t n) const {
  const std::uint64_t q = group_->q;
  const std::uint64_t r = n % q;
  if (!group_->coprime[r]) return {0.0, 0.0};
  const std::uint64_t L = group_->lcm_order;
  std::uint64_t k = 0;
  const std::size_t rank = group_->rank();
  for (std::size_t i = 0; i < rank; ++i) {
    const std::uint64_t n_i = group_->components[i].order;
    const std::uint64_t term = (exponents_[i] * group_->exponents[r * rank + i]) % n_i;
    k = (k + term * (L / n_i)) % L;
  }
  // Quarter turns are returned exactly.
  if ((4 * k) % L == 0) {
    switch ((4 * k) / L) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(L);
  return {std::cos(angle), std::sin(angle)};
}

std::vector<std::complex<double>> DirichletCharacter::values() const {
  std::vector<std::complex<double>> out(group_->q);
  for (std::uint64_t r = 0; r < group_->q; ++r) out[r] = (*this)(r);
  return out;
}

std::vector<DirichletCharacter> characters(std::uint64_t q) {
  auto group = build_group(q);
  std::vector<DirichletCharacter> out;
  out.reserve(group->phi);
  for (std::size_t i = 0; i < group->phi; ++i) out.emplace_back(group, i);
  return out;
}

DirichletCharacter character(std::uint64_t q, std::size_t index) {
  return DirichletCharacter(build_group(q), index);
}

}  // namespace semirace
