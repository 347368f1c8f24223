#include "semirace/lfunction.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "semirace/error.hpp"

namespace semirace {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// Euler-Maclaurin correction terms kept in the Hurwitz tail.
constexpr int kEulerMaclaurinTerms = 24;

// B_{2j} / (2j)! = (-1)^{j+1} 2 zeta(2j) / (2 pi)^{2j}, j = 1..kEulerMaclaurinTerms.
const std::array<double, kEulerMaclaurinTerms + 1>& bernoulli_over_factorial() {
  static const auto table = [] {
    std::array<double, kEulerMaclaurinTerms + 1> c{};
    for (int j = 1; j <= kEulerMaclaurinTerms; ++j) {
      double zeta;
      if (j == 1) {
        zeta = kPi * kPi / 6.0;
      } else if (j == 2) {
        zeta = std::pow(kPi, 4) / 90.0;
      } else {
        zeta = 0.0;
        for (int n = 2000; n >= 1; --n) zeta += std::pow(static_cast<double>(n), -2.0 * j);
      }
      const double sign = (j % 2 == 1) ? 1.0 : -1.0;
      c[j] = sign * 2.0 * zeta / std::pow(2.0 * kPi, 2.0 * j);
    }
    return c;
  }();
  return table;
}

// Stirling coefficients B_{2k} / (2k (2k-1)).
constexpr std::array<double, 10> kStirling = {
    1.0 / 12.0,           -1.0 / 360.0,        1.0 / 1260.0,          -1.0 / 1680.0,
    1.0 / 1188.0,         -691.0 / 360360.0,   1.0 / 156.0,           -3617.0 / 122400.0,
    43867.0 / 244188.0,   -174611.0 / 125400.0};

// (exp(w) - 1) / w without cancellation near w = 0.
cplx expm1_over(cplx w) {
  if (std::abs(w) < 1e-4) return 1.0 + w * (0.5 + w / 6.0);
  return (std::exp(w) - 1.0) / w;
}

int kappa(const DirichletCharacter& chi) { return chi.parity() == Parity::kOdd ? 1 : 0; }

void require_builtin(const DirichletCharacter& chi) {
  if (!is_builtin(chi)) {
    throw UsageError("no built-in L-function for character " + std::to_string(chi.index()) +
                     " mod " + std::to_string(chi.modulus()) +
                     "; supply its zeros through a zero file instead");
  }
}

}  // namespace

cplx log_gamma(cplx z) {
  if (!(z.real() > 0.0)) throw UsageError("log_gamma needs Re z > 0");
  cplx shift = 0.0;
  while (std::abs(z) < 12.0 || z.real() < 1.0) {
    shift += std::log(z);
    z += 1.0;
  }
  const cplx inv = 1.0 / z;
  const cplx inv2 = inv * inv;
  cplx series = 0.0;
  cplx p = inv;
  for (double c : kStirling) {
    series += c * p;
    p *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * kPi) + series - shift;
}

bool is_builtin(const DirichletCharacter& chi) {
  const std::uint64_t q = chi.modulus();
  return (q == 3 || q == 4) && chi.is_real() && !chi.is_principal();
}

namespace detail {

cplx dirichlet_l_series(cplx s, const DirichletCharacter& chi) {
  if (!(s.real() > 0.0)) throw UsageError("L-series evaluation needs Re s > 0");
  const std::uint64_t q = chi.modulus();
  if (chi.is_principal() && std::abs(s - 1.0) < 1e-12) {
    throw UsageError("principal L-function has a pole at s = 1");
  }
  const auto values = chi.values();
  const int M = kEulerMaclaurinTerms;
  const auto& coef = bernoulli_over_factorial();
  // Tail terms shrink by (|s + 2j| / (2 pi alpha))^2 <= 1/4 per step.
  const auto blocks = static_cast<std::uint64_t>(std::ceil((std::abs(s) + 2.0 * M) / kPi)) + 1;

  cplx direct = 0.0;
  const std::uint64_t n_end = blocks * q;
  for (std::uint64_t n = 1; n < n_end; ++n) {
    const cplx c = values[n % q];
    if (c == cplx(0.0)) continue;
    direct += c * std::exp(-s * std::log(static_cast<double>(n)));
  }

  cplx tail = 0.0;
  for (std::uint64_t a = 1; a < q; ++a) {
    const cplx c = values[a];
    if (c == cplx(0.0)) continue;
    const double alpha = static_cast<double>(blocks) + static_cast<double>(a) / static_cast<double>(q);
    const double log_alpha = std::log(alpha);
    const cplx alpha_ms = std::exp(-s * log_alpha);
    cplx head;
    if (chi.is_principal()) {
      head = alpha * alpha_ms / (s - 1.0);
    } else {
      // sum_a chi(a) = 0, so alpha^(1-s)/(s-1) may be replaced by
      // (alpha^(1-s) - 1)/(s-1), which stays finite at s = 1.
      head = -log_alpha * expm1_over((1.0 - s) * log_alpha);
    }
    cplx em = head + 0.5 * alpha_ms;
    cplx rising = s;  // (s)_{2j-1}
    double alpha_pow = 1.0 / alpha;  // alpha^(1-2j)
    for (int j = 1; j <= M; ++j) {
      em += coef[j] * rising * alpha_ms * alpha_pow;
      rising *= (s + static_cast<double>(2 * j - 1)) * (s + static_cast<double>(2 * j));
      alpha_pow /= alpha * alpha;
    }
    tail += c * em;
  }
  tail *= std::exp(-s * std::log(static_cast<double>(q)));
  return direct + tail;
}

}  // namespace detail

cplx l_value(cplx s, const DirichletCharacter& chi) {
  require_builtin(chi);
  if (!(s.real() > 0.0)) throw UsageError("l_value needs Re s > 0");
  if (std::abs(s.imag()) > 500.0) throw UsageError("l_value supports |Im s| <= 500");
  return detail::dirichlet_l_series(s, chi);
}

double hardy_theta(double t, const DirichletCharacter& chi) {
  const double k = kappa(chi);
  const double q = static_cast<double>(chi.modulus());
  return log_gamma(cplx(0.25 + 0.5 * k, 0.5 * t)).imag() + 0.5 * t * std::log(q / kPi);
}

cplx completed_l(cplx s, const DirichletCharacter& chi) {
  const double k = kappa(chi);
  const double q = static_cast<double>(chi.modulus());
  const cplx half = 0.5 * (s + k);
  return std::exp(half * std::log(q / kPi) + log_gamma(half)) * l_value(s, chi);
}

double hardy_z(double t, const DirichletCharacter& chi) {
  require_builtin(chi);
  if (std::abs(t) > 500.0) throw UsageError("hardy_z supports |t| <= 500");
  const cplx L = detail::dirichlet_l_series(cplx(0.5, t), chi);
  return (std::polar(1.0, hardy_theta(t, chi)) * L).real();
}

}  // namespace semirace
