#pragma once

// Truncated explicit formulas for the normalized prime and semiprime races.

#include <complex>
#include <span>
#include <vector>

#include "semirace/residues.hpp"
#include "semirace/zeros.hpp"

namespace semirace {

// Normalization of the character-zero sum in the prime race prediction:
// kInversePhi multiplies it by 1/phi(q) (standard explicit formula), kUnit
// leaves it bare.
enum class ZeroSumScale { kInversePhi, kUnit };

double zero_sum_scale(ZeroSumScale scale, const RaceConfig& cfg);

// S(x) = sum over nonprincipal chi of (conj chi(a) - conj chi(b)) times
// sum over |gamma| <= T0 of m(gamma) x^(i gamma) / (1/2 + i gamma), with the
// zeros of chi at -gamma taken from the conjugate character. `squared_mult`
// uses m(gamma)^2 instead. Returned complex so callers can check that the
// imaginary part cancels.
std::complex<double> character_zero_sum(double x, const RaceConfig& cfg,
                                        std::span<const ZeroList> zeros, double T0,
                                        bool squared_mult = false);

// Model for (log x / sqrt x) Delta(x;q,a,b):
// (N(q,b) - N(q,a)) / phi(q) - kappa * S(x).
double predict_delta(double x, const RaceConfig& cfg, std::span<const ZeroList> zeros, double T0,
                     ZeroSumScale scale = ZeroSumScale::kInversePhi);

// Model for (log x / (sqrt x log log x)) Delta2(x;q,a,b):
// (1 / 2phi(q)) sum_chi (conj chi(a) - conj chi(b)) A(chi) + kappa * S2(x),
// where S2 carries m(gamma)^2. At T0 = 0 this is (N(q,a) - N(q,b)) / (2 phi(q)).
double predict_delta2(double x, const RaceConfig& cfg, std::span<const ZeroList> zeros, double T0,
                      ZeroSumScale scale = ZeroSumScale::kInversePhi);

struct TruncatedPrediction {
  double x;
  double T0;
  double predicted_delta_norm;
  double predicted_delta2_norm;
};

TruncatedPrediction predict(double x, const RaceConfig& cfg, std::span<const ZeroList> zeros,
                            double T0, ZeroSumScale scale = ZeroSumScale::kInversePhi);

// Trapezoid estimate of (1/Y) * integral_1^Y |g(y)|^2 dy on an ascending grid
// that must cover [1, Y].
double residual_mean_square(std::span<const double> ys, std::span<const double> gs, double Y);

// Trapezoid estimate of (1/(hi-lo)) * integral_lo^hi |g(y)|^2 dy.
double windowed_mean_square(std::span<const double> ys, std::span<const double> gs, double lo,
                            double hi);

// Trapezoid estimate of (1/(hi-lo)) * integral_lo^hi g(y) dy.
double windowed_mean(std::span<const double> ys, std::span<const double> gs, double lo, double hi);

// Root mean square of predicted - measured.
double rms_difference(std::span<const double> predicted, std::span<const double> measured);

}  // namespace semirace
