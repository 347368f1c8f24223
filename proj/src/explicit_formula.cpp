#include "semirace/explicit_formula.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "semirace/error.hpp"

namespace semirace {

double zero_sum_scale(ZeroSumScale scale, const RaceConfig& cfg) {
  return scale == ZeroSumScale::kInversePhi ? 1.0 / static_cast<double>(cfg.phi_q()) : 1.0;
}

std::complex<double> character_zero_sum(double x, const RaceConfig& cfg,
                                        std::span<const ZeroList> zeros, double T0,
                                        bool squared_mult) {
  if (!(x >= 10.0)) throw UsageError("explicit formula needs x >= 10");
  if (!(T0 >= 0.0)) throw UsageError("truncation height must be nonnegative");
  std::map<std::size_t, const ZeroList*> by_index;
  for (const ZeroList& zl : zeros) {
    if (zl.character.modulus() != cfg.q()) throw UsageError("zero list modulus mismatch");
    by_index[zl.character.index()] = &zl;
  }
  const double log_x = std::log(x);
  std::complex<double> total = 0.0;
  for (const DirichletCharacter& chi : characters(cfg.q())) {
    if (chi.is_principal()) continue;
    const auto own = by_index.find(chi.index());
    const auto conj = by_index.find(chi.conjugate_index());
    if (own == by_index.end() || conj == by_index.end()) {
      throw DataError("missing zeros for character " + std::to_string(chi.index()) + " mod " +
                      std::to_string(cfg.q()));
    }
    if (own->second->height < T0 || conj->second->height < T0) {
      throw DataError("zeros for character " + std::to_string(chi.index()) +
                      " are not complete up to T0");
    }
    const std::complex<double> c = std::conj(chi(cfg.a())) - std::conj(chi(cfg.b()));
    if (c == std::complex<double>(0.0)) continue;
    auto weight = [&](int m) { return squared_mult ? static_cast<double>(m) * m : m; };
    std::complex<double> sum = 0.0;
    // gamma > 0 from chi itself.
    const ZeroList& pos = *own->second;
    for (std::size_t i = 0; i < pos.size() && pos.gammas[i] <= T0; ++i) {
      const double g = pos.gammas[i];
      sum += weight(pos.multiplicities[i]) * std::polar(1.0, g * log_x) /
             std::complex<double>(0.5, g);
    }
    // gamma < 0: the zeros of the conjugate character, reflected.
    const ZeroList& neg = *conj->second;
    for (std::size_t i = 0; i < neg.size() && neg.gammas[i] <= T0; ++i) {
      const double g = -neg.gammas[i];
      sum += weight(neg.multiplicities[i]) * std::polar(1.0, g * log_x) /
             std::complex<double>(0.5, g);
    }
    total += c * sum;
  }
  return total;
}

double predict_delta(double x, const RaceConfig& cfg, std::span<const ZeroList> zeros, double T0,
                     ZeroSumScale scale) {
  const std::complex<double> s = character_zero_sum(x, cfg, zeros, T0);
  return cfg.prime_bias() - zero_sum_scale(scale, cfg) * s.real();
}

double predict_delta2(double x, const RaceConfig& cfg, std::span<const ZeroList> zeros, double T0,
                      ZeroSumScale scale) {
  std::complex<double> bias = 0.0;
  for (const DirichletCharacter& chi : characters(cfg.q())) {
    if (chi.is_principal() || chi.a_chi() == 0) continue;
    bias += std::conj(chi(cfg.a())) - std::conj(chi(cfg.b()));
  }
  const double constant = bias.real() / (2.0 * static_cast<double>(cfg.phi_q()));
  const std::complex<double> s = character_zero_sum(x, cfg, zeros, T0, true);
  return constant + zero_sum_scale(scale, cfg) * s.real();
}

TruncatedPrediction predict(double x, const RaceConfig& cfg, std::span<const ZeroList> zeros,
                            double T0, ZeroSumScale scale) {
  return {x, T0, predict_delta(x, cfg, zeros, T0, scale),
          predict_delta2(x, cfg, zeros, T0, scale)};
}

namespace {

// Trapezoid integral of the piecewise-linear interpolant of f over [lo, hi].
template <class F>
double clipped_trapezoid(std::span<const double> ys, std::span<const double> gs, double lo,
                         double hi, F&& f) {
  if (ys.size() != gs.size()) throw UsageError("grid and values differ in length");
  if (ys.size() < 2) throw UsageError("need at least two grid points");
  if (!(hi > lo)) throw UsageError("integration window must have hi > lo");
  const double slack = 1e-12 * std::max(1.0, std::abs(hi));
  if (ys.front() > lo + slack || ys.back() < hi - slack) {
    throw UsageError("grid does not cover the integration window");
  }
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < ys.size(); ++i) {
    const double y0 = ys[i], y1 = ys[i + 1];
    if (!(y1 > y0)) throw UsageError("grid must be strictly ascending");
    const double a = std::max(y0, lo), b = std::min(y1, hi);
    if (!(b > a)) continue;
    const double f0 = f(gs[i]), f1 = f(gs[i + 1]);
    auto interp = [&](double y) { return f0 + (f1 - f0) * (y - y0) / (y1 - y0); };
    total += 0.5 * (interp(a) + interp(b)) * (b - a);
  }
  return total;
}

}  // namespace

double residual_mean_square(std::span<const double> ys, std::span<const double> gs, double Y) {
  if (!(Y > 1.0)) throw UsageError("residual mean square needs Y > 1");
  return clipped_trapezoid(ys, gs, 1.0, Y, [](double g) { return g * g; }) / Y;
}

double windowed_mean_square(std::span<const double> ys, std::span<const double> gs, double lo,
                            double hi) {
  return clipped_trapezoid(ys, gs, lo, hi, [](double g) { return g * g; }) / (hi - lo);
}

double windowed_mean(std::span<const double> ys, std::span<const double> gs, double lo, double hi) {
  return clipped_trapezoid(ys, gs, lo, hi, [](double g) { return g; }) / (hi - lo);
}

double rms_difference(std::span<const double> predicted, std::span<const double> measured) {
  if (predicted.size() != measured.size() || predicted.empty()) {
    throw UsageError("rms needs two non-empty series of equal length");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double d = predicted[i] - measured[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(predicted.size()));
}

}  // namespace semirace
