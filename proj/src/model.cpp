#include "semirace/model.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <numbers>
#include <random>
#include <string>

#include "semirace/error.hpp"
#include "semirace/lfunction.hpp"
#include "semirace/parallel.hpp"

namespace semirace {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// d/dt of hardy_theta / pi by central difference, clamped at zero.
double zero_density(const DirichletCharacter& chi, double t) {
  const double h = 1e-4 * std::max(1.0, t);
  const double lo = std::max(0.0, t - h);
  const double d = (hardy_theta(t + h, chi) - hardy_theta(lo, chi)) / ((t + h - lo) * std::numbers::pi);
  return std::max(0.0, d);
}

}  // namespace

double tail_integral(const DirichletCharacter& chi, double T) {
  if (!(T >= 0.0)) throw UsageError("tail integral needs T >= 0");
  // t = T + e^w - 1 maps w in [0, inf) onto [T, inf); the integrand then decays
  // like w e^-w.
  constexpr double kStep = 0.005;
  constexpr double kEnd = 60.0;
  auto integrand = [&](double w) {
    const double ew = std::exp(w);
    const double t = T + ew - 1.0;
    return zero_density(chi, t) / (0.25 + t * t) * ew;
  };
  double sum = 0.5 * (integrand(0.0) + integrand(kEnd));
  const int steps = static_cast<int>(kEnd / kStep);
  for (int i = 1; i < steps; ++i) sum += integrand(i * kStep);
  return sum * kStep;
}

LimitRV build_limit_rv(const RaceConfig& cfg, std::span<const ZeroList> zeros) {
  const auto chars = characters(cfg.q());
  std::map<std::size_t, const ZeroList*> by_index;
  for (const ZeroList& zl : zeros) {
    if (zl.character.modulus() != cfg.q()) {
      throw UsageError("zero list for modulus " + std::to_string(zl.character.modulus()) +
                       " given for a race mod " + std::to_string(cfg.q()));
    }
    zl.validate();
    by_index[zl.character.index()] = &zl;
  }

  LimitRV rv{cfg, 0.0, 0.0, 0.0, {}, {}, 0.0};
  rv.mean = cfg.prime_bias();
  rv.delta2_threshold = cfg.semiprime_bias();
  const double phi = static_cast<double>(cfg.phi_q());
  bool first = true;
  double tail_var = 0.0;
  for (const DirichletCharacter& chi : chars) {
    if (chi.is_principal()) continue;
    auto it = by_index.find(chi.index());
    if (it == by_index.end()) {
      throw DataError("missing zeros for character " + std::to_string(chi.index()) + " mod " +
                      std::to_string(cfg.q()));
    }
    const ZeroList& zl = *it->second;
    if (first) {
      rv.height = zl.height;
      first = false;
    } else if (zl.height != rv.height) {
      throw DataError("zero lists must share one height");
    }
    // conj(chi)(b) - conj(chi)(a)
    const std::complex<double> c = std::conj(chi(cfg.b())) - std::conj(chi(cfg.a()));
    for (std::size_t i = 0; i < zl.size(); ++i) {
      const double g = zl.gammas[i];
      const std::complex<double> w =
          static_cast<double>(zl.multiplicities[i]) * c / (phi * std::complex<double>(0.5, g));
      rv.terms.push_back({w, g, chi.index()});
    }
    const double scale = std::sqrt(2.0 * tail_integral(chi, zl.height)) / phi;
    rv.tail.push_back({c * scale, chi.index()});
    tail_var += std::norm(c * scale);
  }
  rv.tail_sigma = std::sqrt(tail_var);
  return rv;
}

namespace {

// Raw uniform in [0, 1) with 53 random bits.
double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

std::mt19937_64 shard_engine(std::uint64_t seed, std::uint64_t shard) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(shard), static_cast<std::uint32_t>(shard >> 32)};
  return std::mt19937_64(seq);
}

void check_shared_phases(std::span<const LimitRV> rvs) {
  if (rvs.empty()) throw UsageError("need at least one limiting variable");
  const LimitRV& ref = rvs.front();
  for (const LimitRV& rv : rvs) {
    if (rv.config.q() != ref.config.q()) throw UsageError("joint races must share the modulus");
    if (rv.terms.size() != ref.terms.size() || rv.tail.size() != ref.tail.size()) {
      throw UsageError("joint races must be built from the same zero lists");
    }
    for (std::size_t i = 0; i < rv.terms.size(); ++i) {
      if (rv.terms[i].gamma != ref.terms[i].gamma ||
          rv.terms[i].character_index != ref.terms[i].character_index) {
        throw UsageError("joint races must be built from the same zero lists");
      }
    }
    for (std::size_t i = 0; i < rv.tail.size(); ++i) {
      if (rv.tail[i].character_index != ref.tail[i].character_index) {
        throw UsageError("joint races must be built from the same zero lists");
      }
    }
  }
}

// Draws samples [shard * kSamplesPerShard, ...) for all rvs with shared
// phases and calls visit(values) once per draw.
template <class Visit>
void draw_shard(std::span<const LimitRV> rvs, std::uint64_t seed, std::uint64_t shard,
                std::size_t n, Visit&& visit) {
  std::mt19937_64 eng = shard_engine(seed, shard);
  const LimitRV& ref = rvs.front();
  const std::size_t n_terms = ref.terms.size();
  const std::size_t n_tail = ref.tail.size();
  const std::size_t r = rvs.size();
  std::vector<double> cosines(n_terms), sines(n_terms);
  std::vector<double> g_re(n_tail), g_im(n_tail);
  std::vector<double> values(r);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t k = 0; k < n_terms; ++k) {
      const double angle = kTwoPi * uniform01(eng);
      cosines[k] = std::cos(angle);
      sines[k] = std::sin(angle);
    }
    for (std::size_t k = 0; k < n_tail; ++k) {
      const double u1 = 1.0 - uniform01(eng);  // (0, 1]
      const double u2 = uniform01(eng);
      const double radius = std::sqrt(-2.0 * std::log(u1));
      g_re[k] = radius * std::cos(kTwoPi * u2);
      g_im[k] = radius * std::sin(kTwoPi * u2);
    }
    for (std::size_t i = 0; i < r; ++i) {
      const LimitRV& rv = rvs[i];
      double harmonics = 0.0;
      for (std::size_t k = 0; k < n_terms; ++k) {
        const std::complex<double> w = rv.terms[k].amplitude;
        harmonics += w.real() * cosines[k] - w.imag() * sines[k];
      }
      double tail = 0.0;
      for (std::size_t k = 0; k < n_tail; ++k) {
        const std::complex<double> c = rv.tail[k].coefficient;
        tail += c.real() * g_re[k] - c.imag() * g_im[k];
      }
      values[i] = rv.mean + 2.0 * harmonics + tail;
    }
    visit(std::span<const double>(values));
  }
}

// Runs draw_shard over all shards, at most `threads` at a time, and returns
// the per-shard results in shard order.
template <class ShardFn>
auto run_shards(std::size_t count, unsigned threads, ShardFn&& fn) {
  using Result = std::invoke_result_t<ShardFn&, std::uint64_t, std::size_t>;
  const std::size_t shards = (count + kSamplesPerShard - 1) / kSamplesPerShard;
  std::vector<Result> results;
  results.reserve(shards);
  const unsigned workers = resolve_threads(threads);
  auto shard_size = [&](std::size_t s) {
    return std::min(kSamplesPerShard, count - s * kSamplesPerShard);
  };
  for (std::size_t s = 0; s < shards;) {
    if (workers <= 1) {
      results.push_back(fn(static_cast<std::uint64_t>(s), shard_size(s)));
      ++s;
      continue;
    }
    std::vector<std::future<Result>> wave;
    for (unsigned w = 0; w < workers && s < shards; ++w, ++s) {
      wave.push_back(std::async(std::launch::async, fn, static_cast<std::uint64_t>(s),
                                shard_size(s)));
    }
    for (auto& f : wave) results.push_back(f.get());
  }
  return results;
}

template <class Pred>
std::size_t count_hits(std::span<const LimitRV> rvs, std::size_t count, std::uint64_t seed,
                       const SampleOptions& opts, Pred&& pred) {
  const auto per_shard = run_shards(count, opts.threads, [&](std::uint64_t shard, std::size_t n) {
    std::size_t hits = 0;
    draw_shard(rvs, seed, shard, n, [&](std::span<const double> v) {
      if (pred(v)) ++hits;
    });
    return hits;
  });
  std::size_t hits = 0;
  for (std::size_t h : per_shard) hits += h;
  return hits;
}

}  // namespace

std::vector<double> sample(const LimitRV& rv, std::size_t count, std::uint64_t seed,
                           const SampleOptions& opts) {
  if (count < 1) throw UsageError("sample count must be >= 1");
  std::span<const LimitRV> rvs(&rv, 1);
  auto parts = run_shards(count, opts.threads, [&](std::uint64_t shard, std::size_t n) {
    std::vector<double> out;
    out.reserve(n);
    draw_shard(rvs, seed, shard, n, [&](std::span<const double> v) { out.push_back(v[0]); });
    return out;
  });
  std::vector<double> all;
  all.reserve(count);
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return all;
}

DensityEstimate wilson_estimate(std::size_t hits, std::size_t n, double zero_height) {
  if (n == 0) throw UsageError("no samples");
  constexpr double z = 1.959963984540054;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(hits) / nn;
  const double denom = 1.0 + z * z / nn;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn));
  return {p, half, n, zero_height};
}

DensityEstimate density_delta(const LimitRV& rv, std::size_t count, std::uint64_t seed,
                              const SampleOptions& opts) {
  if (count < 10'000) throw UsageError("density estimates need at least 10^4 samples");
  const std::size_t hits = count_hits(std::span<const LimitRV>(&rv, 1), count, seed, opts,
                                      [](std::span<const double> v) { return v[0] > 0.0; });
  return wilson_estimate(hits, count, rv.height);
}

DensityEstimate density_delta2(const LimitRV& rv, std::size_t count, std::uint64_t seed,
                               const SampleOptions& opts) {
  if (count < 10'000) throw UsageError("density estimates need at least 10^4 samples");
  const double threshold = rv.delta2_threshold;
  const std::size_t hits =
      count_hits(std::span<const LimitRV>(&rv, 1), count, seed, opts,
                 [threshold](std::span<const double> v) { return v[0] < threshold; });
  return wilson_estimate(hits, count, rv.height);
}

DensityEstimate joint_probability(std::span<const LimitRV> rvs,
                                  const std::vector<bool>& want_positive, std::size_t count,
                                  std::uint64_t seed, const SampleOptions& opts) {
  check_shared_phases(rvs);
  if (want_positive.size() != rvs.size()) {
    throw UsageError("sign pattern length must match the number of races");
  }
  if (count < 1) throw UsageError("sample count must be >= 1");
  std::vector<double> thresholds;
  for (const LimitRV& rv : rvs) thresholds.push_back(rv.delta2_threshold);
  const std::size_t hits =
      count_hits(rvs, count, seed, opts, [&](std::span<const double> v) {
        for (std::size_t i = 0; i < v.size(); ++i) {
          const double y = thresholds[i] - v[i];
          if (want_positive[i] ? !(y > 0.0) : !(y < 0.0)) return false;
        }
        return true;
      });
  return wilson_estimate(hits, count, rvs.front().height);
}

}  // namespace semirace
