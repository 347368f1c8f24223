// Acceptance run: one PASS/FAIL line per criterion, with the measured numbers
// and wall time. Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "semirace/explicit_formula.hpp"
#include "semirace/model.hpp"
#include "semirace/race.hpp"
#include "semirace/sieve.hpp"
#include "semirace/zeros.hpp"

using namespace semirace;

namespace {

constexpr std::uint64_t kSeed = 1;
constexpr std::size_t kSamples = 2'000'000;

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail, double seconds) {
  std::printf("%s %d %s: %s [%.2f s]\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

// Times body(detail) -> ok and reports it; an exception counts as FAIL.
void criterion(int id, const std::string& name, double time_limit,
               const std::function<bool(std::ostringstream&)>& body) {
  std::ostringstream detail;
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail << "exception: " << e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_limit > 0 && secs >= time_limit) {
    detail << "; runtime over " << time_limit << " s";
    ok = false;
  }
  report(id, name, ok, detail.str(), secs);
}

// Trapezoid mean of f over y in [lo, hi] on n intervals.
double mean_over(double lo, double hi, int n, const std::function<double(double)>& f) {
  const double h = (hi - lo) / n;
  double s = 0.5 * (f(lo) + f(hi));
  for (int i = 1; i < n; ++i) s += f(lo + i * h);
  return s * h / (hi - lo);
}

}  // namespace

int main() {
  const RaceConfig cfg(4, 3, 1);
  const auto chi4 = character(4, 1);

  criterion(1, "semiprime table mod 4 at x=100", 1.0, [&](std::ostringstream& d) {
    const auto cv = accumulate(4, std::vector<std::uint64_t>{100});
    d << "pi2(100;4,1)=" << cv[0].pi2[1] << " pi2(100;4,3)=" << cv[0].pi2[3];
    return cv[0].pi2[1] == 11 && cv[0].pi2[3] == 8;
  });

  criterion(2, "first sign changes (4;3,1)", 10.0, [&](std::ostringstream& d) {
    const auto x2 = first_sign_change(cfg, SignEvent::kDelta2Positive, 1'000'000);
    const auto x1 = first_sign_change(cfg, SignEvent::kDeltaNegative, 1'000'000);
    d << "Delta2>0 first at " << (x2 ? std::to_string(*x2) : "none") << ", Delta<0 first at "
      << (x1 ? std::to_string(*x1) : "none");
    return x2 == 26747u && x1 == 26861u;
  });
  // Criteria 3 and 4 each time their own zero scan; 9 reuses the zeros from 3.
  DensityEstimate delta_ab;
  std::vector<ZeroList> zeros300;
  criterion(3, "density delta(4;3,1)", 180.0, [&](std::ostringstream& d) {
    zeros300 = {find_zeros(chi4, 300.0)};
    const LimitRV rv = build_limit_rv(cfg, zeros300);
    delta_ab = density_delta(rv, kSamples, kSeed);
    d.precision(6);
    d << "delta=" << delta_ab.value << " +/- " << delta_ab.half_width << " (T=300, " << kSamples
      << " samples, seed " << kSeed << ", tail_sigma=" << rv.tail_sigma << "); target 0.9959 +/- 0.004";
    return std::abs(delta_ab.value - 0.9959) <= 0.004;
  });

  criterion(4, "density delta2(4;3,1)", 180.0, [&](std::ostringstream& d) {
    const std::vector<ZeroList> zeros{find_zeros(chi4, 300.0)};
    const LimitRV rv = build_limit_rv(cfg, zeros);
    const DensityEstimate e = density_delta2(rv, kSamples, kSeed);
    d.precision(6);
    d << "delta2=" << e.value << " +/- " << e.half_width << " (95% CI), tail_sigma=" << rv.tail_sigma
      << "; target 0.1057 +/- 0.006, fifth decimal not claimed";
    return std::abs(e.value - 0.1057) <= 0.006;
  });

  criterion(5, "windowed mean of Sigma(x;4,3,1), x in [1e6,1e8]", 600.0, [&](std::ostringstream& d) {
    const auto grid = log_grid(1'000'000, 100'000'000, 20'000);
    const RaceSeries s = race_series(cfg, accumulate(4, grid));
    std::vector<double> ys;
    for (double x : s.grid) ys.push_back(std::log(x));
    const double m = windowed_mean(ys, s.sigma, std::log(1e6), std::log(1e8));
    d.precision(5);
    d << "mean Sigma over log-uniform x = " << m << " (" << grid.size() << " grid points); target [-0.45,-0.05]";
    return m >= -0.45 && m <= -0.05;
  });

  criterion(6, "zero counts for chi_4", 0.0, [&](std::ostringstream& d) {
    bool ok = true;
    for (double T : {50.0, 100.0, 300.0}) {
      const std::size_t n = find_zeros(chi4, T).size();
      const double est = zero_count_estimate(chi4, T);
      const bool in = std::abs(static_cast<double>(n) - est) <= 2.0 + std::log(T);
      d.precision(6);
      d << "T=" << T << ": " << n << " vs " << est << (in ? "" : " (outside)") << "; ";
      ok &= in;
    }
    return ok;
  });

  criterion(7, "sieve against trial division", 0.0, [&](std::ostringstream& d) {
    const std::uint64_t hi = 1'000'001;
    const auto primes = base_primes(isqrt(hi - 1));
    std::uint64_t bad = 0;
    for (std::uint64_t lo = 2; lo < hi; lo += kDefaultSegmentSize) {
      Segment seg(lo, std::min<std::uint64_t>(hi, lo + kDefaultSegmentSize));
      classify_segment(seg, primes);
      for (std::uint64_t n = seg.lo(); n < seg.hi(); ++n) {
        const int w = omega_oracle(n);
        const int cls = w == 1 ? 1 : w == 2 ? 2 : 0;
        bad += static_cast<int>(seg.kind(n)) != cls;
      }
    }
    d << bad << " classification mismatches for n <= 10^6";
    const std::vector<std::uint64_t> cps{1'000, 10'000, 100'000};
    const auto counts = accumulate(4, cps);
    for (std::size_t i = 0; i < cps.size(); ++i) {
      const auto brute = oracle::prime_counts(cps[i], 4);
      d << "; pi(" << cps[i] << ";4,1)=" << counts[i].pi[1] << "/" << brute[1] << " pi(" << cps[i]
        << ";4,3)=" << counts[i].pi[3] << "/" << brute[3];
      if (counts[i].pi[1] != brute[1] || counts[i].pi[3] != brute[3]) ++bad;
    }
    return bad == 0;
  });

  criterion(8, "explicit formula fit (4;3,1)", 0.0, [&](std::ostringstream& d) {
    const std::vector<ZeroList> zeros{find_zeros(chi4, 100.0)};
    const auto grid = log_grid(10'000, 10'000'000, 200);
    const RaceSeries measured = race_series(cfg, accumulate(4, grid));
    double best_rms = 0.0;
    ZeroSumScale best = ZeroSumScale::kInversePhi;
    d.precision(5);
    for (ZeroSumScale scale : {ZeroSumScale::kInversePhi, ZeroSumScale::kUnit}) {
      std::vector<double> pred;
      for (double x : measured.grid) pred.push_back(predict_delta(x, cfg, zeros, 100.0, scale));
      const double rms = rms_difference(pred, measured.delta_norm);
      d << (scale == ZeroSumScale::kUnit ? "kappa=1" : "kappa=1/phi") << " rms=" << rms << "; ";
      if (scale == ZeroSumScale::kInversePhi || rms < best_rms) {
        best_rms = rms;
        best = scale;
      }
    }
    const double m2 = mean_over(std::log(1e6), std::log(1e8), 200'000, [&](double y) {
      return predict_delta2(std::exp(y), cfg, zeros, 100.0, best);
    });
    d << "chosen " << (best == ZeroSumScale::kUnit ? "kappa=1" : "kappa=1/phi") << ", rms " << best_rms
      << " (<= 0.5), mean predicted delta2_norm over [1e6,1e8] " << m2 << " (target -0.5 +/- 0.1)";
    return best_rms <= 0.5 && std::abs(m2 + 0.5) <= 0.1;
  });

  criterion(9, "limiting distribution symmetry (4;3,1)", 0.0, [&](std::ostringstream& d) {
    if (zeros300.empty()) zeros300 = {find_zeros(chi4, 300.0)};
    const LimitRV rv = build_limit_rv(cfg, zeros300);
    const std::size_t n = 1'000'000;
    const auto xs = sample(rv, n, kSeed + 1);
    bool ok = true;
    d.precision(4);
    for (double t : {0.5, 1.0, 2.0}) {
      std::size_t above = 0, below = 0;
      for (double x : xs) {
        above += x > rv.mean + t;
        below += x < rv.mean - t;
      }
      const double pa = static_cast<double>(above) / n, pb = static_cast<double>(below) / n;
      const double p = 0.5 * (pa + pb);
      const double sd = std::sqrt(2.0 * p * (1.0 - p) / n);
      const bool in = std::abs(pa - pb) <= 3.0 * sd;
      d << "t=" << t << ": |" << pa << "-" << pb << "| vs 3sd " << 3.0 * sd << (in ? "" : " (outside)") << "; ";
      ok &= in;
    }
    if (delta_ab.samples == 0) delta_ab = density_delta(rv, kSamples, kSeed);
    const LimitRV rv_ba = build_limit_rv(cfg.swapped(), zeros300);
    const DensityEstimate delta_ba = density_delta(rv_ba, kSamples, kSeed + 2);
    const double sum = delta_ab.value + delta_ba.value;
    const double tol = 2.0 * (delta_ab.half_width + delta_ba.half_width);
    d.precision(7);
    d << "delta(3,1)+delta(1,3)=" << sum << " (|sum-1| <= " << tol << ")";
    return ok && std::abs(sum - 1.0) <= tol;
  });

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "SOME FAILED", failures);
  return failures == 0 ? 0 : 1;
}
