#include "semirace/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "semirace/count_cache.hpp"
#include "semirace/error.hpp"
#include "semirace/explicit_formula.hpp"
#include "semirace/format.hpp"
#include "semirace/lfunction.hpp"
#include "semirace/manifest.hpp"
#include "semirace/model.hpp"
#include "semirace/race.hpp"
#include "semirace/zeros.hpp"

namespace semirace {

namespace {

struct CommonFlags {
  unsigned threads = 0;
  std::string manifest;
};

// Output stream that is either a file or the command's stdout.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw DataError("cannot open output " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : fallback_; }
  bool is_file() const { return file_ != nullptr; }

 private:
  std::ostream& fallback_;
  std::unique_ptr<std::ofstream> file_;
};

std::filesystem::path manifest_path(const CommonFlags& common, const std::string& out,
                                    const std::string& command) {
  if (!common.manifest.empty()) return common.manifest;
  if (!out.empty()) return out + ".manifest.json";
  return command + ".manifest.json";
}

std::string as_string(double v) { return format_double(v); }
std::string as_string(std::uint64_t v) { return std::to_string(v); }

// Zero lists for every nonprincipal character mod q up to height T: computed
// for built-in characters, otherwise taken from the given files.
std::vector<ZeroList> gather_zeros(std::uint64_t q, double T,
                                   const std::vector<std::string>& files, double step,
                                   unsigned threads) {
  std::vector<ZeroList> ingested;
  for (const std::string& f : files) ingested.push_back(load_zeros(std::filesystem::path(f), q));
  std::vector<ZeroList> out;
  for (const DirichletCharacter& chi : characters(q)) {
    if (chi.is_principal()) continue;
    const ZeroList* match = nullptr;
    for (const ZeroList& zl : ingested) {
      if (zl.character.index() == chi.index()) match = &zl;
    }
    if (match) {
      out.push_back(truncate_zeros(*match, T));
    } else if (is_builtin(chi)) {
      ZeroScanOptions opts;
      opts.step = step;
      opts.threads = threads;
      out.push_back(find_zeros(chi, T, opts));
    } else {
      throw DataError("character " + std::to_string(chi.index()) + " mod " + std::to_string(q) +
                      " has no built-in zeros; pass its zero file with --zeros");
    }
  }
  return out;
}

void write_race_csv(std::ostream& os, const RaceSeries& s) {
  os << "x,delta_norm,delta2_norm,sigma\n";
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    os << format_double17(s.grid[i]) << ',' << format_double17(s.delta_norm[i]) << ','
       << format_double17(s.delta2_norm[i]) << ',' << format_double17(s.sigma[i]) << '\n';
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Prime and semiprime races in arithmetic progressions", "semirace"};
  app.require_subcommand(1);
  app.fallthrough();
  CommonFlags common;
  app.add_option("--threads", common.threads, "worker threads (0: all cores)");
  app.add_option("--manifest", common.manifest, "run manifest path");

  // race
  std::uint64_t q = 4, a = 3, b = 1, limit = 100000;
  std::size_t grid_points = 400;
  std::size_t segment_size = kDefaultSegmentSize;
  std::string out_path, cache_dir;
  auto* race = app.add_subcommand("race", "normalized race series as CSV");
  race->add_option("--q", q, "modulus")->capture_default_str();
  race->add_option("--a", a, "first residue")->capture_default_str();
  race->add_option("--b", b, "second residue")->capture_default_str();
  race->add_option("--limit", limit, "largest x")->capture_default_str();
  race->add_option("--grid", grid_points, "log-spaced grid points")->capture_default_str();
  race->add_option("--segment-size", segment_size, "sieve segment length")->capture_default_str();
  race->add_option("--cache-dir", cache_dir, std::string("checkpoint directory (default $") + kCacheDirEnv + ")");
  race->add_option("--out", out_path, "CSV path (default stdout)");

  // zeros
  std::size_t chi_index = 0;
  bool chi_given = false;
  double height = 300.0, step = kDefaultZeroStep;
  auto* zeros_cmd = app.add_subcommand("zeros", "compute a zero file for a built-in character");
  zeros_cmd->add_option("--q", q, "modulus")->capture_default_str();
  auto* chi_opt = zeros_cmd->add_option("--chi", chi_index, "character index (default: the real one)");
  zeros_cmd->add_option("--T", height, "height")->capture_default_str();
  zeros_cmd->add_option("--step", step, "scan step")->capture_default_str();
  zeros_cmd->add_option("--out", out_path, "zero file path (default stdout)");

  // density
  std::size_t samples = 2'000'000;
  std::uint64_t seed = 1;
  std::string which_density = "both";
  std::vector<std::string> zero_files;
  auto* density = app.add_subcommand("density", "Monte Carlo bias densities");
  density->add_option("--q", q, "modulus")->capture_default_str();
  density->add_option("--a", a, "first residue")->capture_default_str();
  density->add_option("--b", b, "second residue")->capture_default_str();
  density->add_option("--T", height, "zero height")->capture_default_str();
  density->add_option("--samples", samples, "sample count")->capture_default_str();
  density->add_option("--seed", seed, "RNG seed")->capture_default_str();
  density->add_option("--which", which_density, "delta, delta2 or both")
      ->check(CLI::IsMember({"delta", "delta2", "both"}))
      ->capture_default_str();
  density->add_option("--zeros", zero_files, "zero files for non-built-in characters");
  density->add_option("--out", out_path, "report CSV path");

  // signchange
  std::string which_sign = "delta2-positive";
  auto* signchange = app.add_subcommand("signchange", "first sign change of a race");
  signchange->add_option("--q", q, "modulus")->capture_default_str();
  signchange->add_option("--a", a, "first residue")->capture_default_str();
  signchange->add_option("--b", b, "second residue")->capture_default_str();
  signchange->add_option("--which", which_sign, "delta-negative or delta2-positive")
      ->check(CLI::IsMember({"delta-negative", "delta2-positive"}))
      ->capture_default_str();
  signchange->add_option("--limit", limit, "search limit")->capture_default_str();

  // compare
  double T0 = 100.0;
  std::uint64_t from = 10'000;
  std::size_t compare_points = 200;
  std::string scale_name = "inverse-phi";
  auto* compare = app.add_subcommand("compare", "truncated explicit formula against sieved data");
  compare->add_option("--q", q, "modulus")->capture_default_str();
  compare->add_option("--a", a, "first residue")->capture_default_str();
  compare->add_option("--b", b, "second residue")->capture_default_str();
  compare->add_option("--T0", T0, "truncation height")->capture_default_str();
  compare->add_option("--from", from, "smallest x")->capture_default_str();
  compare->add_option("--limit", limit, "largest x")->capture_default_str();
  compare->add_option("--points", compare_points, "log-spaced comparison points")->capture_default_str();
  compare->add_option("--scale", scale_name, "zero-sum normalization: inverse-phi or unit")
      ->check(CLI::IsMember({"inverse-phi", "unit"}))
      ->capture_default_str();
  compare->add_option("--zeros", zero_files, "zero files for non-built-in characters");
  compare->add_option("--out", out_path, "comparison CSV path (default stdout)");

  std::vector<std::string> argv_store;
  argv_store.push_back("semirace");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  chi_given = chi_opt->count() > 0;

  RunManifest manifest;
  manifest.started_utc = utc_timestamp();
  SieveOptions sieve_opts;
  sieve_opts.threads = common.threads;
  sieve_opts.segment_size = segment_size;

  try {
    if (race->parsed()) {
      manifest.command = "race";
      const RaceConfig cfg(q, a, b);
      if (limit > kMaxSieveLimit) throw UsageError("--limit must be <= 10^9");
      std::optional<std::filesystem::path> cache;
      if (!cache_dir.empty()) {
        cache = cache_dir;
      } else if (const char* env = std::getenv(kCacheDirEnv); env && *env) {
        cache = env;
      }
      const auto grid = default_race_grid(limit, grid_points);
      CachedRunStats stats;
      const auto counts = accumulate_cached(q, grid, sieve_opts, cache, 4, &stats);
      const RaceSeries series = race_series(cfg, counts);
      Sink sink(out_path, out);
      write_race_csv(sink.stream(), series);
      std::ostream& note = sink.is_file() ? out : err;
      const CountVector& last = counts.back();
      note << "x=" << last.x << " delta=" << delta(last, cfg) << " delta2=" << delta2(last, cfg)
           << "\n";
      manifest.parameters = {{"q", as_string(q)},           {"a", as_string(a)},
                             {"b", as_string(b)},           {"limit", as_string(limit)},
                             {"grid", std::to_string(grid_points)},
                             {"segment_size", std::to_string(segment_size)}};
      manifest.results = {{"final_x", std::to_string(last.x)},
                          {"final_delta", std::to_string(delta(last, cfg))},
                          {"final_delta2", std::to_string(delta2(last, cfg))},
                          {"cache_used", stats.used_cache ? "true" : "false"}};
      if (!out_path.empty()) manifest.outputs.push_back(out_path);
    } else if (zeros_cmd->parsed()) {
      manifest.command = "zeros";
      std::optional<DirichletCharacter> chi;
      if (chi_given) {
        chi.emplace(character(q, chi_index));
      } else {
        for (const auto& c : characters(q)) {
          if (is_builtin(c)) chi.emplace(c);
        }
        if (!chi) throw UsageError("no built-in character mod " + std::to_string(q));
      }
      ZeroScanOptions opts;
      opts.step = step;
      opts.threads = common.threads;
      const ZeroList zl = find_zeros(*chi, height, opts);
      Sink sink(out_path, out);
      save_zeros(zl, sink.stream());
      manifest.parameters = {{"q", as_string(q)},
                             {"chi", std::to_string(chi->index())},
                             {"T", as_string(height)},
                             {"step", as_string(step)}};
      manifest.results = {{"zeros", std::to_string(zl.size())}};
      if (!out_path.empty()) manifest.outputs.push_back(out_path);
    } else if (density->parsed()) {
      manifest.command = "density";
      const RaceConfig cfg(q, a, b);
      const auto zeros = gather_zeros(q, height, zero_files, kDefaultZeroStep, common.threads);
      const LimitRV rv = build_limit_rv(cfg, zeros);
      SampleOptions sopts;
      sopts.threads = common.threads;
      std::vector<std::pair<std::string, DensityEstimate>> rows;
      if (which_density != "delta2") rows.emplace_back("delta", density_delta(rv, samples, seed, sopts));
      if (which_density != "delta") rows.emplace_back("delta2", density_delta2(rv, samples, seed, sopts));
      std::ostringstream report;
      report << "q,a,b,T,samples,seed,statistic,value,ci_half_width,tail_sigma\n";
      for (const auto& [name, est] : rows) {
        report << q << ',' << cfg.a() << ',' << cfg.b() << ',' << format_double17(height) << ','
               << samples << ',' << seed << ',' << name << ',' << format_double17(est.value) << ','
               << format_double17(est.half_width) << ',' << format_double17(rv.tail_sigma) << '\n';
        out << name << "(" << q << ";" << cfg.a() << "," << cfg.b()
            << ") = " << format_double(std::round(est.value * 1e5) / 1e5) << " +/- "
            << format_double(std::round(est.half_width * 1e5) / 1e5) << " (T=" << height
            << ", samples=" << samples << ", tail_sigma=" << format_double(rv.tail_sigma) << ")\n";
        manifest.results[name] = format_double17(est.value);
        manifest.results[name + "_ci_half_width"] = format_double17(est.half_width);
      }
      if (!out_path.empty()) {
        std::ofstream f(out_path);
        if (!f) throw DataError("cannot open output " + out_path);
        f << report.str();
        manifest.outputs.push_back(out_path);
      }
      manifest.seed = seed;
      manifest.rng_algorithm = kRngAlgorithm;
      manifest.parameters = {{"q", as_string(q)},       {"a", as_string(a)},
                             {"b", as_string(b)},       {"T", as_string(height)},
                             {"samples", std::to_string(samples)},
                             {"which", which_density}};
      for (std::size_t i = 0; i < zero_files.size(); ++i) {
        manifest.parameters["zeros_" + std::to_string(i)] = zero_files[i];
      }
      manifest.results["tail_sigma"] = format_double17(rv.tail_sigma);
    } else if (signchange->parsed()) {
      manifest.command = "signchange";
      const RaceConfig cfg(q, a, b);
      const SignEvent ev =
          which_sign == "delta-negative" ? SignEvent::kDeltaNegative : SignEvent::kDelta2Positive;
      const auto x = first_sign_change(cfg, ev, limit, sieve_opts);
      out << (x ? std::to_string(*x) : std::string("none")) << "\n";
      manifest.parameters = {{"q", as_string(q)},
                             {"a", as_string(a)},
                             {"b", as_string(b)},
                             {"which", which_sign},
                             {"limit", as_string(limit)}};
      manifest.results = {{"x", x ? std::to_string(*x) : "none"}};
    } else if (compare->parsed()) {
      manifest.command = "compare";
      const RaceConfig cfg(q, a, b);
      if (from < 10 || from > limit) throw UsageError("--from must lie in [10, limit]");
      const ZeroSumScale scale =
          scale_name == "unit" ? ZeroSumScale::kUnit : ZeroSumScale::kInversePhi;
      const auto zeros = gather_zeros(q, T0, zero_files, kDefaultZeroStep, common.threads);
      const auto grid = log_grid(from, limit, compare_points);
      const auto counts = accumulate(q, grid, sieve_opts);
      const RaceSeries measured = race_series(cfg, counts);
      std::vector<double> pred_d, pred_d2;
      for (double x : measured.grid) {
        const TruncatedPrediction p = predict(x, cfg, zeros, T0, scale);
        pred_d.push_back(p.predicted_delta_norm);
        pred_d2.push_back(p.predicted_delta2_norm);
      }
      Sink sink(out_path, out);
      sink.stream() << "x,measured_delta_norm,predicted_delta_norm,measured_delta2_norm,"
                       "predicted_delta2_norm\n";
      for (std::size_t i = 0; i < measured.grid.size(); ++i) {
        sink.stream() << format_double17(measured.grid[i]) << ','
                      << format_double17(measured.delta_norm[i]) << ','
                      << format_double17(pred_d[i]) << ',' << format_double17(measured.delta2_norm[i])
                      << ',' << format_double17(pred_d2[i]) << '\n';
      }
      const double rms = rms_difference(pred_d, measured.delta_norm);
      const double rms2 = rms_difference(pred_d2, measured.delta2_norm);
      std::ostream& note = sink.is_file() ? out : err;
      note << "rms_delta_norm=" << format_double(rms) << " rms_delta2_norm=" << format_double(rms2)
           << "\n";
      manifest.parameters = {{"q", as_string(q)},       {"a", as_string(a)},
                             {"b", as_string(b)},       {"T0", as_string(T0)},
                             {"from", as_string(from)}, {"limit", as_string(limit)},
                             {"points", std::to_string(compare_points)},
                             {"scale", scale_name}};
      manifest.results = {{"rms_delta_norm", format_double17(rms)},
                          {"rms_delta2_norm", format_double17(rms2)}};
      if (!out_path.empty()) manifest.outputs.push_back(out_path);
    }
    manifest.parameters["threads"] = std::to_string(common.threads);
    manifest.finished_utc = utc_timestamp();
    manifest.write(manifest_path(common, out_path, manifest.command));
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const InvariantError& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace semirace
