#include "semirace/zeros.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>

#include "semirace/error.hpp"
#include "semirace/format.hpp"
#include "semirace/lfunction.hpp"
#include "semirace/parallel.hpp"

namespace semirace {

void ZeroList::validate() const {
  if (multiplicities.size() != gammas.size()) {
    throw DataError("zero list has " + std::to_string(gammas.size()) + " ordinates but " +
                    std::to_string(multiplicities.size()) + " multiplicities");
  }
  if (!(height >= 0.0)) throw DataError("zero list height must be nonnegative");
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    if (!(gammas[i] > 0.0) || gammas[i] > height) {
      throw DataError("zero ordinate " + format_double(gammas[i]) + " outside (0, height]");
    }
    if (i > 0 && !(gammas[i] > gammas[i - 1])) {
      throw DataError("zero ordinates not strictly ascending at index " + std::to_string(i));
    }
    if (multiplicities[i] < 1) throw DataError("zero multiplicity must be >= 1");
  }
}

namespace {

double refine_root(const DirichletCharacter& chi, double lo, double hi, double f_lo, double f_hi) {
  while (hi - lo > kZeroTolerance) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = hardy_z(mid, chi);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  // One secant step inside the final bracket.
  const double root = lo - f_lo * (hi - lo) / (f_hi - f_lo);
  return std::clamp(root, lo, hi);
}

// Zeros with t in (t[first], t[last]], given the grid t_k = k * step (the
// final point is clamped to T).
std::vector<double> scan_chunk(const DirichletCharacter& chi, std::size_t first, std::size_t last,
                               double step, double T) {
  auto grid_t = [&](std::size_t k) { return std::min(static_cast<double>(k) * step, T); };
  std::vector<double> found;
  double t_prev = grid_t(first);
  double f_prev = hardy_z(t_prev, chi);
  for (std::size_t k = first + 1; k <= last; ++k) {
    const double t = grid_t(k);
    const double f = hardy_z(t, chi);
    if (f == 0.0) {
      found.push_back(t);
    } else if (f_prev != 0.0 && (f < 0.0) != (f_prev < 0.0)) {
      found.push_back(refine_root(chi, t_prev, t, f_prev, f));
    }
    t_prev = t;
    f_prev = f;
  }
  return found;
}

}  // namespace

ZeroList find_zeros(const DirichletCharacter& chi, double T, const ZeroScanOptions& opts) {
  if (!is_builtin(chi)) {
    throw UsageError("zeros for character " + std::to_string(chi.index()) + " mod " +
                     std::to_string(chi.modulus()) + " must be ingested from a zero file");
  }
  if (!(T >= 0.0) || T > 500.0) throw UsageError("zero height must lie in [0, 500]");
  if (!(opts.step > 0.0)) throw UsageError("scan step must be positive");

  ZeroList zl{chi, {}, {}, T, ZeroSource::kComputed};
  if (T > 0.0) {
    auto last = static_cast<std::size_t>(std::floor(T / opts.step));
    if (static_cast<double>(last) * opts.step < T) ++last;  // final point clamped to T
    const unsigned workers = std::max(1u, std::min<unsigned>(resolve_threads(opts.threads),
                                                            static_cast<unsigned>(last)));
    std::vector<std::future<std::vector<double>>> parts;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t a = last * w / workers;
      const std::size_t b = last * (w + 1) / workers;
      parts.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred,
                                 scan_chunk, std::cref(chi), a, b, opts.step, T));
    }
    for (auto& p : parts) {
      for (double g : p.get()) {
        if (g <= 0.0) continue;
        if (!zl.gammas.empty() && !(g > zl.gammas.back())) {
          throw InvariantError("merged zero scan is not ascending");
        }
        zl.gammas.push_back(g);
      }
    }
    zl.multiplicities.assign(zl.gammas.size(), 1);
  }

  if (opts.check_count && T >= 2.0) {
    const double expected = zero_count_estimate(chi, T);
    const double slack = 2.0 + std::log(T);
    if (std::abs(static_cast<double>(zl.size()) - expected) > slack) {
      throw DataError("found " + std::to_string(zl.size()) + " zeros up to T=" + format_double(T) +
                      " but about " + format_double(expected) +
                      " are expected; the scan step is too coarse");
    }
  }
  return zl;
}

double zero_count_estimate(const DirichletCharacter& chi, double T) {
  if (!(T >= 2.0)) throw UsageError("zero count estimate needs T >= 2");
  return hardy_theta(T, chi) / std::numbers::pi;
}

ZeroList truncate_zeros(const ZeroList& zl, double T) {
  if (!(T >= 0.0) || T > zl.height) {
    throw DataError("cannot truncate zeros of height " + format_double(zl.height) + " at " +
                    format_double(T));
  }
  ZeroList out{zl.character, {}, {}, T, zl.source};
  for (std::size_t i = 0; i < zl.size() && zl.gammas[i] <= T; ++i) {
    out.gammas.push_back(zl.gammas[i]);
    out.multiplicities.push_back(zl.multiplicities[i]);
  }
  return out;
}

void save_zeros(const ZeroList& zl, std::ostream& out) {
  zl.validate();
  out << "ZEROS v1\n";
  out << "q=" << zl.character.modulus() << " chi=" << zl.character.index()
      << " height=" << format_double(zl.height) << "\n";
  for (std::size_t i = 0; i < zl.size(); ++i) {
    out << format_double(zl.gammas[i]) << ' ' << zl.multiplicities[i] << '\n';
  }
}

void save_zeros(const ZeroList& zl, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write zero file " + path.string());
  save_zeros(zl, out);
  if (!out) throw DataError("failed writing zero file " + path.string());
}

namespace {

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw DataError("zero file line " + std::to_string(line_no) + ": " + what);
}

template <class T>
T parse_number(std::string_view text, std::size_t line_no, const char* what) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) fail(line_no, std::string("bad ") + what + " '" +
                                                         std::string(text) + "'");
  return value;
}

}  // namespace

ZeroList load_zeros(std::istream& in, std::optional<std::uint64_t> expected_q) {
  std::string line;
  std::size_t line_no = 0;
  int stage = 0;  // 0: magic, 1: parameters, 2: zeros
  std::uint64_t q = 0;
  std::size_t chi_index = 0;
  double height = 0.0;
  std::vector<double> gammas;
  std::vector<int> mults;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line.substr(first));
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);

    if (stage == 0) {
      if (tokens.size() != 2 || tokens[0] != "ZEROS" || tokens[1] != "v1") {
        fail(line_no, "expected header 'ZEROS v1'");
      }
      stage = 1;
    } else if (stage == 1) {
      bool have_q = false, have_chi = false, have_height = false;
      for (const std::string& tok : tokens) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) fail(line_no, "expected key=value, got '" + tok + "'");
        const std::string key = tok.substr(0, eq);
        const std::string_view value(tok.c_str() + eq + 1, tok.size() - eq - 1);
        if (key == "q") {
          q = parse_number<std::uint64_t>(value, line_no, "modulus");
          have_q = true;
        } else if (key == "chi") {
          chi_index = parse_number<std::size_t>(value, line_no, "character index");
          have_chi = true;
        } else if (key == "height") {
          height = parse_number<double>(value, line_no, "height");
          have_height = true;
        } else {
          fail(line_no, "unknown key '" + key + "'");
        }
      }
      if (!have_q || !have_chi || !have_height) fail(line_no, "expected q=, chi= and height=");
      if (expected_q && *expected_q != q) {
        fail(line_no, "modulus " + std::to_string(q) + " does not match expected " +
                          std::to_string(*expected_q));
      }
      if (!(height >= 0.0)) fail(line_no, "height must be nonnegative");
      stage = 2;
    } else {
      if (tokens.size() != 2) fail(line_no, "expected '<gamma> <multiplicity>'");
      const double g = parse_number<double>(tokens[0], line_no, "ordinate");
      const int m = parse_number<int>(tokens[1], line_no, "multiplicity");
      if (!(g > 0.0)) fail(line_no, "ordinate must be positive");
      if (g > height) fail(line_no, "ordinate above the stated height");
      if (!gammas.empty() && !(g > gammas.back())) fail(line_no, "ordinates not ascending");
      if (m < 1) fail(line_no, "multiplicity must be >= 1");
      gammas.push_back(g);
      mults.push_back(m);
    }
  }
  if (stage < 2) fail(line_no, "missing header lines");

  std::optional<DirichletCharacter> chi;
  try {
    chi.emplace(character(q, chi_index));
  } catch (const UsageError& e) {
    throw DataError(std::string("zero file header: ") + e.what());
  }
  return ZeroList{*chi, std::move(gammas), std::move(mults), height, ZeroSource::kIngested};
}

ZeroList load_zeros(const std::filesystem::path& path, std::optional<std::uint64_t> expected_q) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open zero file " + path.string());
  try {
    return load_zeros(in, expected_q);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace semirace
