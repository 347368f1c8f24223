#pragma once

// Zero ordinates of Dirichlet L-functions: computation for the built-in
// characters and a line-oriented text format for everything else.
//
// Zero file format:
//   ZEROS v1
//   q=<q> chi=<index> height=<T>
//   <gamma> <multiplicity>     (ascending, 0 < gamma <= T)
// Lines starting with '#' and blank lines are ignored. <index> is the
// canonical character index documented in characters.hpp.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "semirace/characters.hpp"

namespace semirace {

enum class ZeroSource { kComputed, kIngested };

struct ZeroList {
  DirichletCharacter character;
  std::vector<double> gammas;       // strictly ascending, in (0, height]
  std::vector<int> multiplicities;  // m(gamma) >= 1
  double height = 0.0;
  ZeroSource source = ZeroSource::kComputed;

  std::size_t size() const { return gammas.size(); }
  // Throws DataError on out-of-order or out-of-range ordinates and bad multiplicities.
  void validate() const;
};

inline constexpr double kDefaultZeroStep = 1e-3;
inline constexpr double kZeroTolerance = 1e-9;

struct ZeroScanOptions {
  double step = kDefaultZeroStep;
  unsigned threads = 0;  // 0: hardware concurrency
  bool check_count = true;
};

// Zeros of L(s, chi) on the critical line with 0 < gamma <= T, isolated by
// sign changes of hardy_z on a grid and bisected to kZeroTolerance. Each zero
// has multiplicity 1. Built-in characters only, T <= 500. When check_count is
// set and T >= 2, a count further than 2 + log T from zero_count_estimate
// throws DataError.
ZeroList find_zeros(const DirichletCharacter& chi, double T, const ZeroScanOptions& opts = {});

// Smooth count of zeros with 0 < gamma <= T for a primitive character:
// hardy_theta(T) / pi, which is (T / 2pi) log(qT / (2 pi e)) + O(1).
double zero_count_estimate(const DirichletCharacter& chi, double T);

// Keeps the zeros with gamma <= T and lowers the height to T. T must not
// exceed the list's height.
ZeroList truncate_zeros(const ZeroList& zl, double T);

void save_zeros(const ZeroList& zl, std::ostream& out);
void save_zeros(const ZeroList& zl, const std::filesystem::path& path);

// Parses a zero file; errors carry the offending line number. When
// expected_q is given, a different modulus is rejected.
ZeroList load_zeros(std::istream& in, std::optional<std::uint64_t> expected_q = std::nullopt);
ZeroList load_zeros(const std::filesystem::path& path,
                    std::optional<std::uint64_t> expected_q = std::nullopt);

}  // namespace semirace
