#pragma once

// Resumable on-disk checkpoints for long race sieves.
//
// Binary layout, all integers little-endian:
//   magic "SRCV", u32 format version
//   u64 q, u64 limit, u8 weights, u32 artifact version length + bytes
//   u64 grid size, u64[grid size] checkpoints
//   u64 completed count, record[completed count]
//   u8 has_resume, record (when has_resume)
// record: u64 x, u64 pi_noncoprime, u64 pi2_noncoprime, u64[q] pi, u64[q] pi2,
//         then f64[q] psi and f64[q] psi2 when weights is set.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "semirace/race.hpp"

namespace semirace {

struct CountCache {
  std::uint64_t q = 0;
  std::uint64_t limit = 0;
  bool weights = false;
  std::string artifact_version;
  std::vector<std::uint64_t> grid;
  std::vector<CountVector> completed;  // one per grid point already reached
  std::optional<CountVector> resume;   // running totals at resume->x
};

std::filesystem::path count_cache_path(const std::filesystem::path& dir, std::uint64_t q,
                                       std::uint64_t limit);

// Atomic replace via a temporary file.
void write_count_cache(const std::filesystem::path& path, const CountCache& cache);

// nullopt when the file does not exist; DataError when it is corrupt.
std::optional<CountCache> read_count_cache(const std::filesystem::path& path);

struct CachedRunStats {
  bool used_cache = false;
  std::uint64_t resumed_from = 0;  // 0 when sieving started at n = 2
};

// accumulate() over `grid` (whose last point is the limit), checkpointing to
// cache_dir every `flush_segments` segments when a directory is given. A
// matching cache is resumed; a mismatching one is ignored and overwritten.
std::vector<CountVector> accumulate_cached(std::uint64_t q, const std::vector<std::uint64_t>& grid,
                                           const SieveOptions& opts,
                                           const std::optional<std::filesystem::path>& cache_dir,
                                           std::size_t flush_segments = 4,
                                           CachedRunStats* stats = nullptr);

}  // namespace semirace
