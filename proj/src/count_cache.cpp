#include "semirace/count_cache.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <string>

#include "semirace/error.hpp"

namespace semirace {

namespace {

constexpr std::array<char, 4> kMagic = {'S', 'R', 'C', 'V'};
constexpr std::uint32_t kFormatVersion = 1;

class Writer {
 public:
  explicit Writer(std::ofstream& out) : out_(out) {}
  void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void bytes(const char* p, std::size_t n) { out_.write(p, static_cast<std::streamsize>(n)); }

 private:
  void le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.put(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  std::ofstream& out_;
};

class Reader {
 public:
  explicit Reader(std::ifstream& in) : in_(in) {}
  std::uint8_t u8() { return static_cast<std::uint8_t>(le(1)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str(std::size_t n) {
    std::string s(n, '\0');
    in_.read(s.data(), static_cast<std::streamsize>(n));
    check();
    return s;
  }

 private:
  std::uint64_t le(int n) {
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
      const int c = in_.get();
      if (c == std::char_traits<char>::eof()) throw DataError("count cache truncated");
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
    }
    return v;
  }
  void check() {
    if (!in_) throw DataError("count cache truncated");
  }
  std::ifstream& in_;
};

void write_record(Writer& w, const CountVector& cv, std::uint64_t q, bool weights) {
  if (cv.pi.size() != q || cv.pi2.size() != q || (weights && (cv.psi.size() != q || cv.psi2.size() != q))) {
    throw InvariantError("count vector does not match the cache modulus");
  }
  w.u64(cv.x);
  w.u64(cv.pi_noncoprime);
  w.u64(cv.pi2_noncoprime);
  for (auto v : cv.pi) w.u64(v);
  for (auto v : cv.pi2) w.u64(v);
  if (weights) {
    for (auto v : cv.psi) w.f64(v);
    for (auto v : cv.psi2) w.f64(v);
  }
}

CountVector read_record(Reader& r, std::uint64_t q, bool weights) {
  CountVector cv = empty_count_vector(q, weights);
  cv.x = r.u64();
  cv.pi_noncoprime = r.u64();
  cv.pi2_noncoprime = r.u64();
  for (auto& v : cv.pi) v = r.u64();
  for (auto& v : cv.pi2) v = r.u64();
  if (weights) {
    for (auto& v : cv.psi) v = r.f64();
    for (auto& v : cv.psi2) v = r.f64();
  }
  return cv;
}

}  // namespace

std::filesystem::path count_cache_path(const std::filesystem::path& dir, std::uint64_t q,
                                       std::uint64_t limit) {
  return dir / ("race_q" + std::to_string(q) + "_L" + std::to_string(limit) + "_v" +
                SEMIRACE_VERSION + ".bin");
}

void write_count_cache(const std::filesystem::path& path, const CountCache& cache) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write count cache " + tmp.string());
    Writer w(out);
    w.bytes(kMagic.data(), kMagic.size());
    w.u32(kFormatVersion);
    w.u64(cache.q);
    w.u64(cache.limit);
    w.u8(cache.weights ? 1 : 0);
    w.u32(static_cast<std::uint32_t>(cache.artifact_version.size()));
    w.bytes(cache.artifact_version.data(), cache.artifact_version.size());
    w.u64(cache.grid.size());
    for (auto x : cache.grid) w.u64(x);
    w.u64(cache.completed.size());
    for (const auto& cv : cache.completed) write_record(w, cv, cache.q, cache.weights);
    w.u8(cache.resume ? 1 : 0);
    if (cache.resume) write_record(w, *cache.resume, cache.q, cache.weights);
    out.flush();
    if (!out) throw DataError("failed writing count cache " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::optional<CountCache> read_count_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  Reader r(in);
  const std::string magic = r.str(4);
  if (std::memcmp(magic.data(), kMagic.data(), 4) != 0) {
    throw DataError("count cache " + path.string() + " has a bad magic number");
  }
  if (r.u32() != kFormatVersion) throw DataError("count cache " + path.string() + " has an unknown format version");
  CountCache cache;
  cache.q = r.u64();
  cache.limit = r.u64();
  cache.weights = r.u8() != 0;
  const std::uint32_t vlen = r.u32();
  if (vlen > 256) throw DataError("count cache version string too long");
  cache.artifact_version = r.str(vlen);
  if (cache.q == 0 || cache.q > 10'000'000) throw DataError("count cache modulus out of range");
  const std::uint64_t grid_size = r.u64();
  if (grid_size > 100'000'000) throw DataError("count cache grid too large");
  cache.grid.resize(grid_size);
  for (auto& x : cache.grid) x = r.u64();
  const std::uint64_t done = r.u64();
  if (done > grid_size) throw DataError("count cache has more records than grid points");
  for (std::uint64_t i = 0; i < done; ++i) cache.completed.push_back(read_record(r, cache.q, cache.weights));
  if (r.u8() != 0) cache.resume = read_record(r, cache.q, cache.weights);
  return cache;
}

std::vector<CountVector> accumulate_cached(std::uint64_t q, const std::vector<std::uint64_t>& grid,
                                           const SieveOptions& opts,
                                           const std::optional<std::filesystem::path>& cache_dir,
                                           std::size_t flush_segments, CachedRunStats* stats) {
  if (grid.empty()) throw UsageError("empty checkpoint grid");
  if (!cache_dir) return accumulate(q, grid, opts);

  const std::uint64_t limit = grid.back();
  std::filesystem::create_directories(*cache_dir);
  const auto path = count_cache_path(*cache_dir, q, limit);

  std::optional<CountCache> cached;
  try {
    cached = read_count_cache(path);
  } catch (const DataError&) {
    cached.reset();  // unreadable caches are rebuilt
  }
  const bool usable = cached && cached->q == q && cached->limit == limit &&
                      cached->weights == opts.track_factors && cached->grid == grid &&
                      cached->artifact_version == SEMIRACE_VERSION && cached->resume;
  CountCache state;
  CountVector start = empty_count_vector(q, opts.track_factors);
  start.x = 1;
  if (usable) {
    start = *cached->resume;
    if (stats) {
      stats->used_cache = true;
      stats->resumed_from = cached->resume->x;
    }
    state = std::move(*cached);
    if (start.x >= limit && state.completed.size() == grid.size()) return state.completed;
  } else {
    state = CountCache{q, limit, opts.track_factors, SEMIRACE_VERSION, grid, {}, start};
  }

  std::vector<std::uint64_t> remaining;
  for (auto x : grid) {
    if (x > start.x) remaining.push_back(x);
  }
  RaceAccumulator acc(q, remaining, opts.track_factors, start);
  const std::size_t already = state.completed.size();
  std::size_t since_flush = 0;
  auto flush = [&] {
    CountCache snapshot = state;
    const auto& res = acc.results();
    snapshot.completed.insert(snapshot.completed.end(), res.begin(), res.end());
    snapshot.resume = acc.running();
    write_count_cache(path, snapshot);
  };
  sieve_segments(
      start.x + 1, limit + 1, opts, [&](const Segment& seg) { return acc.partial(seg); },
      [&](SegmentPartial&& p) {
        acc.absorb(std::move(p));
        if (++since_flush >= flush_segments) {
          flush();
          since_flush = 0;
        }
      });
  flush();
  std::vector<CountVector> out = std::move(state.completed);
  out.insert(out.end(), acc.results().begin(), acc.results().end());
  if (out.size() != grid.size() || out.size() < already) {
    throw InvariantError("cached accumulation lost checkpoints");
  }
  return out;
}

}  // namespace semirace
