#include <cmath>
#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "semirace/error.hpp"
#include "semirace/lfunction.hpp"
#include "semirace/zeros.hpp"

using namespace semirace;

namespace {
const std::filesystem::path kData = SEMIRACE_TEST_DATA;

ZeroList parse(const std::string& text, std::optional<std::uint64_t> q = std::nullopt) {
  std::istringstream in(text);
  return load_zeros(in, q);
}

std::string error_of(const std::string& text, std::optional<std::uint64_t> q = std::nullopt) {
  try {
    parse(text, q);
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}
}  // namespace

TEST_CASE("low heights") {
  const auto chi4 = character(4, 1);
  CHECK(find_zeros(chi4, 5.0).size() == 0);
  const ZeroList z10 = find_zeros(chi4, 10.0);
  REQUIRE(z10.size() == 1);
  CHECK(z10.gammas[0] > 6.0);
  CHECK(z10.gammas[0] < 6.1);
  CHECK(z10.gammas[0] == doctest::Approx(6.020948904697597).epsilon(1e-10));
  CHECK(z10.multiplicities[0] == 1);
  CHECK(z10.height == 10.0);
  CHECK(z10.source == ZeroSource::kComputed);
  CHECK(find_zeros(chi4, 0.0).size() == 0);
  CHECK_THROWS_AS(find_zeros(chi4, 501.0), UsageError);
  CHECK_THROWS_AS(find_zeros(character(5, 1), 10.0), UsageError);
}

TEST_CASE("refined zeros are sign changes of Z") {
  for (std::size_t q : {3, 4}) {
    const auto chi = character(q, 1);
    const ZeroList zl = find_zeros(chi, 100.0);
    for (double g : zl.gammas) {
      const double nearby = std::max(std::abs(hardy_z(g - 1e-3, chi)), std::abs(hardy_z(g + 1e-3, chi)));
      CHECK(std::abs(hardy_z(g, chi)) < 1e-8 * std::max(nearby, 1e-300) + 1e-12);
      CHECK(hardy_z(g - 1e-7, chi) * hardy_z(g + 1e-7, chi) < 0);
    }
    CHECK(std::abs(static_cast<double>(zl.size()) - zero_count_estimate(chi, 100.0)) <= 2 + std::log(100.0));
  }
}

TEST_CASE("count estimate") {
  const auto chi4 = character(4, 1);
  double prev = zero_count_estimate(chi4, 2.0);
  for (double T = 3.0; T <= 500.0; T += 7.0) {
    const double v = zero_count_estimate(chi4, T);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(std::abs(find_zeros(chi4, 50.0).size() - zero_count_estimate(chi4, 50.0)) <= 2.0);
  CHECK_THROWS_AS(zero_count_estimate(chi4, 1.0), UsageError);
}

TEST_CASE("a finer independent scan finds the same zeros") {
  const auto chi4 = character(4, 1);
  const ZeroList zl = find_zeros(chi4, 50.0);
  int changes = 0;
  double prev = hardy_z(1e-4, chi4);
  for (int i = 2; i <= 500'000; ++i) {
    const double z = hardy_z(i * 1e-4, chi4);
    changes += (z < 0) != (prev < 0);
    prev = z;
  }
  CHECK(changes == static_cast<int>(zl.size()));
}

TEST_CASE("scan is independent of thread count") {
  const auto chi3 = character(3, 1);
  ZeroScanOptions one;
  one.threads = 1;
  ZeroScanOptions four;
  four.threads = 4;
  CHECK(find_zeros(chi3, 80.0, one).gammas == find_zeros(chi3, 80.0, four).gammas);
}

TEST_CASE("round trip") {
  const ZeroList zl = find_zeros(character(4, 1), 20.0);
  std::stringstream buf;
  save_zeros(zl, buf);
  const ZeroList back = load_zeros(buf, 4);
  CHECK(back.gammas == zl.gammas);
  CHECK(back.multiplicities == zl.multiplicities);
  CHECK(back.height == zl.height);
  CHECK(back.character == zl.character);
  CHECK(back.source == ZeroSource::kIngested);

  const auto tmp = std::filesystem::temp_directory_path() / "semirace_roundtrip_zeros.txt";
  save_zeros(zl, tmp);
  CHECK(load_zeros(tmp).gammas == zl.gammas);
  std::filesystem::remove(tmp);

  const ZeroList empty = parse("ZEROS v1\nq=4 chi=1 height=5\n");
  CHECK(empty.size() == 0);
  CHECK(empty.height == 5.0);

  const ZeroList three = parse("# c\nZEROS v1\n\nq=5 chi=2 height=12\n6.5 1\n# mid\n9.8 2\n11.9 1\n");
  CHECK(three.size() == 3);
  CHECK(three.multiplicities[1] == 2);
  std::stringstream again;
  save_zeros(three, again);
  CHECK(load_zeros(again).gammas == three.gammas);
}

TEST_CASE("malformed zero files") {
  CHECK(error_of("ZEROS v2\nq=4 chi=1 height=5\n").find("line 1") != std::string::npos);
  CHECK(error_of("ZEROS v1\nq=4 chi=1\n").find("line 2") != std::string::npos);
  CHECK(error_of("ZEROS v1\nq=4 chi=1 height=9\n6.1 1\n5.0 1\n").find("line 4") != std::string::npos);
  CHECK(error_of("ZEROS v1\nq=4 chi=1 height=9\n6.1 1\n6.1 1\n").find("line 4") != std::string::npos);
  CHECK(error_of("ZEROS v1\nq=4 chi=1 height=9\n-1 1\n").find("line 3") != std::string::npos);
  CHECK(error_of("ZEROS v1\nq=4 chi=1 height=9\n9.5 1\n").find("line 3") != std::string::npos);
  CHECK(error_of("ZEROS v1\nq=4 chi=1 height=9\n6.1 0\n").find("line 3") != std::string::npos);
  CHECK(error_of("ZEROS v1\nq=4 chi=1 height=9\n6.1 x\n").find("line 3") != std::string::npos);
  CHECK(error_of("ZEROS v1\nq=4 chi=1 height=9\nabc\n").find("line 3") != std::string::npos);
  CHECK_FALSE(error_of("ZEROS v1\nq=4 chi=7 height=9\n").empty());
  CHECK_FALSE(error_of("").empty());
  CHECK(error_of("ZEROS v1\nq=5 chi=1 height=9\n", 4).find("line 2") != std::string::npos);
  CHECK_THROWS_AS(load_zeros(kData / "does_not_exist.txt"), DataError);
}

TEST_CASE("ingested high-precision zeros agree with computed ones") {
  const ZeroList ref = load_zeros(kData / "zeros_q4_chi1_ref.txt", 4);
  const ZeroList computed = find_zeros(character(4, 1), ref.height);
  REQUIRE(ref.size() == computed.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    CHECK(std::abs(ref.gammas[i] - computed.gammas[i]) < 1e-6);
  }
}

TEST_CASE("mod 5 fixtures") {
  for (std::size_t idx : {1, 2, 3}) {
    const ZeroList zl = load_zeros(kData / ("zeros_q5_chi" + std::to_string(idx) + ".txt"), 5);
    CHECK(zl.character.index() == idx);
    CHECK(zl.height == 60.0);
    CHECK(std::abs(static_cast<double>(zl.size()) - zero_count_estimate(zl.character, 60.0)) <=
          2 + std::log(60.0));
    for (double g : zl.gammas) {
      CHECK(std::abs(detail::dirichlet_l_series({0.5, g}, zl.character)) < 1e-8);
    }
  }
}

TEST_CASE("truncation") {
  const ZeroList zl = find_zeros(character(4, 1), 30.0);
  const ZeroList t = truncate_zeros(zl, 12.0);
  CHECK(t.height == 12.0);
  CHECK(t.size() == 2);
  CHECK_THROWS_AS(truncate_zeros(zl, 31.0), DataError);
}
