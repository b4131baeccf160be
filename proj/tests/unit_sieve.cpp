#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "primetg/numeric.hpp"
#include "primetg/sieve.hpp"
#include "support/oracles.hpp"

using namespace ptg;

namespace {

PrimeSieve& small_sieve() {
  static PrimeSieve sieve(SieveConfig{.limit = 200'000, .segment_size = 1 << 12});
  return sieve;
}

} // namespace

TEST_CASE("count_primes matches trial division exhaustively to 1e5") {
  auto& sieve = small_sieve();
  uint64_t running = 0;
  for (uint64_t x = 0; x <= 100'000; ++x) {
    if (oracle::is_prime(x)) ++running;
    CAPTURE(x);
    REQUIRE(sieve.count_primes(static_cast<double>(x)) == running);
  }
  CHECK(sieve.count_primes(1) == 0);
  CHECK(sieve.count_primes(10) == 4);
  CHECK(sieve.count_primes(100) == 25);
  CHECK(sieve.count_primes(2.5) == 1);
}

TEST_CASE("count_primes beyond the limit reports the limit") {
  auto& sieve = small_sieve();
  try {
    sieve.count_primes(1e9);
    FAIL("expected RangeExceededError");
  } catch (const RangeExceededError& e) {
    CHECK(e.limit() == 200'000);
    CHECK(std::string(e.what()).find("200000") != std::string::npos);
  }
}

TEST_CASE("primes_in respects (lo, hi] with exact endpoint comparison") {
  auto& sieve = small_sieve();
  CHECK(sieve.primes_in({20.09, 24.53}) == std::vector<uint64_t>{23});
  CHECK(sieve.primes_in({7.0, 11.0}) == std::vector<uint64_t>{11});
  CHECK(sieve.primes_in({42.0, 42.0}).empty());
  CHECK(sieve.primes_in({2.0, 6.0}) == std::vector<uint64_t>{3, 5});
  // lo exclusive, hi inclusive at exact integers
  CHECK(sieve.primes_in({2.0, 3.0}) == std::vector<uint64_t>{3});
  CHECK(sieve.primes_in({1.0, 2.0}) == std::vector<uint64_t>{2});

  for (auto [lo, hi] : {std::pair{100.0, 200.0}, {1.5, 97.0}, {8999.5, 9100.25}}) {
    CAPTURE(lo);
    CAPTURE(hi);
    CHECK(sieve.primes_in({lo, hi}) == oracle::primes_in_open_closed(lo, hi));
  }
}

TEST_CASE("primes_between supports [lo, hi) orientation") {
  auto& sieve = small_sieve();
  CHECK(sieve.primes_between(11.0, 13.0, false, false) == std::vector<uint64_t>{11});
  CHECK(sieve.primes_between(11.0, 13.0, true, true) == std::vector<uint64_t>{13});
  CHECK(sieve.primes_between(11.0, 11.0, false, true) == std::vector<uint64_t>{11});
}

TEST_CASE("interval queries are disjoint and additive across a split point") {
  auto& sieve = small_sieve();
  const double a = 10.5, b = 1234.0, c = 54321.9;
  auto left = sieve.primes_in({a, b});
  auto right = sieve.primes_in({b, c});
  auto whole = sieve.primes_in({a, c});
  std::vector<uint64_t> merged = left;
  merged.insert(merged.end(), right.begin(), right.end());
  CHECK(merged == whole);

  const double s1 = sieve.reciprocal_power_sum({a, b}, 1.0);
  const double s2 = sieve.reciprocal_power_sum({b, c}, 1.0);
  const double s = sieve.reciprocal_power_sum({a, c}, 1.0);
  CHECK(s == doctest::Approx(s1 + s2).epsilon(1e-12));
  CHECK(s1 <= s); // monotone under interval inclusion
}

TEST_CASE("reciprocal_power_sum single and empty intervals") {
  auto& sieve = small_sieve();
  CHECK(sieve.reciprocal_power_sum({20.09, 24.53}, 1.0) ==
        doctest::Approx(1.0 / 23.0).epsilon(1e-15));
  CHECK(sieve.reciprocal_power_sum({42.0, 42.0}, 1.0) == 0.0);
  CHECK(sieve.reciprocal_power_sum({2.0, 6.0}, 1.0) ==
        doctest::Approx(1.0 / 3.0 + 1.0 / 5.0).epsilon(1e-15));
  CHECK_THROWS_AS(sieve.reciprocal_power_sum({2.0, 6.0}, 1.5), ConfigError);
}

TEST_CASE("worker partitioning does not change the sieve or its sums") {
  SieveConfig one{.limit = 500'000, .segment_size = 1 << 12, .workers = 1};
  SieveConfig eight{.limit = 500'000, .segment_size = 1 << 12, .workers = 8};
  PrimeSieve s1(one), s8(eight);
  CHECK(s1.count_primes(500'000) == s8.count_primes(500'000));
  for (double x : {100.0, 65536.0, 499'999.0})
    CHECK(s1.count_primes(x) == s8.count_primes(x));
  const double r1 = s1.reciprocal_power_sum({2.0, 500'000.0}, 0.75);
  const double r8 = s8.reciprocal_power_sum({2.0, 500'000.0}, 0.75);
  CHECK(r1 == r8); // bit identical: fixed ascending reduction order
}

TEST_CASE("cache round trip preserves every query") {
  auto dir = std::filesystem::temp_directory_path() / "primetg_test_cache";
  std::filesystem::create_directories(dir);
  auto path = dir / "sieve_100k.bin";
  std::filesystem::remove(path);

  PrimeSieve fresh(SieveConfig{.limit = 100'000, .segment_size = 1 << 10, .cache_path = path});
  REQUIRE(std::filesystem::exists(path));
  PrimeSieve cached(SieveConfig{.limit = 100'000, .segment_size = 1 << 10, .cache_path = path});
  for (double x : {2.0, 9.0, 97.0, 1000.0, 99'991.0, 100'000.0})
    CHECK(fresh.count_primes(x) == cached.count_primes(x));
  CHECK(fresh.primes_in({50'000.0, 50'200.0}) == cached.primes_in({50'000.0, 50'200.0}));

  // A cache built for a different limit is rejected and rebuilt.
  PrimeSieve other(SieveConfig{.limit = 50'000, .segment_size = 1 << 10, .cache_path = path});
  CHECK(other.count_primes(50'000.0) == oracle::count_primes(50'000));
}

TEST_CASE("is_prime agrees with trial division on a sample") {
  auto& sieve = small_sieve();
  for (uint64_t n : {0ull, 1ull, 2ull, 3ull, 4ull, 9ull, 91ull, 97ull, 7919ull, 199'999ull})
    CHECK(sieve.is_prime(n) == oracle::is_prime(n));
}

TEST_CASE("fractional_distance basics") {
  CHECK(fractional_distance(0.5) == 0.5);
  CHECK(fractional_distance(-0.2) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(fractional_distance(3.7) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(fractional_distance(42.0) == 0.0);
}

TEST_CASE("fractional_distance_scaled agrees with long double reference") {
  const double t = std::sqrt(2.0);
  for (int64_t q : {1ll, 3ll, 12ll, 29ll, 169ll, 985ll, 5741ll, 1'000'003ll, (1ll << 30) - 1}) {
    long double prod = static_cast<long double>(q) * static_cast<long double>(t);
    long double f = prod - std::floor(prod);
    long double ref = f <= 0.5L ? f : 1.0L - f;
    CHECK(fractional_distance_scaled(q, t) ==
          doctest::Approx(static_cast<double>(ref)).epsilon(1e-12));
  }
}
