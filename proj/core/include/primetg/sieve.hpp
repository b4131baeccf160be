// sieve.hpp
// Segmented sieve of Eratosthenes with odd-only bitset storage, exact prime
// counting over real-valued bounds, and prime-in-interval queries. Backing
// store for every block construction in the library.
//
// Interval convention: RealInterval is (lo, hi] with lo exclusive and hi
// inclusive. A prime p qualifies iff lo < p <= hi, decided by exact
// integer-vs-double comparison (primes up to 2^40 are exactly representable
// in a double, and the constructions never go past 2^40). The [lo, hi)
// orientation needed by some constructions is exposed via primes_between.
//
// On-disk cache: fixed little-endian header (magic, version, limit,
// word count) followed by the raw bitset words. Written atomically
// (temp file + rename). Re-sieving dominates experiment time otherwise.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "primetg/errors.hpp"

namespace ptg {

struct RealInterval {
  double lo = 0.0; // exclusive
  double hi = 0.0; // inclusive
  bool empty() const { return !(lo < hi); }
};

struct SieveConfig {
  uint64_t limit = uint64_t{1} << 31;
  uint64_t segment_size = uint64_t{1} << 20; // numbers per segment, >= 2^10
  unsigned workers = 1;
  std::optional<std::filesystem::path> cache_path;
};

class PrimeSieve {
public:
  explicit PrimeSieve(const SieveConfig& config);

  uint64_t limit() const { return limit_; }

  // pi(floor(x)), exact. Throws RangeExceededError for x > limit.
  uint64_t count_primes(double x) const;

  bool is_prime(uint64_t n) const;

  // Primes p with iv.lo < p <= iv.hi, ascending.
  std::vector<uint64_t> primes_in(const RealInterval& iv) const;

  // Orientation-explicit variant: lo_open selects (lo,... vs [lo,...;
  // hi_closed selects ...,hi] vs ...,hi).
  std::vector<uint64_t> primes_between(double lo, double hi, bool lo_open, bool hi_closed) const;

  // Sum of p^-beta over primes_in(iv), compensated, ascending order.
  // beta in (0, 1].
  double reciprocal_power_sum(const RealInterval& iv, double beta) const;

  // Visit primes in [lo, hi] (integer bounds), ascending.
  void for_each_prime(uint64_t lo, uint64_t hi, const std::function<void(uint64_t)>& fn) const;

private:
  void build(unsigned workers);
  bool load_cache(const std::filesystem::path& path);
  void store_cache(const std::filesystem::path& path) const;
  void build_count_index();
  uint64_t count_to(uint64_t x) const; // pi(x) for integer x <= limit
  void check_range(double x) const;

  uint64_t limit_;
  uint64_t segment_size_;
  std::vector<uint64_t> words_;  // bit i <-> odd number 2i+3; set = prime
  std::vector<uint64_t> cum_;    // cumulative set-bit count per superblock
  static constexpr uint64_t kWordsPerSuperblock = 64; // 8192 numbers
};

} // namespace ptg
