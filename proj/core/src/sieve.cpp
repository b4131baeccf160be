#include "primetg/sieve.hpp"

#include <unistd.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <thread>

#include "primetg/numeric.hpp"

namespace ptg {

namespace {

constexpr char kMagic[8] = {'P', 'T', 'G', 'S', 'I', 'E', 'V', 'E'};
constexpr uint32_t kCacheVersion = 1;

struct CacheHeader {
  char magic[8];
  uint32_t version;
  uint32_t reserved;
  uint64_t limit;
  uint64_t word_count;
};
static_assert(sizeof(CacheHeader) == 32);

inline uint64_t bit_index(uint64_t n) { return (n - 3) / 2; }

// Simple odd sieve up to m; returns odd primes only.
std::vector<uint64_t> base_primes(uint64_t m) {
  std::vector<uint8_t> comp((m + 1) / 2 + 1, 0); // index i <-> 2i+1
  std::vector<uint64_t> primes;
  for (uint64_t p = 3; p * p <= m; p += 2) {
    if (comp[p / 2]) continue;
    for (uint64_t q = p * p; q <= m; q += 2 * p) comp[q / 2] = 1;
  }
  for (uint64_t p = 3; p <= m; p += 2)
    if (!comp[p / 2]) primes.push_back(p);
  return primes;
}

} // namespace

PrimeSieve::PrimeSieve(const SieveConfig& config)
    : limit_(config.limit), segment_size_(config.segment_size) {
  if (limit_ < 2) throw ConfigError("sieve limit must be >= 2");
  if (segment_size_ < (uint64_t{1} << 10))
    throw ConfigError("sieve segment_size must be >= 2^10");

  bool loaded = false;
  if (config.cache_path) loaded = load_cache(*config.cache_path);
  if (!loaded) {
    build(std::max(1u, config.workers));
    if (config.cache_path) store_cache(*config.cache_path);
  }
  build_count_index();
}

void PrimeSieve::build(unsigned workers) {
  const uint64_t bits = limit_ >= 3 ? bit_index(limit_) + 1 : 0;
  words_.assign((bits + 63) / 64, ~uint64_t{0});
  if (bits % 64 != 0 && !words_.empty())
    words_.back() &= (uint64_t{1} << (bits % 64)) - 1;
  if (limit_ < 9) return; // smallest odd composite is 9

  const auto primes = base_primes(isqrt(limit_));
  // Round the span up to a multiple of 128 numbers (= 64 bits = 1 word) so
  // no two segments ever touch the same bitset word.
  const uint64_t seg_span = ((std::max<uint64_t>(segment_size_, 1 << 10) + 127) / 128) * 128;
  const uint64_t seg_count = (limit_ - 3) / seg_span + 1;

  auto sieve_segments = [&](uint64_t seg_begin, uint64_t seg_end) {
    for (uint64_t s = seg_begin; s < seg_end; ++s) {
      const uint64_t lo = 3 + s * seg_span;
      const uint64_t hi = std::min(limit_, lo + seg_span - 1);
      for (uint64_t p : primes) {
        if (p * p > hi) break;
        uint64_t first = std::max(p * p, ((lo + p - 1) / p) * p);
        if (first % 2 == 0) first += p;
        for (uint64_t q = first; q <= hi; q += 2 * p)
          words_[bit_index(q) / 64] &= ~(uint64_t{1} << (bit_index(q) % 64));
      }
    }
  };

  // Segment spans are multiples of the bit granularity only when seg_span is
  // even; force even span so no two segments share a word.
  // (seg_span is a power of two >= 1024, hence even.)
  if (workers <= 1 || seg_count < 2 * workers) {
    sieve_segments(0, seg_count);
  } else {
    std::vector<std::thread> pool;
    const uint64_t chunk = (seg_count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const uint64_t b = std::min<uint64_t>(seg_count, w * chunk);
      const uint64_t e = std::min<uint64_t>(seg_count, b + chunk);
      if (b < e) pool.emplace_back(sieve_segments, b, e);
    }
    for (auto& t : pool) t.join();
  }
}

void PrimeSieve::build_count_index() {
  const uint64_t superblocks = words_.size() / kWordsPerSuperblock + 1;
  cum_.assign(superblocks + 1, 0);
  uint64_t running = 0;
  for (uint64_t sb = 0; sb < superblocks; ++sb) {
    cum_[sb] = running;
    const uint64_t w0 = sb * kWordsPerSuperblock;
    const uint64_t w1 = std::min<uint64_t>(words_.size(), w0 + kWordsPerSuperblock);
    for (uint64_t w = w0; w < w1; ++w) running += std::popcount(words_[w]);
  }
  cum_[superblocks] = running;
}

void PrimeSieve::check_range(double x) const {
  if (!(x <= static_cast<double>(limit_))) throw RangeExceededError(x, limit_);
}

uint64_t PrimeSieve::count_to(uint64_t x) const {
  if (x < 2) return 0;
  if (x == 2) return 1;
  uint64_t count = 1; // the prime 2
  const uint64_t last_bit = bit_index(x % 2 == 0 ? x - 1 : x);
  const uint64_t full_words = last_bit / 64;
  const uint64_t sb = full_words / kWordsPerSuperblock;
  count += cum_[sb];
  for (uint64_t w = sb * kWordsPerSuperblock; w < full_words; ++w)
    count += std::popcount(words_[w]);
  const uint64_t tail_bits = last_bit % 64 + 1;
  const uint64_t mask = tail_bits == 64 ? ~uint64_t{0} : (uint64_t{1} << tail_bits) - 1;
  count += std::popcount(words_[full_words] & mask);
  return count;
}

uint64_t PrimeSieve::count_primes(double x) const {
  if (x < 0) throw ConfigError("count_primes: x must be >= 0");
  check_range(x);
  return count_to(static_cast<uint64_t>(std::floor(x)));
}

bool PrimeSieve::is_prime(uint64_t n) const {
  if (n > limit_) throw RangeExceededError(static_cast<double>(n), limit_);
  if (n < 2) return false;
  if (n == 2) return true;
  if (n % 2 == 0) return false;
  const uint64_t i = bit_index(n);
  return (words_[i / 64] >> (i % 64)) & 1;
}

void PrimeSieve::for_each_prime(uint64_t lo, uint64_t hi,
                                const std::function<void(uint64_t)>& fn) const {
  if (hi > limit_) throw RangeExceededError(static_cast<double>(hi), limit_);
  if (lo > hi) return;
  if (lo <= 2 && 2 <= hi) fn(2);
  uint64_t start = std::max<uint64_t>(lo, 3);
  if (start % 2 == 0) ++start;
  if (start > hi) return;
  uint64_t i = bit_index(start);
  const uint64_t last = bit_index(hi % 2 == 0 ? hi - 1 : hi);
  uint64_t w = i / 64;
  uint64_t word = words_[w] & (~uint64_t{0} << (i % 64));
  const uint64_t last_w = last / 64;
  while (w <= last_w) {
    uint64_t masked = word;
    if (w == last_w) {
      const uint64_t tail_bits = last % 64 + 1;
      const uint64_t mask = tail_bits == 64 ? ~uint64_t{0} : (uint64_t{1} << tail_bits) - 1;
      masked &= mask;
    }
    while (masked) {
      const int b = std::countr_zero(masked);
      masked &= masked - 1;
      fn(3 + 2 * (w * 64 + static_cast<uint64_t>(b)));
    }
    ++w;
    if (w <= last_w) word = words_[w];
  }
}

std::vector<uint64_t> PrimeSieve::primes_between(double lo, double hi, bool lo_open,
                                                 bool hi_closed) const {
  check_range(hi);
  std::vector<uint64_t> out;
  if (!(lo <= hi)) return out;
  // Integer candidates, then exact endpoint comparison in double.
  double lo_f = std::floor(lo);
  uint64_t first = lo_f < 0 ? 0 : static_cast<uint64_t>(lo_f);
  while (static_cast<double>(first) < lo ||
         (lo_open && static_cast<double>(first) == lo))
    ++first;
  double hi_f = std::floor(hi);
  if (hi_f < 0) return out;
  auto last_signed = static_cast<int64_t>(hi_f);
  while (last_signed >= 0 &&
         (static_cast<double>(last_signed) > hi ||
          (!hi_closed && static_cast<double>(last_signed) == hi)))
    --last_signed;
  if (last_signed < 2) return out;
  const auto last = static_cast<uint64_t>(last_signed);
  if (first > last) return out;
  for_each_prime(first, last, [&](uint64_t p) { out.push_back(p); });
  return out;
}

std::vector<uint64_t> PrimeSieve::primes_in(const RealInterval& iv) const {
  return primes_between(iv.lo, iv.hi, /*lo_open=*/true, /*hi_closed=*/true);
}

double PrimeSieve::reciprocal_power_sum(const RealInterval& iv, double beta) const {
  if (!(beta > 0.0 && beta <= 1.0))
    throw ConfigError("reciprocal_power_sum: beta must be in (0, 1]");
  check_range(iv.hi);
  CompensatedSum sum;
  double lo_f = std::floor(iv.lo);
  uint64_t first = lo_f < 2 ? 2 : static_cast<uint64_t>(lo_f);
  while (static_cast<double>(first) <= iv.lo) ++first;
  double hi_f = std::floor(iv.hi);
  if (hi_f < 2) return 0.0;
  const auto last = static_cast<uint64_t>(hi_f);
  if (first > last) return 0.0;
  for_each_prime(first, last, [&](uint64_t p) {
    sum.add(std::pow(static_cast<double>(p), -beta));
  });
  return sum.value();
}

bool PrimeSieve::load_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  CacheHeader h{};
  in.read(reinterpret_cast<char*>(&h), sizeof(h));
  if (!in) return false;
  if (std::memcmp(h.magic, kMagic, 8) != 0 || h.version != kCacheVersion) return false;
  if (h.limit != limit_) return false;
  words_.resize(h.word_count);
  in.read(reinterpret_cast<char*>(words_.data()),
          static_cast<std::streamsize>(h.word_count * sizeof(uint64_t)));
  return static_cast<bool>(in);
}

void PrimeSieve::store_cache(const std::filesystem::path& path) const {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  auto tmp = path;
  tmp += ".tmp." + std::to_string(static_cast<uint64_t>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return; // cache is best-effort
    CacheHeader h{};
    std::memcpy(h.magic, kMagic, 8);
    h.version = kCacheVersion;
    h.reserved = 0;
    h.limit = limit_;
    h.word_count = words_.size();
    out.write(reinterpret_cast<const char*>(&h), sizeof(h));
    out.write(reinterpret_cast<const char*>(words_.data()),
              static_cast<std::streamsize>(words_.size() * sizeof(uint64_t)));
    if (!out) return;
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) std::filesystem::remove(tmp, ec);
}

} // namespace ptg
