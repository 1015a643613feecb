#ifndef CNR_RNG_HPP
#define CNR_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace cnr {

/* Deterministic random stream addressed by (master_seed, purpose_tag, index).
 * Streams with distinct addresses are statistically independent, so bootstrap
 * replicates can run in any order (or in parallel) without one replicate's
 * draws shifting another's. The normal transform is implemented here rather
 * than via std::normal_distribution, whose algorithm is
 * implementation-defined. */
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::string_view purpose_tag,
            std::uint64_t index = 0)
      : engine_(derive_seed(master_seed, purpose_tag, index)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the pair's second value is cached.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
  }

  static std::uint64_t derive_seed(std::uint64_t master_seed,
                                   std::string_view tag, std::uint64_t index) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the tag bytes
    for (char c : tag) {
      h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
      h *= 0x100000001b3ULL;
    }
    std::uint64_t s = splitmix64(master_seed ^ h);
    s = splitmix64(s + 0x9e3779b97f4a7c15ULL * (index + 1));
    return s;
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace cnr

#endif  // CNR_RNG_HPP
