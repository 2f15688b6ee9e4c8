#ifndef CRS_RNG_HPP
#define CRS_RNG_HPP

#include <cmath>
#include <cstdint>
#include <limits>

namespace crs::rng {

// Counter-based splittable generator. Every consumer derives its own
// stream from a (seed, id...) key, so results do not depend on how work
// is scheduled across threads.
inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer (Stafford mix13 variant).
inline std::uint64_t mix(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

inline std::uint64_t derive(std::uint64_t key, std::uint64_t id) noexcept {
  return mix(key + kGolden * (id + 1));
}

class Stream {
 public:
  explicit Stream(std::uint64_t key) noexcept : key_(key) {}

  Stream substream(std::uint64_t id) const noexcept {
    return Stream(derive(key_, id));
  }

  std::uint64_t next_u64() noexcept { return mix(key_ + kGolden * ++counter_); }

  // Uniform on the open interval (0, 1); never returns an exact endpoint.
  double next_uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Exponential(rate); +inf when rate <= 0 (no event ever happens).
  double next_exponential(double rate) noexcept {
    if (rate <= 0.0) return std::numeric_limits<double>::infinity();
    return -std::log(next_uniform()) / rate;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace crs::rng

#endif
