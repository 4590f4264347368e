#pragma once

#include <cmath>
#include <cstdint>

namespace scfsim {

// 64-bit finalizing mixer used for both slot hashing and RNG stream
// derivation.  All deterministic behaviour in the simulator bottoms out
// in this function, so its constants are load-bearing: changing them
// changes every golden value in the test suite.
constexpr std::uint64_t GOLDEN_GAMMA = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  std::uint64_t z = x + GOLDEN_GAMMA;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Derives an independent child seed from a master seed.  `purpose`
// namespaces the stream kind, `index` selects the instance (device id,
// cluster id, run index, ...).  Two-level mixing keeps (purpose, index)
// pairs from colliding under addition.
constexpr std::uint64_t substream_seed(std::uint64_t master, std::uint64_t purpose,
                                       std::uint64_t index) noexcept {
  return mix64(mix64(master + purpose) + index);
}

// Stream purpose tags.  Arbitrary distinct constants; fixed forever.
namespace stream {
constexpr std::uint64_t arrival = 0x41525256ull;    // per-device packet arrivals
constexpr std::uint64_t mac = 0x4D414343ull;        // access draws + contention slots
constexpr std::uint64_t channel = 0x4348414Eull;    // shadowing + fading
constexpr std::uint64_t replay = 0x5245504Cull;     // arrival replay cursor
constexpr std::uint64_t placement = 0x504C4143ull;  // device positions
constexpr std::uint64_t detection = 0x44455443ull;  // table-mode decode draws
constexpr std::uint64_t agent = 0x41474E54ull;      // policy sampling
constexpr std::uint64_t run = 0x52554E53ull;        // per-run master fan-out
}  // namespace stream

// Counter-based splitmix64 generator.  Output k of seed s is
// mix64(s + k * GOLDEN_GAMMA), so the first output equals mix64(seed).
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    const std::uint64_t r = mix64(state_);
    state_ += GOLDEN_GAMMA;
    return r;
  }

  // Uniform on [0,1) with 53 random bits.
  double u01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform on (0,1); never returns 0 or 1, safe for log().
  double u01_open() noexcept {
    return (static_cast<double>(next() >> 12) + 0.5) * 0x1.0p-52;
  }

  // Standard normal via Box-Muller.  Always consumes exactly two draws
  // and discards the second variate: reproducibility is worth more here
  // than halving the (already cheap) trig cost.
  double normal() noexcept {
    const double r = std::sqrt(-2.0 * std::log(u01_open()));
    const double t = 6.283185307179586476925286766559 * u01();
    return r * std::cos(t);
  }

  // Exponential with unit mean.
  double exponential() noexcept { return -std::log(u01_open()); }

  // Unbiased integer on [0, n) (Lemire multiply-shift with rejection).
  std::uint64_t below(std::uint64_t n) noexcept {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t t = (0 - n) % n;
      while (lo < t) {
        m = static_cast<unsigned __int128>(next()) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace scfsim
