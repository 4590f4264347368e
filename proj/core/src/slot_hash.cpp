#include "scfsim/slot_hash.hpp"

#include <algorithm>
#include <stdexcept>

#include "scfsim/rng.hpp"

namespace scfsim {

std::uint32_t hash_slot(std::uint64_t device_id, std::uint64_t seed,
                        std::uint32_t n_slots) {
  if (n_slots == 0) {
    throw std::invalid_argument("hash_slot: slot count must be >= 1");
  }
  return static_cast<std::uint32_t>(mix64(seed + device_id) % n_slots);
}

std::vector<std::uint64_t> candidate_seeds(std::size_t q,
                                           std::uint64_t master_seed) {
  constexpr std::uint64_t kSeedStream = 0x53454544ull;  // namespace tag
  Rng rng(substream_seed(master_seed, kSeedStream, 0));
  std::vector<std::uint64_t> seeds;
  seeds.reserve(q);
  while (seeds.size() < q) {
    const std::uint64_t s = rng.next();
    if (std::find(seeds.begin(), seeds.end(), s) == seeds.end()) {
      seeds.push_back(s);
    }
  }
  return seeds;
}

std::size_t collision_count(std::uint64_t seed,
                            const std::vector<std::uint64_t>& ids,
                            std::uint32_t n_slots) {
  std::vector<std::uint32_t> occupancy(n_slots, 0);
  for (const std::uint64_t id : ids) occupancy[hash_slot(id, seed, n_slots)]++;
  std::size_t colliding = 0;
  for (const std::uint64_t id : ids) {
    if (occupancy[hash_slot(id, seed, n_slots)] > 1) colliding++;
  }
  return colliding;
}

}  // namespace scfsim
