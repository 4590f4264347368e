#pragma once

#include <cstdint>
#include <vector>

namespace scfsim {

// Deterministic slot assignment: a device with id `device_id` under seed
// `seed` always lands in the same slot of an `n_slots`-wide frame.  The
// base station can therefore separate devices by re-seeding, without
// signalling individual grants.  The mixer is fixed (see rng.hpp) so
// independent implementations agree bit-exactly.
std::uint32_t hash_slot(std::uint64_t device_id, std::uint64_t seed,
                        std::uint32_t n_slots);

// q distinct candidate seeds derived deterministically from master_seed.
// The set is fixed at startup and never refreshed.
std::vector<std::uint64_t> candidate_seeds(std::size_t q,
                                           std::uint64_t master_seed);

// Number of devices whose assigned slot is shared with at least one other
// device in `ids` — the quantity the seed policy implicitly minimizes.
std::size_t collision_count(std::uint64_t seed,
                            const std::vector<std::uint64_t>& ids,
                            std::uint32_t n_slots);

}  // namespace scfsim
