#pragma once

#include <cstdint>

#include "kanforge/errors.hpp"

namespace kanforge {

/**
 * Global bounds shared by every operation.
 *
 * All simplicial data is truncated at max_dim; predicates that would need
 * higher levels are reported as "verified up to dimension max_dim".
 * Searches count nodes against search_budget and fail explicitly when it
 * runs out.  fiber_cap bounds per-simplex fiber cardinality wherever a
 * well-ordered morphism is accepted or produced.
 */
struct Config {
    int max_dim = 3;
    int fiber_cap = 3;
    long long search_budget = 1'000'000;
    std::uint64_t rng_seed = 0;

    void validate() const {
        if (max_dim < 0) throw InputError("config: max_dim must be >= 0");
        if (fiber_cap < 1) throw InputError("config: fiber_cap must be >= 1");
        if (search_budget < 1) throw InputError("config: search_budget must be >= 1");
    }
};

}  // namespace kanforge
