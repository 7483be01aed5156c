#pragma once

#include "pals/instance.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace pals {

struct InformativenessScore {
    std::int64_t instance_id = 0;
    double score = 0.0; // Shannon entropy of the predicted distribution, bits
};

// Shannon entropy of a label distribution in bits, with 0*log(0) = 0.
// Zero means the model is certain; log2(|classes|) (1 for binary) means it
// knows nothing.
double entropy(const LabelDistribution& dist);

// The min(delta, n) highest-scoring instance ids, ordered by descending
// score; ties keep both candidates and break toward the lower id.
std::vector<std::int64_t> select_top(std::vector<InformativenessScore> scores,
                                     std::size_t delta);

// Seeded uniform sample of delta ids without replacement.
std::vector<std::int64_t> uniform_select(const std::vector<std::int64_t>& ids,
                                         std::size_t delta, std::uint64_t seed);

struct SmoteResult {
    std::vector<Instance> instances; // inputs first, synthetics appended
    std::size_t synthetic_count = 0;
    bool skipped = false; // fewer than 2 minority instances, nothing generated
};

// Equalizes class counts by interpolating new minority-class points: each
// synthetic is x + g * (nn - x) for a minority instance x, one of its
// k_neighbors minority nearest neighbors nn, and g uniform in [0,1].
// Synthetic instances are flagged and numbered from first_id when given,
// otherwise from one past the pool's max id.
SmoteResult smote_balance(const std::vector<Instance>& labeled, std::size_t k_neighbors,
                          std::uint64_t seed,
                          std::optional<std::int64_t> first_id = std::nullopt);

} // namespace pals
