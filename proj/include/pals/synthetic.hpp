#pragma once

#include "pals/instance.hpp"

#include <cstdint>
#include <random>
#include <unordered_map>
#include <vector>

namespace pals {

// Desk-scale stand-in for a free-living recording: two class-conditional
// components in feature space with a skewed positive rate. `overlap` in [0,1)
// controls the separation between class means along the first dimension
// (0 means disjoint supports). `user_shift` displaces the stream and eval
// components along that same axis relative to the in-lab pool, emulating a
// new user whose gestures sit elsewhere in feature space. An optional drift
// switches the stream's positive rate at a fraction of its length.
struct SyntheticStreamSpec {
    std::size_t dim = 6;
    double positive_rate = 0.067;
    double overlap = 0.5;
    double user_shift = 0.0;

    std::size_t pool_size = 300;
    double pool_positive_rate = 0.3;

    std::size_t stream_length = 1200;
    std::int64_t instance_period_ms = 3000;
    double drift_at = -1.0; // fraction of the stream; negative disables
    double drifted_positive_rate = 0.0;

    std::size_t eval_size = 400;
    std::uint64_t seed = 0;

    double separation() const { return 7.0 * (1.0 - overlap); }
};

struct SyntheticData {
    std::vector<Instance> pool;   // labeled in-lab instances
    std::vector<Instance> stream; // unlabeled arrivals with timestamps
    std::vector<Instance> eval;   // unlabeled held-out set (stream distribution)
    std::unordered_map<std::int64_t, int> truth; // ground truth for stream + eval
};

SyntheticData generate_synthetic(const SyntheticStreamSpec& spec);

// Uniform double in [0,1) from the top 53 bits; identical on every platform.
inline double next_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller, truncated to [-3, 3] by rejection.
double next_truncated_normal(std::mt19937_64& rng);

} // namespace pals
