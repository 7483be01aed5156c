#include "pals/synthetic.hpp"

#include "pals/errors.hpp"

#include <cmath>
#include <numbers>

namespace pals {

double next_truncated_normal(std::mt19937_64& rng) {
    for (;;) {
        double u1 = next_unit(rng);
        while (u1 <= 0.0) u1 = next_unit(rng);
        const double u2 = next_unit(rng);
        const double v = std::sqrt(-2.0 * std::log(u1)) *
                         std::cos(2.0 * std::numbers::pi * u2);
        if (v >= -3.0 && v <= 3.0) return v;
    }
}

namespace {

Instance draw_instance(std::mt19937_64& rng, const SyntheticStreamSpec& spec, int label,
                       double axis_offset) {
    Instance inst;
    inst.features.resize(spec.dim);
    for (std::size_t d = 0; d < spec.dim; ++d) inst.features[d] = next_truncated_normal(rng);
    inst.features[0] += axis_offset + (label == 1 ? spec.separation() : 0.0);
    return inst;
}

void check(const SyntheticStreamSpec& spec) {
    if (spec.dim < 1) throw ConfigError("synthetic: dim must be >= 1");
    if (!(spec.positive_rate > 0.0) || !(spec.positive_rate < 1.0))
        throw ConfigError("synthetic: positive_rate must be in (0,1)");
    if (spec.overlap < 0.0 || spec.overlap >= 1.0)
        throw ConfigError("synthetic: overlap must be in [0,1)");
    if (spec.pool_size < 2) throw ConfigError("synthetic: pool_size must be >= 2");
    if (!(spec.pool_positive_rate > 0.0) || !(spec.pool_positive_rate < 1.0))
        throw ConfigError("synthetic: pool_positive_rate must be in (0,1)");
    if (spec.drift_at >= 0.0 &&
        (!(spec.drifted_positive_rate > 0.0) || !(spec.drifted_positive_rate < 1.0)))
        throw ConfigError("synthetic: drifted_positive_rate must be in (0,1)");
    if (spec.instance_period_ms <= 0)
        throw ConfigError("synthetic: instance_period_ms must be positive");
}

} // namespace

SyntheticData generate_synthetic(const SyntheticStreamSpec& spec) {
    check(spec);
    std::mt19937_64 rng(spec.seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);

    SyntheticData data;
    std::int64_t next_id = 1;

    // In-lab pool: labeled, centered at the lab origin. Both classes are
    // guaranteed present so the pool can seed a model.
    data.pool.reserve(spec.pool_size);
    for (std::size_t i = 0; i < spec.pool_size; ++i) {
        int label;
        if (i == 0)
            label = 1;
        else if (i == 1)
            label = 0;
        else
            label = next_unit(rng) < spec.pool_positive_rate ? 1 : 0;
        Instance inst = draw_instance(rng, spec, label, 0.0);
        inst.id = next_id++;
        inst.true_label = label;
        inst.distribution = LabelDistribution::one_hot(label);
        data.pool.push_back(std::move(inst));
    }

    // Stream: unlabeled arrivals on a fixed cadence at the shifted user
    // position, with an optional positive-rate drift partway through.
    const auto drift_index = spec.drift_at >= 0.0
                                 ? static_cast<std::size_t>(spec.drift_at *
                                                            static_cast<double>(spec.stream_length))
                                 : spec.stream_length + 1;
    data.stream.reserve(spec.stream_length);
    for (std::size_t i = 0; i < spec.stream_length; ++i) {
        const double rate = i >= drift_index ? spec.drifted_positive_rate : spec.positive_rate;
        const int label = next_unit(rng) < rate ? 1 : 0;
        Instance inst = draw_instance(rng, spec, label, spec.user_shift);
        inst.id = next_id++;
        inst.t_ms = static_cast<std::int64_t>(i + 1) * spec.instance_period_ms;
        data.truth[inst.id] = label;
        data.stream.push_back(std::move(inst));
    }

    // Held-out evaluation set at the stream's final distribution.
    const double eval_rate =
        drift_index <= spec.stream_length ? spec.drifted_positive_rate : spec.positive_rate;
    data.eval.reserve(spec.eval_size);
    for (std::size_t i = 0; i < spec.eval_size; ++i) {
        const int label = next_unit(rng) < eval_rate ? 1 : 0;
        Instance inst = draw_instance(rng, spec, label, spec.user_shift);
        inst.id = next_id++;
        data.truth[inst.id] = label;
        data.eval.push_back(std::move(inst));
    }
    return data;
}

} // namespace pals
