#include "pals/selection.hpp"

#include <algorithm>
#include <cmath>

namespace pals {

double entropy(const LabelDistribution& dist) {
    if (!dist.valid()) throw UsageError("entropy: invalid distribution");
    double h = 0.0;
    for (double p : dist.p)
        if (p > 0.0) h -= p * std::log2(p);
    return h < 0.0 ? 0.0 : h;
}

std::vector<std::int64_t> select_top(std::vector<InformativenessScore> scores,
                                     std::size_t delta) {
    std::sort(scores.begin(), scores.end(),
              [](const InformativenessScore& a, const InformativenessScore& b) {
                  if (a.score != b.score) return a.score > b.score;
                  return a.instance_id < b.instance_id;
              });
    const std::size_t keep = std::min(delta, scores.size());
    std::vector<std::int64_t> ids;
    ids.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) ids.push_back(scores[i].instance_id);
    return ids;
}

std::vector<std::int64_t> uniform_select(const std::vector<std::int64_t>& ids,
                                         std::size_t delta, std::uint64_t seed) {
    if (delta > ids.size()) throw UsageError("uniform_select: delta exceeds candidate count");
    std::mt19937_64 rng(seed);
    std::vector<std::int64_t> pool = ids;
    // Partial Fisher-Yates: the first delta slots are the sample.
    for (std::size_t i = 0; i < delta; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(delta);
    return pool;
}

SmoteResult smote_balance(const std::vector<Instance>& labeled, std::size_t k_neighbors,
                          std::uint64_t seed, std::optional<std::int64_t> first_id) {
    if (k_neighbors < 1) throw UsageError("smote_balance: k_neighbors must be >= 1");
    SmoteResult result;
    result.instances = labeled;

    std::vector<std::size_t> by_class[kNumClasses];
    std::int64_t max_id = 0;
    for (std::size_t i = 0; i < labeled.size(); ++i) {
        if (!labeled[i].true_label)
            throw UsageError("smote_balance: all instances must be labeled");
        by_class[static_cast<std::size_t>(*labeled[i].true_label)].push_back(i);
        max_id = std::max(max_id, labeled[i].id);
    }
    if (first_id) max_id = *first_id - 1;

    const std::size_t n0 = by_class[0].size();
    const std::size_t n1 = by_class[1].size();
    if (n0 == n1) return result;
    const std::size_t minority = n1 < n0 ? 1 : 0;
    const std::size_t need = (n1 < n0 ? n0 - n1 : n1 - n0);
    const auto& pool = by_class[minority];
    if (pool.size() < 2) {
        result.skipped = true;
        return result;
    }

    // Minority-only nearest neighbor lists, ties toward the lower id.
    const std::size_t k = std::min(k_neighbors, pool.size() - 1);
    std::vector<std::vector<std::size_t>> neighbors(pool.size());
    for (std::size_t a = 0; a < pool.size(); ++a) {
        std::vector<std::size_t> order;
        for (std::size_t b = 0; b < pool.size(); ++b)
            if (b != a) order.push_back(b);
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                          order.end(), [&](std::size_t x, std::size_t y) {
                              const double dx = squared_distance(labeled[pool[a]].features,
                                                                 labeled[pool[x]].features);
                              const double dy = squared_distance(labeled[pool[a]].features,
                                                                 labeled[pool[y]].features);
                              if (dx != dy) return dx < dy;
                              return labeled[pool[x]].id < labeled[pool[y]].id;
                          });
        neighbors[a].assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> gap(0.0, 1.0);
    for (std::size_t s = 0; s < need; ++s) {
        const std::size_t a = s % pool.size(); // round-robin over minority points
        std::uniform_int_distribution<std::size_t> pick(0, neighbors[a].size() - 1);
        const std::size_t b = neighbors[a][pick(rng)];
        const double g = gap(rng);

        const Instance& base = labeled[pool[a]];
        const Instance& nn = labeled[pool[b]];
        Instance synth;
        synth.id = ++max_id;
        synth.true_label = static_cast<int>(minority);
        synth.distribution = LabelDistribution::one_hot(static_cast<int>(minority));
        synth.synthetic = true;
        synth.features.resize(base.features.size());
        for (std::size_t d = 0; d < base.features.size(); ++d)
            synth.features[d] = base.features[d] + g * (nn.features[d] - base.features[d]);
        result.instances.push_back(std::move(synth));
        ++result.synthetic_count;
    }
    return result;
}

} // namespace pals
