#pragma once

#include "pals/graph.hpp"
#include "pals/oracle.hpp"
#include "pals/selection.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace pals {

enum class SelectionStrategy { Entropy, Uniform };

struct OfflineConfig {
    std::size_t budget = 0;     // total queries available
    std::size_t iterations = 1; // budget is split evenly across these
    SelectionStrategy selection = SelectionStrategy::Entropy;
    KernelConfig kernel;
    PropagationConfig propagation;
    std::size_t smote_k = 5;
    bool smote_enabled = true;
    std::uint64_t seed = 0;

    std::size_t per_iteration() const { return budget / iterations; }
    void validate(std::size_t unlabeled_count) const;
};

struct QueryLogEntry {
    std::size_t iteration = 0;
    std::int64_t instance_id = 0;
    double entropy = 0.0; // informativeness at selection time
    int returned_label = kLabelUnknown;
};

struct OfflineResult {
    ProximityGraph model;
    std::vector<QueryLogEntry> query_log;
    bool aborted = false;          // oracle failed mid-run; log is partial
    bool smote_skipped = false;    // some rebalance pass had < 2 minority points
    std::size_t bootstrap_iterations = 0; // iterations that used diversity sampling
};

// Called with the freshly propagated model after each iteration's update.
using IterationObserver = std::function<void(std::size_t iteration, const ProximityGraph&)>;

// Pool-based active learning: build the proximity graph over the whole pool,
// then per iteration propagate, score unlabeled instances by prediction
// entropy, query the top delta, rebalance the labeled pool with SMOTE, and
// update the model. While the labeled pool is missing a class, selection
// falls back to farthest-point sampling, since entropy carries no signal
// under a vacuous model.
OfflineResult run_offline(const std::vector<Instance>& labeled,
                          const std::vector<Instance>& unlabeled, Oracle& oracle,
                          const OfflineConfig& config,
                          const IterationObserver& on_iteration = nullptr);

// Current inferred distribution of every unlabeled node.
std::vector<std::pair<std::int64_t, LabelDistribution>>
infer_unlabeled(const ProximityGraph& graph);

// Greedy max-min diversity pick used for cold starts: each pick maximizes the
// minimum standardized distance to the already-covered set. With no cover at
// all, picking starts from the point farthest from the pool centroid.
std::vector<std::int64_t> farthest_point_sample(const std::vector<Instance>& candidates,
                                                const std::vector<Instance>& covered,
                                                std::size_t count,
                                                const Standardizer& standardizer);

} // namespace pals
