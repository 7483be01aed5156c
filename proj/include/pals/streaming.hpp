#pragma once

#include "pals/graph.hpp"
#include "pals/oracle.hpp"

#include <array>
#include <cstdint>
#include <limits>
#include <unordered_set>
#include <vector>

namespace pals {

enum class LambdaPolicy { Static, Adaptive, Best };

// +infinity threshold: no entropy can clear it, so no query fires.
inline constexpr double kLambdaSentinel = std::numeric_limits<double>::infinity();

// Threshold bookkeeping for the current time interval. entropies_desc holds
// one entry per instance seen this interval, kept in non-increasing order so
// the adaptive rule can index the t/T-proportional rank from the top.
struct ThresholdState {
    LambdaPolicy policy = LambdaPolicy::Adaptive;
    double lambda = kLambdaSentinel;
    std::vector<double> entropies_desc;
    std::int64_t interval_ms = 3'600'000;
    std::size_t interval_budget = 0;
    std::int64_t elapsed_ms = 0;

    void insert_entropy(double e);
};

// Adaptive rule: after folding new_entropy into the sorted history E, the
// threshold becomes the floor((t/T) * budget)-th largest entropy seen this
// interval. Index 0 (stream start) gives the sentinel; an index past |E|
// gives the smallest entropy seen. Updates state.lambda and returns it.
double adaptive_lambda(ThresholdState& state, double new_entropy);

// Fixed threshold calibrated on training data: the ceil(budget_ratio * n)-th
// largest training entropy, so about that fraction of training-like
// instances would clear it.
double static_lambda(const std::vector<double>& training_entropies, double budget_ratio);

// Hindsight threshold for one interval: the delta-th largest entropy, so
// exactly min(delta, n) instances clear it. Only meaningful in two-pass
// replay; delta = 0 gives the sentinel.
double best_lambda(const std::vector<double>& entropies_in_interval, std::size_t delta);

// Leave-one-out prediction entropies of a graph's labeled nodes; the
// calibration input for static_lambda.
std::vector<double> training_entropies(const ProximityGraph& model);

struct StreamEvent {
    std::int64_t t_ms = 0;
    std::int64_t instance_id = 0;
    double entropy = 0.0;
    double lambda_at_decision = kLambdaSentinel;
    bool queried = false;
    bool oracle_declined = false; // query fired but no label came back
    std::optional<int> true_label;
    int predicted_label = 0;
};

struct StreamConfig {
    LambdaPolicy policy = LambdaPolicy::Adaptive;
    std::int64_t interval_ms = 3'600'000;
    std::size_t interval_budget = 60;
    double static_lambda_value = kLambdaSentinel; // Static policy only
    // Per-event model updates are capped so one query cannot stall the stream.
    PropagationConfig step_propagation{50, 1e-6};
};

// Single-writer real-time loop: each arriving instance is evaluated exactly
// once, queried iff its entropy clears the current threshold while budget
// remains, and then folded into the model if a label came back. The
// threshold is updated after the decision. Budgets do not roll over:
// each interval restarts with the full allowance.
class StreamSession {
public:
    StreamSession(ProximityGraph model, Oracle& oracle, StreamConfig config);

    // Evaluate one arrival (Static and Adaptive policies).
    const StreamEvent& process(const Instance& x);

    // Evaluate one arrival with an externally computed decision entropy; the
    // Best-policy driver freezes entropies under the interval-start model.
    const StreamEvent& process_with_entropy(const Instance& x, double decision_entropy);

    // Force interval state (Best policy): resets history and budget and pins
    // the threshold for the interval containing t_ms.
    void begin_interval(std::int64_t t_ms, double lambda);

    const ProximityGraph& model() const { return model_; }
    ProximityGraph take_model() { return std::move(model_); }
    const std::vector<StreamEvent>& events() const { return events_; }
    const ThresholdState& threshold() const { return state_; }
    const QueryBudget& budget() const { return budget_; }
    std::size_t queries_issued() const { return queries_issued_; }

private:
    void roll_interval(std::int64_t t_ms);
    const StreamEvent& evaluate(const Instance& x, std::optional<double> frozen_entropy);

    ProximityGraph model_;
    Oracle& oracle_;
    StreamConfig config_;
    ThresholdState state_;
    QueryBudget budget_;
    std::vector<StreamEvent> events_;
    std::unordered_set<std::int64_t> seen_;
    std::int64_t interval_index_ = -1;
    std::size_t queries_issued_ = 0;
    bool interval_pinned_ = false;
};

struct StreamRunResult {
    ProximityGraph model;
    std::vector<StreamEvent> events;
    std::vector<std::size_t> queries_per_interval;
};

// Replays a timestamp-ordered stream through a session. For the Best policy
// this runs two passes per interval: entropies are computed under the
// interval-start model, the threshold is fixed from them, and decisions use
// those frozen entropies.
StreamRunResult run_stream(ProximityGraph seed_model, const std::vector<Instance>& stream,
                           Oracle& oracle, const StreamConfig& config);

// Queried-event counts by quarter of the interval, aggregated over intervals.
std::array<std::size_t, 4> queries_per_quarter(const std::vector<StreamEvent>& events,
                                               std::int64_t interval_ms);

} // namespace pals
