#include "pals/streaming.hpp"

#include "pals/selection.hpp"

#include <algorithm>
#include <cmath>

namespace pals {

void ThresholdState::insert_entropy(double e) {
    auto pos = std::lower_bound(entropies_desc.begin(), entropies_desc.end(), e,
                                [](double a, double b) { return a > b; });
    entropies_desc.insert(pos, e);
}

double adaptive_lambda(ThresholdState& state, double new_entropy) {
    if (state.interval_ms <= 0) throw ConfigError("adaptive_lambda: interval must be positive");
    if (state.elapsed_ms < 0 || state.elapsed_ms > state.interval_ms)
        throw UsageError("adaptive_lambda: elapsed time outside interval");
    state.insert_entropy(new_entropy);

    const double fraction = static_cast<double>(state.elapsed_ms) /
                            static_cast<double>(state.interval_ms);
    const auto index = static_cast<std::size_t>(
        std::floor(fraction * static_cast<double>(state.interval_budget)));
    if (index == 0)
        state.lambda = kLambdaSentinel;
    else if (index > state.entropies_desc.size())
        state.lambda = state.entropies_desc.back();
    else
        state.lambda = state.entropies_desc[index - 1];
    return state.lambda;
}

double static_lambda(const std::vector<double>& training_entropies, double budget_ratio) {
    if (training_entropies.empty())
        throw ConfigError("static_lambda: no training entropies to calibrate on");
    if (!(budget_ratio > 0.0) || budget_ratio > 1.0)
        throw ConfigError("static_lambda: budget_ratio must be in (0, 1]");
    std::vector<double> sorted = training_entropies;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const auto rank = static_cast<std::size_t>(
        std::ceil(budget_ratio * static_cast<double>(sorted.size())));
    return sorted[std::min(rank, sorted.size()) - 1];
}

double best_lambda(const std::vector<double>& entropies_in_interval, std::size_t delta) {
    if (delta == 0 || entropies_in_interval.empty()) return kLambdaSentinel;
    std::vector<double> sorted = entropies_in_interval;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    return sorted[std::min(delta, sorted.size()) - 1];
}

std::vector<double> training_entropies(const ProximityGraph& model) {
    std::vector<double> out;
    for (std::size_t i = 0; i < model.size(); ++i)
        if (model.node(i).true_label) out.push_back(entropy(model.loo_distribution(i)));
    return out;
}

// ---------------------------------------------------------------------------

StreamSession::StreamSession(ProximityGraph model, Oracle& oracle, StreamConfig config)
    : model_(std::move(model)), oracle_(oracle), config_(config) {
    if (model_.empty())
        throw UsageError("StreamSession: model must be seeded with training data");
    if (config_.interval_ms <= 0) throw ConfigError("StreamSession: interval must be positive");
    if (config_.policy == LambdaPolicy::Static &&
        !(config_.static_lambda_value >= 0.0))
        throw ConfigError("StreamSession: static policy needs a calibrated lambda");
    state_.policy = config_.policy;
    state_.interval_ms = config_.interval_ms;
    state_.interval_budget = config_.interval_budget;
}

void StreamSession::roll_interval(std::int64_t t_ms) {
    const std::int64_t index = t_ms / config_.interval_ms;
    if (index == interval_index_) {
        state_.elapsed_ms = t_ms - interval_index_ * config_.interval_ms;
        return;
    }
    if (index < interval_index_)
        throw UsageError("StreamSession: stream must arrive in timestamp order");
    interval_index_ = index;
    state_.entropies_desc.clear();
    state_.elapsed_ms = t_ms - index * config_.interval_ms;
    budget_ = QueryBudget(config_.interval_budget);
    if (!interval_pinned_) {
        state_.lambda = config_.policy == LambdaPolicy::Static ? config_.static_lambda_value
                                                               : kLambdaSentinel;
    }
    interval_pinned_ = false;
}

void StreamSession::begin_interval(std::int64_t t_ms, double lambda) {
    if (config_.policy != LambdaPolicy::Best)
        throw UsageError("begin_interval: only the Best policy pins interval thresholds");
    interval_pinned_ = true;
    roll_interval(t_ms);
    state_.lambda = lambda;
}

const StreamEvent& StreamSession::process(const Instance& x) {
    if (config_.policy == LambdaPolicy::Best)
        throw UsageError("StreamSession: Best policy requires two-pass replay via run_stream");
    roll_interval(x.t_ms);
    return evaluate(x, std::nullopt);
}

const StreamEvent& StreamSession::process_with_entropy(const Instance& x,
                                                       double decision_entropy) {
    roll_interval(x.t_ms);
    return evaluate(x, decision_entropy);
}

const StreamEvent& StreamSession::evaluate(const Instance& x,
                                           std::optional<double> frozen_entropy) {
    if (!seen_.insert(x.id).second)
        throw UsageError("StreamSession: instance " + std::to_string(x.id) +
                         " was already evaluated");

    const auto [predicted, dist] = model_.predict(x);
    const double decision_entropy = frozen_entropy ? *frozen_entropy : entropy(dist);

    StreamEvent event;
    event.t_ms = x.t_ms;
    event.instance_id = x.id;
    event.entropy = decision_entropy;
    event.lambda_at_decision = state_.lambda;
    event.predicted_label = predicted;

    if (decision_entropy >= state_.lambda && !budget_.exhausted()) {
        const auto answer = oracle_.label_of(x);
        if (answer) {
            budget_.spend();
            ++queries_issued_;
            event.queried = true;
            event.true_label = answer;
            Instance queried = x;
            queried.true_label.reset();
            model_.add_labeled_node(queried, *answer);
            model_.propagate(config_.step_propagation);
        } else {
            // Declined or timed out: no budget spent, instance is dropped.
            event.oracle_declined = true;
        }
    }

    // Threshold moves only after the decision.
    if (config_.policy == LambdaPolicy::Adaptive) {
        adaptive_lambda(state_, decision_entropy);
    } else {
        state_.insert_entropy(decision_entropy);
    }

    events_.push_back(event);
    return events_.back();
}

// ---------------------------------------------------------------------------

StreamRunResult run_stream(ProximityGraph seed_model, const std::vector<Instance>& stream,
                           Oracle& oracle, const StreamConfig& config) {
    for (std::size_t i = 1; i < stream.size(); ++i)
        if (stream[i].t_ms < stream[i - 1].t_ms)
            throw DataError("run_stream: stream is not in timestamp order");

    StreamSession session(std::move(seed_model), oracle, config);

    if (config.policy != LambdaPolicy::Best) {
        for (const auto& x : stream) session.process(x);
    } else {
        std::size_t begin = 0;
        while (begin < stream.size()) {
            const std::int64_t interval = stream[begin].t_ms / config.interval_ms;
            std::size_t end = begin;
            while (end < stream.size() && stream[end].t_ms / config.interval_ms == interval)
                ++end;
            // Pass 1: entropies under the interval-start model.
            std::vector<double> frozen;
            frozen.reserve(end - begin);
            for (std::size_t i = begin; i < end; ++i)
                frozen.push_back(entropy(session.model().predict(stream[i]).second));
            const double lambda = best_lambda(frozen, config.interval_budget);
            session.begin_interval(stream[begin].t_ms, lambda);
            // Pass 2: decisions against the frozen entropies.
            for (std::size_t i = begin; i < end; ++i)
                session.process_with_entropy(stream[i], frozen[i - begin]);
            begin = end;
        }
    }

    StreamRunResult result;
    result.events = session.events();
    std::int64_t last_interval = -1;
    for (const auto& event : result.events) {
        const std::int64_t interval = event.t_ms / config.interval_ms;
        while (last_interval < interval) {
            result.queries_per_interval.push_back(0);
            ++last_interval;
        }
        if (event.queried) ++result.queries_per_interval.back();
    }
    result.model = session.take_model();
    return result;
}

std::array<std::size_t, 4> queries_per_quarter(const std::vector<StreamEvent>& events,
                                               std::int64_t interval_ms) {
    std::array<std::size_t, 4> counts{0, 0, 0, 0};
    for (const auto& event : events) {
        if (!event.queried) continue;
        const std::int64_t within = event.t_ms % interval_ms;
        auto quarter = static_cast<std::size_t>((within * 4) / interval_ms);
        counts[std::min<std::size_t>(quarter, 3)] += 1;
    }
    return counts;
}

} // namespace pals
