#pragma once

#include "pals/errors.hpp"
#include "pals/instance.hpp"

#include <cstdint>
#include <optional>
#include <unordered_map>

namespace pals {

// Query allowance. spent is monotone and can never pass total.
class QueryBudget {
public:
    QueryBudget() = default;
    explicit QueryBudget(std::size_t total) : total_(total) {}

    std::size_t total() const { return total_; }
    std::size_t spent() const { return spent_; }
    std::size_t remaining() const { return total_ - spent_; }
    bool exhausted() const { return spent_ >= total_; }

    void spend() {
        if (exhausted()) throw UsageError("QueryBudget: overspend attempt");
        ++spent_;
    }

private:
    std::size_t total_ = 0;
    std::size_t spent_ = 0;
};

// Label source. Returns nullopt when the label cannot be provided (decline or
// timeout); callers treat that as a skipped query.
class Oracle {
public:
    virtual ~Oracle() = default;
    virtual std::optional<int> label_of(const Instance& instance) = 0;

    std::size_t queries_answered() const { return answered_; }
    std::size_t queries_declined() const { return declined_; }

protected:
    void record(bool answered) { answered ? ++answered_ : ++declined_; }

private:
    std::size_t answered_ = 0;
    std::size_t declined_ = 0;
};

// Replays recorded ground truth, either from the instance itself or from an
// id -> label map.
class ReplayOracle : public Oracle {
public:
    ReplayOracle() = default;
    explicit ReplayOracle(std::unordered_map<std::int64_t, int> truth)
        : truth_(std::move(truth)) {}

    std::optional<int> label_of(const Instance& instance) override {
        if (instance.true_label) {
            record(true);
            return instance.true_label;
        }
        auto it = truth_.find(instance.id);
        if (it == truth_.end()) {
            record(false);
            return std::nullopt;
        }
        record(true);
        return it->second;
    }

private:
    std::unordered_map<std::int64_t, int> truth_;
};

} // namespace pals
