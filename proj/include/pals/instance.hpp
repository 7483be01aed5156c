#pragma once

#include "pals/errors.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace pals {

inline constexpr std::size_t kNumClasses = 2; // non-eating = 0, eating = 1

// SMOTE synthetics get ids at or above this base so they can never collide
// with (or be mistaken for) real data instances.
inline constexpr std::int64_t kSyntheticIdBase = 1'000'000'000;

// Probability distribution over the label space.
struct LabelDistribution {
    std::vector<double> p;

    LabelDistribution() = default;
    explicit LabelDistribution(std::vector<double> probs) : p(std::move(probs)) {}

    static LabelDistribution uniform(std::size_t classes = kNumClasses) {
        return LabelDistribution(std::vector<double>(classes, 1.0 / static_cast<double>(classes)));
    }
    static LabelDistribution one_hot(int label, std::size_t classes = kNumClasses) {
        if (label < 0 || static_cast<std::size_t>(label) >= classes)
            throw UsageError("one_hot: label out of range");
        std::vector<double> probs(classes, 0.0);
        probs[static_cast<std::size_t>(label)] = 1.0;
        return LabelDistribution(std::move(probs));
    }

    bool valid(double tol = 1e-9) const {
        if (p.empty()) return false;
        double sum = 0.0;
        for (double v : p) {
            if (!std::isfinite(v) || v < -tol || v > 1.0 + tol) return false;
            sum += v;
        }
        return std::abs(sum - 1.0) <= tol;
    }

    // Highest-probability label; ties go to the lower index, so an even split
    // predicts non-eating.
    int argmax() const {
        int best = 0;
        for (std::size_t i = 1; i < p.size(); ++i)
            if (p[i] > p[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
        return best;
    }
};

// A feature-space point, optionally carrying ground truth. When true_label is
// set the distribution is clamped one-hot on it. `synthetic` marks SMOTE
// points, which never enter query logs or evaluation sets.
struct Instance {
    std::int64_t id = 0;
    std::vector<double> features;
    std::optional<int> true_label;
    LabelDistribution distribution = LabelDistribution::uniform();
    std::int64_t t_ms = 0;
    bool synthetic = false;
};

inline double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw UsageError("distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

// Euclidean distance between two feature vectors of equal dimension.
inline double pairwise_distance(const std::vector<double>& a, const std::vector<double>& b) {
    return std::sqrt(squared_distance(a, b));
}

} // namespace pals
