#pragma once

#include <cstdint>

namespace pals {

struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;
    std::int64_t fn = 0;

    void add(int true_label, int predicted_label) {
        if (true_label == 1)
            predicted_label == 1 ? ++tp : ++fn;
        else
            predicted_label == 1 ? ++fp : ++tn;
    }
    std::int64_t total() const { return tp + fp + tn + fn; }
};

// tp / (tp + fn); 0 when the positive class has no support (flag reports it).
double recall(const ConfusionCounts& c, bool* zero_support = nullptr);

// tp / (tp + fp); 0 when nothing was predicted positive.
double precision(const ConfusionCounts& c, bool* zero_support = nullptr);

// Harmonic mean 2pr/(p+r), 0 when p + r == 0.
double f_score(double p, double r);
double f_score(const ConfusionCounts& c);

} // namespace pals
