#include "pals/metrics.hpp"

#include "pals/errors.hpp"

namespace pals {

double recall(const ConfusionCounts& c, bool* zero_support) {
    if (zero_support) *zero_support = false;
    const auto denom = c.tp + c.fn;
    if (denom <= 0) {
        if (zero_support) *zero_support = true;
        return 0.0;
    }
    return static_cast<double>(c.tp) / static_cast<double>(denom);
}

double precision(const ConfusionCounts& c, bool* zero_support) {
    if (zero_support) *zero_support = false;
    const auto denom = c.tp + c.fp;
    if (denom <= 0) {
        if (zero_support) *zero_support = true;
        return 0.0;
    }
    return static_cast<double>(c.tp) / static_cast<double>(denom);
}

double f_score(double p, double r) {
    if (p < 0.0 || p > 1.0 || r < 0.0 || r > 1.0)
        throw UsageError("f_score: precision and recall must be in [0,1]");
    if (p + r <= 0.0) return 0.0;
    return 2.0 * p * r / (p + r);
}

double f_score(const ConfusionCounts& c) { return f_score(precision(c), recall(c)); }

} // namespace pals
