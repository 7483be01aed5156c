#include "pals/features.hpp"

#include "pals/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pals {

namespace {

double median_of(std::vector<double> v) {
    const std::size_t n = v.size();
    auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (n % 2 == 1) return *mid;
    double hi = *mid;
    double lo = *std::max_element(v.begin(), mid);
    return (lo + hi) / 2.0;
}

void channel_features(const std::vector<double>& x, std::vector<double>& out) {
    const auto n = static_cast<double>(x.size());
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double maxv = *std::max_element(x.begin(), x.end());
    const double minv = *std::min_element(x.begin(), x.end());

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    const double skew = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
    const double kurtosis = m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : 0.0;

    // Strict local maxima on the raw channel.
    std::vector<std::size_t> peak_idx;
    std::vector<double> peak_val;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        if (x[i] > x[i - 1] && x[i] > x[i + 1]) {
            peak_idx.push_back(i);
            peak_val.push_back(x[i]);
        }
    }
    double mean_amp = 0.0, max_amp = 0.0;
    double mean_dist = 0.0, min_dist = 0.0, std_dist = 0.0;
    if (peak_idx.size() >= 2) {
        mean_amp = std::accumulate(peak_val.begin(), peak_val.end(), 0.0) /
                   static_cast<double>(peak_val.size());
        max_amp = *std::max_element(peak_val.begin(), peak_val.end());
        std::vector<double> dist;
        for (std::size_t i = 1; i < peak_idx.size(); ++i)
            dist.push_back(static_cast<double>(peak_idx[i] - peak_idx[i - 1]));
        mean_dist = std::accumulate(dist.begin(), dist.end(), 0.0) /
                    static_cast<double>(dist.size());
        min_dist = *std::min_element(dist.begin(), dist.end());
        double var = 0.0;
        for (double d : dist) var += (d - mean_dist) * (d - mean_dist);
        std_dist = std::sqrt(var / static_cast<double>(dist.size()));
    }

    // Sign changes of the mean-removed signal; exact zeros keep the sign of
    // the sample before them.
    int crossings = 0;
    int prev = 0;
    for (double v : x) {
        const double c = v - mean;
        const int s = c > 0.0 ? 1 : (c < 0.0 ? -1 : prev);
        if (prev != 0 && s != prev) ++crossings;
        prev = s;
    }

    out.push_back(median_of(x));
    out.push_back(mean);
    out.push_back(maxv);
    out.push_back(minv);
    out.push_back(maxv - minv);
    out.push_back(skew);
    out.push_back(kurtosis);
    out.push_back(m2);
    out.push_back(static_cast<double>(peak_idx.size()));
    out.push_back(mean_amp);
    out.push_back(max_amp);
    out.push_back(mean_dist);
    out.push_back(min_dist);
    out.push_back(std_dist);
    out.push_back(static_cast<double>(crossings));
}

} // namespace

FeatureVector extract_features(const SignalSegment& segment,
                               const std::vector<std::string>& channel_names) {
    if (segment.samples.empty()) throw UsageError("extract_features: empty segment");
    const std::size_t channels = segment.samples.front().channels.size();
    if (channels == 0) throw UsageError("extract_features: segment has no channels");
    if (!channel_names.empty() && channel_names.size() != channels)
        throw UsageError("extract_features: channel name count mismatch");

    FeatureVector fv;
    fv.values.reserve(channels * kFeaturesPerChannel);
    fv.feature_names.reserve(channels * kFeaturesPerChannel);

    std::vector<double> x(segment.samples.size());
    for (std::size_t c = 0; c < channels; ++c) {
        for (std::size_t i = 0; i < segment.samples.size(); ++i) {
            if (segment.samples[i].channels.size() != channels)
                throw DataError("extract_features: inconsistent channel count within segment");
            x[i] = segment.samples[i].channels[c];
        }
        channel_features(x, fv.values);
        const std::string prefix =
            channel_names.empty() ? "ch" + std::to_string(c) : channel_names[c];
        for (std::size_t f = 0; f < kFeaturesPerChannel; ++f)
            fv.feature_names.push_back(prefix + "_" + kChannelFeatureNames[f]);
    }
    return fv;
}

FeatureSelectionMask chi2_select(const std::vector<FeatureVector>& features,
                                 const std::vector<int>& labels, std::size_t keep) {
    if (features.empty()) throw UsageError("chi2_select: no feature vectors");
    if (labels.size() != features.size())
        throw UsageError("chi2_select: labels and features differ in length");
    if (keep < 1) throw UsageError("chi2_select: keep must be >= 1");
    const std::size_t dim = features.front().size();
    for (const auto& fv : features)
        if (fv.size() != dim) throw UsageError("chi2_select: inconsistent feature dimension");
    keep = std::min(keep, dim);

    FeatureSelectionMask mask;
    mask.scores.assign(dim, 0.0);

    std::size_t positives = 0;
    for (int y : labels) {
        if (y != 0 && y != 1) throw UsageError("chi2_select: labels must be binary");
        positives += static_cast<std::size_t>(y);
    }
    const std::size_t n = labels.size();

    if (positives == 0 || positives == n) {
        // Single-class input: independence is untestable, fall back to the
        // leading indices with zero scores and let the caller know.
        mask.degenerate = true;
        for (std::size_t i = 0; i < keep; ++i) mask.kept_indices.push_back(i);
        return mask;
    }

    const double p1 = static_cast<double>(positives) / static_cast<double>(n);
    const double p0 = 1.0 - p1;

    for (std::size_t f = 0; f < dim; ++f) {
        double lo = features[0].values[f];
        double hi = lo;
        for (const auto& fv : features) {
            lo = std::min(lo, fv.values[f]);
            hi = std::max(hi, fv.values[f]);
        }
        const double range = hi - lo;
        double obs0 = 0.0, obs1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double scaled = range > 0.0 ? (features[i].values[f] - lo) / range : 0.0;
            (labels[i] == 1 ? obs1 : obs0) += scaled;
        }
        const double total = obs0 + obs1;
        if (total <= 0.0) continue; // constant feature scales to all zeros
        const double exp0 = p0 * total;
        const double exp1 = p1 * total;
        mask.scores[f] = (obs0 - exp0) * (obs0 - exp0) / exp0 +
                         (obs1 - exp1) * (obs1 - exp1) / exp1;
    }

    std::vector<std::size_t> order(dim);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (mask.scores[a] != mask.scores[b]) return mask.scores[a] > mask.scores[b];
        return a < b;
    });
    mask.kept_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep));
    std::sort(mask.kept_indices.begin(), mask.kept_indices.end());
    return mask;
}

FeatureVector apply_mask(const FeatureVector& fv, const FeatureSelectionMask& mask) {
    if (mask.kept_indices.empty()) throw UsageError("apply_mask: empty mask");
    FeatureVector out;
    out.values.reserve(mask.kept_indices.size());
    out.feature_names.reserve(mask.kept_indices.size());
    for (std::size_t idx : mask.kept_indices) {
        if (idx >= fv.size()) throw UsageError("apply_mask: index out of bounds");
        out.values.push_back(fv.values[idx]);
        if (idx < fv.feature_names.size()) out.feature_names.push_back(fv.feature_names[idx]);
    }
    return out;
}

} // namespace pals
