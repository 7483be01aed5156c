#pragma once

#include "pals/sensor.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace pals {

struct FeatureVector {
    std::vector<double> values;
    std::vector<std::string> feature_names;

    std::size_t size() const { return values.size(); }
};

// The per-channel feature set, in the fixed order they appear in a
// FeatureVector. Conventions:
//  - variance is the population variance
//  - skew/kurtosis are moment ratios, defined as 0 on zero-variance windows;
//    kurtosis is excess kurtosis (0 for a normal distribution)
//  - a peak is a strict local maximum of the raw channel; distances are in
//    samples; with fewer than 2 peaks every peak-derived value is 0
//  - zero crossings count sign changes of (value - window mean), exact zeros
//    inheriting the preceding sign
inline constexpr const char* kChannelFeatureNames[] = {
    "median", "mean", "max", "min", "p2p", "skew", "kurtosis", "variance",
    "peaks_count", "mean_peaks_amplitude", "max_peaks_amplitude",
    "mean_peaks_distance", "min_peaks_distance", "std_peaks_distance",
    "zero_crossings",
};
inline constexpr std::size_t kFeaturesPerChannel = 15;

// Extracts the 15 features above from every channel, concatenated in channel
// order. channel_names supplies the name prefix; when empty, ch0..chK is used.
FeatureVector extract_features(const SignalSegment& segment,
                               const std::vector<std::string>& channel_names = {});

struct FeatureSelectionMask {
    std::vector<std::size_t> kept_indices; // sorted ascending
    std::vector<double> scores;            // one chi^2 score per original feature
    bool degenerate = false;               // all labels identical
};

// Chi-square scores of (min-max scaled) features against the binary label;
// keeps the `keep` best, ties broken toward the lower feature index.
FeatureSelectionMask chi2_select(const std::vector<FeatureVector>& features,
                                 const std::vector<int>& labels, std::size_t keep);

FeatureVector apply_mask(const FeatureVector& fv, const FeatureSelectionMask& mask);

} // namespace pals
