#pragma once

#include "pals/features.hpp"
#include "pals/instance.hpp"
#include "pals/sensor.hpp"

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

namespace pals {

// Session manifest: declares the sampling rate, channel names, and which raw
// label strings mean eating vs non-eating. Any other non-empty label in the
// data is an error; empty labels mean unlabeled samples.
struct SessionManifest {
    double sampling_rate_hz = 50.0;
    std::vector<std::string> channel_names;
    std::unordered_set<std::string> eating_labels;
    std::unordered_set<std::string> noneating_labels;

    static SessionManifest load(const std::string& path);
};

// Parses one session CSV (header `t_ms,ch0,...,chK,label`), validating the
// channel count against the manifest, strictly increasing timestamps, and
// that every label string is known. Empty files give an empty stream.
std::vector<SensorRecord> load_session(const std::string& path,
                                       const SessionManifest& manifest);

// A featurized window ready for learning.
struct FeatureRow {
    FeatureVector features;
    int label = kLabelUnknown;
    std::int64_t segment_start_ms = 0;
};

// Full signal-to-feature pipeline for one stream: filter, segment, extract.
std::vector<FeatureRow> featurize(const std::vector<SensorRecord>& stream,
                                  const SessionManifest& manifest, double window_seconds,
                                  double cutoff_hz);

void write_feature_csv(const std::string& path, const std::vector<FeatureRow>& rows);
std::vector<FeatureRow> read_feature_csv(const std::string& path);

// Converts feature rows to instances numbered from first_id; labels are kept
// on the instance (callers hide them from the learner as needed).
std::vector<Instance> rows_to_instances(const std::vector<FeatureRow>& rows,
                                        std::int64_t first_id);

} // namespace pals
