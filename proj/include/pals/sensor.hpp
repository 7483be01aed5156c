#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

namespace pals {

// One multichannel inertial sample. `activity` is the raw label string from
// the recording ("" = unlabeled); the session manifest decides which strings
// count as eating.
struct SensorRecord {
    std::int64_t t_ms = 0;
    std::vector<double> channels;
    std::string activity;
};

inline constexpr int kLabelUnknown = -1;
inline constexpr int kNonEating = 0;
inline constexpr int kEating = 1;

// Fixed-length window of consecutive samples plus its majority-vote binary
// label (kLabelUnknown when no sample in the window is labeled).
struct SignalSegment {
    std::vector<SensorRecord> samples;
    int window_label = kLabelUnknown;
    std::int64_t start_ms = 0;
};

// First-order single-pole low-pass, each channel filtered independently.
// y[0] = x[0], y[n] = y[n-1] + a*(x[n] - y[n-1]) with a = dt/(RC+dt),
// RC = 1/(2*pi*cutoff_hz). Linear in the input and exact on DC signals.
std::vector<SensorRecord> low_pass_filter(const std::vector<SensorRecord>& stream,
                                          double cutoff_hz, double sampling_rate_hz);

// Splits a stream into windows of W = window_seconds * sampling_rate samples
// advancing by W/2 (the only supported overlap is 0.5). The trailing partial
// window is discarded. A window is labeled eating when strictly more than
// half of its samples carry an eating-class activity string; ties and
// non-eating majorities give non-eating; a window with no labeled sample at
// all stays unknown.
std::vector<SignalSegment> segment(const std::vector<SensorRecord>& stream,
                                   double window_seconds, double overlap_fraction,
                                   double sampling_rate_hz,
                                   const std::unordered_set<std::string>& eating_labels);

} // namespace pals
