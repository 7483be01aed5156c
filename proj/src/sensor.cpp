#include "pals/sensor.hpp"

#include "pals/errors.hpp"

#include <cmath>
#include <numbers>

namespace pals {

std::vector<SensorRecord> low_pass_filter(const std::vector<SensorRecord>& stream,
                                          double cutoff_hz, double sampling_rate_hz) {
    if (sampling_rate_hz <= 0.0)
        throw ConfigError("low_pass_filter: sampling rate must be positive");
    if (!(cutoff_hz > 0.0) || !(cutoff_hz < sampling_rate_hz / 2.0))
        throw ConfigError("low_pass_filter: cutoff must be in (0, sampling_rate/2), got " +
                          std::to_string(cutoff_hz));
    if (stream.empty()) return {};

    const double dt = 1.0 / sampling_rate_hz;
    const double rc = 1.0 / (2.0 * std::numbers::pi * cutoff_hz);
    const double alpha = dt / (rc + dt);

    std::vector<SensorRecord> out = stream;
    const std::size_t channels = stream.front().channels.size();
    for (std::size_t c = 0; c < channels; ++c) {
        double y = stream.front().channels[c];
        out.front().channels[c] = y;
        for (std::size_t i = 1; i < stream.size(); ++i) {
            y += alpha * (stream[i].channels[c] - y);
            out[i].channels[c] = y;
        }
    }
    return out;
}

std::vector<SignalSegment> segment(const std::vector<SensorRecord>& stream,
                                   double window_seconds, double overlap_fraction,
                                   double sampling_rate_hz,
                                   const std::unordered_set<std::string>& eating_labels) {
    if (overlap_fraction != 0.5)
        throw ConfigError("segment: only 50% overlap is supported");
    if (window_seconds <= 0.0 || sampling_rate_hz <= 0.0)
        throw ConfigError("segment: window_seconds and sampling_rate must be positive");

    const auto window = static_cast<std::size_t>(std::llround(window_seconds * sampling_rate_hz));
    if (window < 2 || window % 2 != 0)
        throw ConfigError("segment: window must span an even number of samples >= 2, got " +
                          std::to_string(window));
    const std::size_t stride = window / 2;

    std::vector<SignalSegment> segments;
    if (stream.size() < window) return segments;

    for (std::size_t start = 0; start + window <= stream.size(); start += stride) {
        SignalSegment seg;
        seg.samples.assign(stream.begin() + static_cast<std::ptrdiff_t>(start),
                           stream.begin() + static_cast<std::ptrdiff_t>(start + window));
        seg.start_ms = seg.samples.front().t_ms;

        std::size_t labeled = 0;
        std::size_t eating = 0;
        for (const auto& rec : seg.samples) {
            if (rec.activity.empty()) continue;
            ++labeled;
            if (eating_labels.count(rec.activity)) ++eating;
        }
        if (labeled == 0) {
            seg.window_label = kLabelUnknown;
        } else {
            seg.window_label = (eating * 2 > window) ? kEating : kNonEating;
        }
        segments.push_back(std::move(seg));
    }
    return segments;
}

} // namespace pals
