#include "pals/dataset.hpp"

#include "pals/errors.hpp"
#include "pals/kv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace pals {

SessionManifest SessionManifest::load(const std::string& path) {
    const KeyValueFile kv = KeyValueFile::parse_file(path);
    SessionManifest m;
    m.sampling_rate_hz = kv.get_double("sampling_rate_hz");
    if (m.sampling_rate_hz <= 0.0)
        throw ConfigError("manifest: sampling_rate_hz must be positive");
    for (auto& name : kv.get_list("channels")) m.channel_names.push_back(name);
    if (m.channel_names.empty()) throw ConfigError("manifest: channels list is empty");
    for (auto& label : kv.get_list("eating_labels")) m.eating_labels.insert(label);
    for (auto& label : kv.get_list("noneating_labels")) m.noneating_labels.insert(label);
    return m;
}

namespace {

double parse_number(const std::string& field, const std::string& path, int lineno) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(field, &pos);
        if (pos != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw DataError(path + ":" + std::to_string(lineno) + ": malformed number '" + field +
                        "'");
    }
}

} // namespace

std::vector<SensorRecord> load_session(const std::string& path,
                                       const SessionManifest& manifest) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open session file: " + path);

    std::vector<SensorRecord> stream;
    std::string line;
    int lineno = 0;
    const std::size_t channels = manifest.channel_names.size();

    if (!std::getline(in, line)) return stream; // empty file: empty stream
    ++lineno;
    // Header is advisory; the column count is what gets validated.
    if (split(line, ',').size() != channels + 2)
        throw DataError(path + ":1: expected " + std::to_string(channels + 2) +
                        " columns (t_ms," + std::to_string(channels) + " channels,label)");

    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != channels + 2)
            throw DataError(path + ":" + std::to_string(lineno) + ": expected " +
                            std::to_string(channels + 2) + " fields, got " +
                            std::to_string(fields.size()));
        SensorRecord rec;
        rec.t_ms = static_cast<std::int64_t>(parse_number(fields[0], path, lineno));
        if (!stream.empty() && rec.t_ms <= stream.back().t_ms)
            throw DataError(path + ":" + std::to_string(lineno) +
                            ": non-increasing timestamp " + std::to_string(rec.t_ms));
        rec.channels.reserve(channels);
        for (std::size_t c = 0; c < channels; ++c)
            rec.channels.push_back(parse_number(fields[1 + c], path, lineno));
        rec.activity = trim(fields[channels + 1]);
        if (!rec.activity.empty() && !manifest.eating_labels.count(rec.activity) &&
            !manifest.noneating_labels.count(rec.activity))
            throw DataError(path + ":" + std::to_string(lineno) + ": unknown label string '" +
                            rec.activity + "' (not in manifest)");
        stream.push_back(std::move(rec));
    }
    return stream;
}

std::vector<FeatureRow> featurize(const std::vector<SensorRecord>& stream,
                                  const SessionManifest& manifest, double window_seconds,
                                  double cutoff_hz) {
    std::vector<FeatureRow> rows;
    if (stream.empty()) return rows;
    const auto filtered = low_pass_filter(stream, cutoff_hz, manifest.sampling_rate_hz);
    const auto segments = segment(filtered, window_seconds, 0.5, manifest.sampling_rate_hz,
                                  manifest.eating_labels);
    rows.reserve(segments.size());
    for (const auto& seg : segments) {
        FeatureRow row;
        row.features = extract_features(seg, manifest.channel_names);
        row.label = seg.window_label;
        row.segment_start_ms = seg.start_ms;
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_feature_csv(const std::string& path, const std::vector<FeatureRow>& rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write feature file: " + path);
    if (rows.empty()) {
        out << "label,segment_start_ms\n";
        return;
    }
    for (const auto& name : rows.front().features.feature_names) out << name << ",";
    out << "label,segment_start_ms\n";
    for (const auto& row : rows) {
        for (double v : row.features.values) out << format_double(v) << ",";
        if (row.label == kLabelUnknown)
            out << ",";
        else
            out << row.label << ",";
        out << row.segment_start_ms << "\n";
    }
}

std::vector<FeatureRow> read_feature_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open feature file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError("feature file has no header: " + path);
    auto header = split(line, ',');
    if (header.size() < 3)
        throw DataError("feature file header needs features plus label,segment_start_ms: " +
                        path);
    const std::size_t dim = header.size() - 2;
    std::vector<std::string> names(header.begin(), header.end() - 2);

    std::vector<FeatureRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto fields = split(line, ',');
        if (fields.size() != dim + 2)
            throw DataError(path + ":" + std::to_string(lineno) + ": wrong field count");
        FeatureRow row;
        row.features.feature_names = names;
        row.features.values.reserve(dim);
        for (std::size_t i = 0; i < dim; ++i)
            row.features.values.push_back(parse_number(fields[i], path, lineno));
        const std::string label = trim(fields[dim]);
        if (label.empty())
            row.label = kLabelUnknown;
        else if (label == "0")
            row.label = 0;
        else if (label == "1")
            row.label = 1;
        else
            throw DataError(path + ":" + std::to_string(lineno) + ": label must be 0/1/empty");
        row.segment_start_ms =
            static_cast<std::int64_t>(parse_number(fields[dim + 1], path, lineno));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<Instance> rows_to_instances(const std::vector<FeatureRow>& rows,
                                        std::int64_t first_id) {
    std::vector<Instance> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        Instance inst;
        inst.id = first_id++;
        inst.features = row.features.values;
        inst.t_ms = row.segment_start_ms;
        if (row.label != kLabelUnknown) {
            inst.true_label = row.label;
            inst.distribution = LabelDistribution::one_hot(row.label);
        }
        out.push_back(std::move(inst));
    }
    return out;
}

} // namespace pals
