#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace pals {

// Flat "key = value" text document. One pair per line, '#' starts a comment.
// Used for session manifests, run configs, and config snapshots in run
// directories. Keys keep insertion order when written back so snapshots are
// reproducible.
class KeyValueFile {
public:
    KeyValueFile() = default;

    static KeyValueFile parse_file(const std::string& path);
    static KeyValueFile parse_text(const std::string& text);

    bool has(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    // Comma-separated list value; empty string gives an empty list.
    std::vector<std::string> get_list(const std::string& key) const;

    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value);
    void set(const std::string& key, std::int64_t value);

    std::string to_text() const;
    void write_file(const std::string& path) const;

    const std::vector<std::string>& keys() const { return order_; }

private:
    std::map<std::string, std::string> values_;
    std::vector<std::string> order_;
};

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);

// Locale-independent numeric formatting used by every CSV/report writer so
// that identical runs produce byte-identical files.
std::string format_double(double v);

} // namespace pals
