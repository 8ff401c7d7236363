#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace aegis::eval {

struct GroundTruthLabel {
    std::string url;
    bool is_positive = false;
};

struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t tn = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;

    std::int64_t total() const { return tp + tn + fp + fn; }
    ConfusionCounts& operator+=(const ConfusionCounts& other);
    bool operator==(const ConfusionCounts&) const = default;
};

// Exact ratio of two non-negative integers. den == 0 encodes UNDEFINED
// (e.g. precision with zero predicted positives).
struct Ratio {
    std::int64_t num = 0;
    std::int64_t den = 0;

    bool defined() const { return den != 0; }
    bool is_exactly_one() const { return defined() && num == den; }
    double value() const { return defined() ? static_cast<double>(num) / den : 0.0; }

    // Decimal string with `digits` places, truncated toward zero. This is the
    // table-display convention: 20/22 prints as 0.90.
    std::string truncated(int digits) const;
    // Decimal string with `digits` places, half-up.
    std::string rounded_half_up(int digits) const;
};

struct MetricsReport {
    ConfusionCounts counts;
    Ratio accuracy;
    Ratio precision;  // undefined when tp+fp == 0
    Ratio recall;     // undefined when tp+fn == 0
    std::string dataset_name;
};

struct MissingPrediction {
    std::vector<std::string> urls;
};

// Standard 2x2 tally. Every labeled url must have a prediction; the offending
// urls are returned otherwise.
std::variant<ConfusionCounts, MissingPrediction> confusion(
    const std::map<std::string, bool>& predictions,
    const std::vector<GroundTruthLabel>& labels);

MetricsReport metrics(const ConfusionCounts& counts, std::string dataset_name = "");

// CSV with header `url,is_positive`, is_positive in {0,1}. Throws on
// malformed rows or duplicate urls.
std::vector<GroundTruthLabel> load_labels_csv(const std::filesystem::path& path);
std::vector<GroundTruthLabel> parse_labels_csv(const std::string& content,
                                               const std::string& origin);

std::string render_table(const std::vector<MetricsReport>& rows);
std::string to_json(const MetricsReport& report);

}  // namespace aegis::eval
