#include "aegis/eval_harness.hpp"

#include "aegis/util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace aegis::eval {

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& other) {
    tp += other.tp;
    tn += other.tn;
    fp += other.fp;
    fn += other.fn;
    return *this;
}

namespace {

std::int64_t pow10(int digits) {
    std::int64_t p = 1;
    while (digits-- > 0) p *= 10;
    return p;
}

std::string format_scaled(std::int64_t scaled, int digits) {
    const std::int64_t scale = pow10(digits);
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%lld.%0*lld", static_cast<long long>(scaled / scale), digits,
                  static_cast<long long>(scaled % scale));
    return buf;
}

}  // namespace

std::string Ratio::truncated(int digits) const {
    if (!defined()) return "UNDEFINED";
    const std::int64_t scaled = num * pow10(digits) / den;
    return format_scaled(scaled, digits);
}

std::string Ratio::rounded_half_up(int digits) const {
    if (!defined()) return "UNDEFINED";
    const std::int64_t raw = num * pow10(digits);
    std::int64_t scaled = raw / den;
    if (2 * (raw % den) >= den) ++scaled;
    return format_scaled(scaled, digits);
}

std::variant<ConfusionCounts, MissingPrediction> confusion(
    const std::map<std::string, bool>& predictions, const std::vector<GroundTruthLabel>& labels) {
    MissingPrediction missing;
    ConfusionCounts counts;
    for (const auto& label : labels) {
        const auto it = predictions.find(label.url);
        if (it == predictions.end()) {
            missing.urls.push_back(label.url);
            continue;
        }
        const bool predicted = it->second;
        if (label.is_positive && predicted)
            ++counts.tp;
        else if (label.is_positive && !predicted)
            ++counts.fn;
        else if (!label.is_positive && predicted)
            ++counts.fp;
        else
            ++counts.tn;
    }
    if (!missing.urls.empty()) return missing;
    return counts;
}

MetricsReport metrics(const ConfusionCounts& counts, std::string dataset_name) {
    MetricsReport report;
    report.counts = counts;
    report.dataset_name = std::move(dataset_name);
    const std::int64_t total = counts.total();
    report.accuracy = Ratio{counts.tp + counts.tn, total};
    report.precision = (counts.tp + counts.fp > 0) ? Ratio{counts.tp, counts.tp + counts.fp}
                                                   : Ratio{0, 0};
    report.recall = (counts.tp + counts.fn > 0) ? Ratio{counts.tp, counts.tp + counts.fn}
                                                : Ratio{0, 0};
    return report;
}

std::vector<GroundTruthLabel> parse_labels_csv(const std::string& content,
                                               const std::string& origin) {
    std::vector<GroundTruthLabel> labels;
    std::set<std::string> seen;
    const auto lines = util::split(content, '\n');
    bool header_seen = false;
    for (size_t i = 0; i < lines.size(); ++i) {
        std::string line = lines[i];
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (util::trim(line).empty()) continue;
        if (!header_seen) {
            header_seen = true;
            const auto header = util::split(util::to_lower(line), ',');
            if (header.size() < 2 || util::trim(header[0]) != "url" ||
                util::trim(header[1]) != "is_positive")
                throw std::runtime_error(origin + ": expected header `url,is_positive`, got: " +
                                         line);
            continue;
        }
        // url may contain commas only if the flag is the final field
        const size_t comma = line.rfind(',');
        if (comma == std::string::npos)
            throw std::runtime_error(origin + " line " + std::to_string(i + 1) +
                                     ": missing is_positive field");
        const std::string url = util::trim(line.substr(0, comma));
        const std::string flag = util::trim(line.substr(comma + 1));
        if (url.empty() || (flag != "0" && flag != "1"))
            throw std::runtime_error(origin + " line " + std::to_string(i + 1) +
                                     ": malformed row: " + line);
        if (!seen.insert(url).second)
            throw std::runtime_error(origin + ": duplicate url: " + url);
        labels.push_back({url, flag == "1"});
    }
    return labels;
}

std::vector<GroundTruthLabel> load_labels_csv(const std::filesystem::path& path) {
    return parse_labels_csv(util::read_file(path), path.string());
}

std::string render_table(const std::vector<MetricsReport>& rows) {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof(line), "%-14s %12s %5s %5s %5s %5s %9s %10s %7s\n", "Dataset",
                  "Total Papers", "TP", "TN", "FP", "FN", "Accuracy", "Precision", "Recall");
    out += line;
    out += std::string(78, '-') + "\n";
    for (const auto& r : rows) {
        std::snprintf(line, sizeof(line), "%-14s %12lld %5lld %5lld %5lld %5lld %9s %10s %7s\n",
                      r.dataset_name.empty() ? "-" : r.dataset_name.c_str(),
                      static_cast<long long>(r.counts.total()),
                      static_cast<long long>(r.counts.tp), static_cast<long long>(r.counts.tn),
                      static_cast<long long>(r.counts.fp), static_cast<long long>(r.counts.fn),
                      r.accuracy.truncated(2).c_str(), r.precision.truncated(2).c_str(),
                      r.recall.truncated(2).c_str());
        out += line;
    }
    return out;
}

std::string to_json(const MetricsReport& report) {
    nlohmann::json j;
    j["dataset"] = report.dataset_name;
    j["counts"] = {{"tp", report.counts.tp},
                   {"tn", report.counts.tn},
                   {"fp", report.counts.fp},
                   {"fn", report.counts.fn},
                   {"total", report.counts.total()}};
    auto ratio_json = [](const Ratio& r) -> nlohmann::json {
        if (!r.defined()) return nullptr;
        return {{"num", r.num}, {"den", r.den}, {"display", r.truncated(2)}, {"value", r.value()}};
    };
    j["accuracy"] = ratio_json(report.accuracy);
    j["precision"] = ratio_json(report.precision);
    j["recall"] = ratio_json(report.recall);
    return j.dump(2);
}

}  // namespace aegis::eval
