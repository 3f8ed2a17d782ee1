#include "xlab/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "xlab/errors.hpp"

namespace xlab {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void SweepReport::sort_canonical() {
    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        return std::tie(a.experiment, a.condition, a.model, a.trial, a.metric) <
               std::tie(b.experiment, b.condition, b.model, b.trial, b.metric);
    });
}

void SweepReport::validate() const {
    std::set<std::tuple<std::string, double, std::string, int, std::string>> seen;
    for (const auto& r : rows) {
        if (!std::isfinite(r.value))
            throw NumericError("report: non-finite value for " + r.experiment + "/" + r.model +
                               "/" + r.metric);
        if (!seen.insert({r.experiment, r.condition, r.model, r.trial, r.metric}).second)
            throw ParameterError("report: duplicate key " + r.experiment + "," +
                                 format_double(r.condition) + "," + r.model + "," +
                                 std::to_string(r.trial) + "," + r.metric);
    }
}

std::string SweepReport::csv() const {
    std::string out = "experiment,condition,model,trial,metric,value\n";
    for (const auto& r : rows) {
        out += r.experiment;
        out += ',';
        out += format_double(r.condition);
        out += ',';
        out += r.model;
        out += ',';
        out += std::to_string(r.trial);
        out += ',';
        out += r.metric;
        out += ',';
        out += format_double(r.value);
        out += '\n';
    }
    return out;
}

std::string SweepReport::metadata_json() const {
    nlohmann::json j;
    j["seed"] = seed_base;
    j["config_hash"] = config_hash;
    j["timestamp"] = timestamp;
    j["failures"] = failures;
    return j.dump(2);
}

std::vector<SweepRow> SweepReport::rows_from_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("report csv: empty input", 0);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "experiment,condition,model,trial,metric,value")
        throw FormatError("report csv: unexpected header '" + line + "'", 0);
    std::vector<SweepRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        SweepRow r;
        std::string cond, trial, value;
        if (!std::getline(ss, r.experiment, ',') || !std::getline(ss, cond, ',') ||
            !std::getline(ss, r.model, ',') || !std::getline(ss, trial, ',') ||
            !std::getline(ss, r.metric, ',') || !std::getline(ss, value))
            throw FormatError("report csv: malformed line " + std::to_string(line_no), 0);
        try {
            r.condition = std::stod(cond);
            r.trial = std::stoi(trial);
            r.value = std::stod(value);
        } catch (const std::exception&) {
            throw FormatError("report csv: bad number on line " + std::to_string(line_no), 0);
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<double> select_values(const std::vector<SweepRow>& rows, const std::string& experiment,
                                  double condition, const std::string& model,
                                  const std::string& metric) {
    std::vector<std::pair<int, double>> hits;
    for (const auto& r : rows)
        if (r.experiment == experiment && r.model == model && r.metric == metric &&
            (r.condition == condition || (std::isinf(condition) && std::isinf(r.condition))))
            hits.push_back({r.trial, r.value});
    std::sort(hits.begin(), hits.end());
    std::vector<double> out;
    out.reserve(hits.size());
    for (auto& [t, v] : hits) out.push_back(v);
    return out;
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) throw ParameterError("mean_of: empty");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
    if (v.empty()) throw ParameterError("std_of: empty");
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace xlab
