#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace xlab {

/// One measurement: (experiment, condition, model, trial, metric) -> value.
struct SweepRow {
    std::string experiment;
    double condition = 0.0;
    std::string model;
    int trial = 0;
    std::string metric;
    double value = 0.0;

    bool operator==(const SweepRow&) const = default;
};

/// Tabular result of an experiment sweep plus run metadata. The CSV body is
/// canonical (sorted, fixed float formatting) so identical configs and seeds
/// reproduce it byte for byte; the timestamp lives in the metadata sidecar.
struct SweepReport {
    std::vector<SweepRow> rows;
    std::uint64_t seed_base = 0;
    std::string config_hash;
    std::string timestamp;
    std::vector<std::string> failures;

    void sort_canonical();
    /// Key uniqueness and value finiteness.
    void validate() const;

    std::string csv() const;
    std::string metadata_json() const;

    static std::vector<SweepRow> rows_from_csv(std::istream& in);
};

/// Canonical lossless float formatting used across report files.
std::string format_double(double v);

/// Values for one (experiment, condition, model, metric) across trials,
/// in trial order.
std::vector<double> select_values(const std::vector<SweepRow>& rows, const std::string& experiment,
                                  double condition, const std::string& model,
                                  const std::string& metric);
double mean_of(const std::vector<double>& v);
double std_of(const std::vector<double>& v);

}  // namespace xlab
