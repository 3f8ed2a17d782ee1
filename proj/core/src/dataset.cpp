#include "xlab/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "xlab/errors.hpp"
#include "xlab/rng.hpp"

namespace xlab {

std::string to_string(FeatureKind k) {
    switch (k) {
        case FeatureKind::pxl: return "pxl";
        case FeatureKind::hog: return "hog";
        case FeatureKind::synthetic: return "synthetic";
    }
    return "?";
}

FeatureKind feature_kind_from_string(const std::string& s) {
    if (s == "pxl") return FeatureKind::pxl;
    if (s == "hog") return FeatureKind::hog;
    if (s == "synthetic") return FeatureKind::synthetic;
    throw ParameterError("unknown feature kind '" + s + "' (expected pxl|hog|synthetic)");
}

void Dataset::validate() const {
    if (X.rows() != y.size())
        throw DimensionError("dataset: X has " + std::to_string(X.rows()) + " rows but " +
                             std::to_string(y.size()) + " labels");
    if (!Z.empty() && Z.rows() != y.size())
        throw DimensionError("dataset: Z has " + std::to_string(Z.rows()) + " rows but " +
                             std::to_string(y.size()) + " labels");
    for (int label : y)
        if (label < 0 || label >= num_classes)
            throw ParameterError("dataset: label " + std::to_string(label) + " outside [0, " +
                                 std::to_string(num_classes) + ")");
}

Dataset Dataset::take_rows(const std::vector<std::size_t>& idx) const {
    Dataset out;
    out.X = X.take_rows(idx);
    if (!Z.empty()) out.Z = Z.take_rows(idx);
    out.y.reserve(idx.size());
    for (std::size_t i : idx) {
        if (i >= y.size()) throw ParameterError("take_rows: index out of range");
        out.y.push_back(y[i]);
    }
    out.num_classes = num_classes;
    out.feature_kind = feature_kind;
    out.split = split;
    return out;
}

namespace {

// Stratified without-replacement sample of ceil(fraction*n) row indices,
// deterministically shuffled. Streams: (1, class) for per-class picks, (2)
// for the final shuffle, all derived from the seed alone.
std::vector<std::size_t> stratified_indices(const Dataset& d, double fraction,
                                            std::uint64_t seed) {
    const std::size_t n = d.size();
    const std::size_t m = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
    if (m < static_cast<std::size_t>(d.num_classes))
        throw ParameterError("take_fraction: " + std::to_string(m) +
                             " samples cannot stratify " + std::to_string(d.num_classes) +
                             " classes");

    std::vector<std::vector<std::size_t>> by_class(d.num_classes);
    for (std::size_t i = 0; i < n; ++i) by_class[static_cast<std::size_t>(d.y[i])].push_back(i);

    // Largest-remainder apportioning of m across classes.
    std::vector<std::size_t> target(by_class.size());
    std::vector<std::pair<double, std::size_t>> remainder;
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        const double exact = fraction * static_cast<double>(by_class[c].size());
        target[c] = std::min(by_class[c].size(), static_cast<std::size_t>(std::floor(exact)));
        assigned += target[c];
        remainder.push_back({exact - std::floor(exact), c});
    }
    std::sort(remainder.begin(), remainder.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::size_t guard = 0;
    for (std::size_t k = 0; assigned < m; k = (k + 1) % remainder.size()) {
        const std::size_t c = remainder[k].second;
        if (target[c] < by_class[c].size()) {
            ++target[c];
            ++assigned;
        }
        if (++guard > m + by_class.size() * (remainder.size() + 1))
            throw ParameterError("take_fraction: cannot reach requested sample size");
    }

    std::vector<std::size_t> picked;
    picked.reserve(m);
    const Rng base(seed);
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        Rng class_rng = base.derive(1, c);
        const auto perm = class_rng.permutation(by_class[c].size());
        for (std::size_t k = 0; k < target[c]; ++k) picked.push_back(by_class[c][perm[k]]);
    }
    Rng shuffle_rng = base.derive(2);
    const auto order = shuffle_rng.permutation(picked.size());
    std::vector<std::size_t> out(picked.size());
    for (std::size_t i = 0; i < picked.size(); ++i) out[i] = picked[order[i]];
    return out;
}

}  // namespace

Dataset take_fraction(const Dataset& d, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0) || fraction > 1.0)
        throw ParameterError("take_fraction: fraction must be in (0, 1]");
    return d.take_rows(stratified_indices(d, fraction, seed));
}

SplitData carve_validation(const Dataset& train_all, const Dataset& test, double val_fraction,
                           std::uint64_t seed) {
    if (!(val_fraction >= 0.0) || val_fraction >= 1.0)
        throw ParameterError("carve_validation: val fraction must be in [0, 1)");
    SplitData s;
    s.test = test;
    s.test.split = Split::test;
    s.val.num_classes = train_all.num_classes;
    s.val.feature_kind = train_all.feature_kind;
    if (val_fraction > 0.0) {
        const auto val_idx = stratified_indices(train_all, val_fraction, seed);
        std::vector<bool> in_val(train_all.size(), false);
        for (std::size_t i : val_idx) in_val[i] = true;
        std::vector<std::size_t> train_idx;
        train_idx.reserve(train_all.size() - val_idx.size());
        for (std::size_t i = 0; i < train_all.size(); ++i)
            if (!in_val[i]) train_idx.push_back(i);
        s.val = train_all.take_rows(val_idx);
        s.train = train_all.take_rows(train_idx);
    } else {
        s.train = train_all;
    }
    s.train.split = Split::train;
    s.val.split = Split::val;
    return s;
}

}  // namespace xlab
