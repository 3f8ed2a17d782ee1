#include "xlab/csv_data.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "xlab/errors.hpp"

namespace xlab {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

double parse_double(const std::string& s, std::size_t line_no, const std::string& path) {
    double v = 0;
    const auto* begin = s.data();
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || p != end)
        throw FormatError(path + ": bad numeric value '" + s + "' on line " +
                              std::to_string(line_no),
                          0);
    return v;
}

}  // namespace

void write_dataset_csv(const std::string& path, const Dataset& d) {
    d.validate();
    std::ofstream out(path);
    if (!out) throw ParameterError("cannot open file for writing: " + path);
    out << "y";
    for (std::size_t j = 0; j < d.X.cols(); ++j) out << ",x" << j;
    const bool own_z = !d.Z.empty() && !(d.Z == d.X);
    if (own_z)
        for (std::size_t j = 0; j < d.Z.cols(); ++j) out << ",z" << j;
    out << "\n";
    for (std::size_t i = 0; i < d.size(); ++i) {
        out << d.y[i];
        for (double v : d.X.row(i)) out << ',' << fmt(v);
        if (own_z)
            for (double v : d.Z.row(i)) out << ',' << fmt(v);
        out << "\n";
    }
}

Dataset read_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw FormatError(path + ": empty file", 0);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv_line(line);
    std::size_t y_col = header.size();
    std::vector<std::size_t> x_cols, z_cols;
    std::vector<std::size_t> x_index, z_index;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string& h = header[c];
        if (h == "y") {
            y_col = c;
        } else if (h.size() > 1 && h[0] == 'x') {
            x_cols.push_back(c);
            x_index.push_back(std::stoul(h.substr(1)));
        } else if (h.size() > 1 && h[0] == 'z') {
            z_cols.push_back(c);
            z_index.push_back(std::stoul(h.substr(1)));
        } else {
            throw FormatError(path + ": unknown column '" + h + "' in header", 0);
        }
    }
    if (y_col == header.size()) throw FormatError(path + ": header has no 'y' column", 0);
    for (std::size_t idx : x_index)
        if (idx >= x_cols.size())
            throw FormatError(path + ": x column indices are not contiguous from 0", 0);
    for (std::size_t idx : z_index)
        if (idx >= z_cols.size())
            throw FormatError(path + ": z column indices are not contiguous from 0", 0);

    std::vector<std::vector<double>> xs, zs;
    std::vector<int> ys;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw FormatError(path + ": line " + std::to_string(line_no) + " has " +
                                  std::to_string(cells.size()) + " cells, header has " +
                                  std::to_string(header.size()),
                              0);
        ys.push_back(static_cast<int>(parse_double(cells[y_col], line_no, path)));
        std::vector<double> xrow(x_cols.size()), zrow(z_cols.size());
        for (std::size_t k = 0; k < x_cols.size(); ++k)
            xrow[x_index[k]] = parse_double(cells[x_cols[k]], line_no, path);
        for (std::size_t k = 0; k < z_cols.size(); ++k)
            zrow[z_index[k]] = parse_double(cells[z_cols[k]], line_no, path);
        xs.push_back(std::move(xrow));
        zs.push_back(std::move(zrow));
    }

    Dataset d;
    d.X = Matrix(xs.size(), x_cols.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        std::copy(xs[i].begin(), xs[i].end(), d.X.row(i).begin());
    if (!z_cols.empty()) {
        d.Z = Matrix(zs.size(), z_cols.size());
        for (std::size_t i = 0; i < zs.size(); ++i)
            std::copy(zs[i].begin(), zs[i].end(), d.Z.row(i).begin());
    } else {
        d.Z = d.X;
    }
    d.y = std::move(ys);
    int max_label = 0;
    for (int v : d.y) {
        if (v < 0) throw FormatError(path + ": negative label", 0);
        max_label = std::max(max_label, v);
    }
    d.num_classes = max_label + 1;
    d.feature_kind = FeatureKind::synthetic;
    d.validate();
    return d;
}

}  // namespace xlab
