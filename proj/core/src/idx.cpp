#include "xlab/idx.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>

#include "xlab/errors.hpp"

namespace xlab {

namespace {

std::uint32_t read_be32(std::istream& in, std::size_t& offset, const std::string& path) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (in.gcount() != 4) throw FormatError(path + ": truncated while reading 32-bit field", offset);
    offset += 4;
    return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) | (std::uint32_t(b[2]) << 8) |
           std::uint32_t(b[3]);
}

void write_be32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v >> 24), static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
    out.write(reinterpret_cast<char*>(b), 4);
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParameterError("cannot open file: " + path);
    return in;
}

}  // namespace

Matrix read_idx_images(const std::string& path, std::size_t* out_rows, std::size_t* out_cols) {
    auto in = open_input(path);
    std::size_t offset = 0;
    const std::uint32_t magic = read_be32(in, offset, path);
    if (magic != kIdxImagesMagic)
        throw FormatError(path + ": bad image magic number " + std::to_string(magic), 0);
    const std::uint32_t n = read_be32(in, offset, path);
    const std::uint32_t rows = read_be32(in, offset, path);
    const std::uint32_t cols = read_be32(in, offset, path);
    const std::size_t pixels = std::size_t(n) * rows * cols;
    std::vector<unsigned char> buf(pixels);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(pixels));
    if (static_cast<std::size_t>(in.gcount()) != pixels)
        throw FormatError(path + ": truncated image payload", offset + static_cast<std::size_t>(in.gcount()));
    Matrix m(n, std::size_t(rows) * cols);
    for (std::size_t i = 0; i < pixels; ++i) m.storage()[i] = buf[i] / 255.0;
    if (out_rows) *out_rows = rows;
    if (out_cols) *out_cols = cols;
    return m;
}

std::vector<int> read_idx_labels(const std::string& path) {
    auto in = open_input(path);
    std::size_t offset = 0;
    const std::uint32_t magic = read_be32(in, offset, path);
    if (magic != kIdxLabelsMagic)
        throw FormatError(path + ": bad label magic number " + std::to_string(magic), 0);
    const std::uint32_t n = read_be32(in, offset, path);
    std::vector<unsigned char> buf(n);
    in.read(reinterpret_cast<char*>(buf.data()), n);
    if (static_cast<std::size_t>(in.gcount()) != n)
        throw FormatError(path + ": truncated label payload", offset + static_cast<std::size_t>(in.gcount()));
    return std::vector<int>(buf.begin(), buf.end());
}

void write_idx_images(const std::string& path, const Matrix& images, std::size_t img_rows,
                      std::size_t img_cols) {
    if (img_rows * img_cols != images.cols())
        throw DimensionError("write_idx_images: row*col != image length");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParameterError("cannot open file for writing: " + path);
    write_be32(out, kIdxImagesMagic);
    write_be32(out, static_cast<std::uint32_t>(images.rows()));
    write_be32(out, static_cast<std::uint32_t>(img_rows));
    write_be32(out, static_cast<std::uint32_t>(img_cols));
    std::vector<unsigned char> buf(images.size());
    for (std::size_t i = 0; i < images.size(); ++i) {
        const double v = std::clamp(images.storage()[i], 0.0, 1.0);
        buf[i] = static_cast<unsigned char>(std::lround(v * 255.0));
    }
    out.write(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

void write_idx_labels(const std::string& path, const std::vector<int>& labels) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParameterError("cannot open file for writing: " + path);
    write_be32(out, kIdxLabelsMagic);
    write_be32(out, static_cast<std::uint32_t>(labels.size()));
    std::vector<unsigned char> buf;
    buf.reserve(labels.size());
    for (int v : labels) {
        if (v < 0 || v > 255) throw ParameterError("write_idx_labels: label out of byte range");
        buf.push_back(static_cast<unsigned char>(v));
    }
    out.write(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

Dataset load_idx(const std::string& images_path, const std::string& labels_path) {
    Dataset d;
    d.X = read_idx_images(images_path);
    d.y = read_idx_labels(labels_path);
    if (d.X.rows() != d.y.size())
        throw FormatError(images_path + " has " + std::to_string(d.X.rows()) + " images but " +
                              labels_path + " has " + std::to_string(d.y.size()) + " labels",
                          0);
    int max_label = 0;
    for (int v : d.y) max_label = std::max(max_label, v);
    d.num_classes = max_label + 1;
    d.feature_kind = FeatureKind::pxl;
    d.validate();
    return d;
}

}  // namespace xlab
