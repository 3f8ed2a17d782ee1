#pragma once

#include <string>
#include <vector>

#include "xlab/dataset.hpp"
#include "xlab/matrix.hpp"

namespace xlab {

// IDX container (the MNIST distribution format): big-endian 32-bit magic,
// big-endian 32-bit dimension sizes, unsigned-byte payload.
inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

/// Images scaled to [0,1]; result is n x (rows*cols).
Matrix read_idx_images(const std::string& path, std::size_t* out_rows = nullptr,
                       std::size_t* out_cols = nullptr);
std::vector<int> read_idx_labels(const std::string& path);

/// Pixel values are quantized to round(v*255) bytes; values already on the
/// 1/255 grid round-trip bit-exactly.
void write_idx_images(const std::string& path, const Matrix& images, std::size_t img_rows,
                      std::size_t img_cols);
void write_idx_labels(const std::string& path, const std::vector<int>& labels);

/// Paired image/label load with count cross-check. Z is left empty.
Dataset load_idx(const std::string& images_path, const std::string& labels_path);

}  // namespace xlab
