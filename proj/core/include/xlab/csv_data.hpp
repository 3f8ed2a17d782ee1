#pragma once

#include <string>

#include "xlab/dataset.hpp"

namespace xlab {

// Dataset CSV format: header row with a label column `y`, feature columns
// `x0..x{dx-1}` and optional `z0..z{dz-1}` columns. When z columns are
// absent, Z is set to a copy of X (the inputs are their own interpretable
// features).
void write_dataset_csv(const std::string& path, const Dataset& d);
Dataset read_dataset_csv(const std::string& path);

}  // namespace xlab
