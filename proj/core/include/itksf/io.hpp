#pragma once

#include <string>

#include "itksf/dataset.hpp"

namespace itksf {

/// Strict reader for the correspondence format (header x1,y1,x2,y2,label).
DataSet load_correspondences(const std::string& path);

/// Strict reader for the 2D point format (header x,y,label).
DataSet load_points(const std::string& path);

/// Reads either format, dispatching on the header line.
DataSet load_dataset(const std::string& path);

/// Writes the matching format with full round-trip precision. Unlabeled data
/// leave the label field blank.
void save_dataset(const std::string& path, const DataSet& data);

}  // namespace itksf
