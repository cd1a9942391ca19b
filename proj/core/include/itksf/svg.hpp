#pragma once

#include <string>
#include <vector>

#include "itksf/dataset.hpp"
#include "itksf/fitting.hpp"

namespace itksf {

/// Scatter plot of the data colored by recovered structure membership
/// (falling back to ground-truth labels, then gray), with the fitted lines
/// overlaid for 2D point data. Correspondences plot first-image coordinates.
void write_svg(const std::string& path, const DataSet& data,
               const std::vector<StructureEstimate>& structures);

}  // namespace itksf
