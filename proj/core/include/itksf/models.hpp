#pragma once

#include <Eigen/Core>
#include <span>
#include <string>
#include <vector>

#include "itksf/dataset.hpp"

namespace itksf {

enum class ModelKind { Line2D, Homography, FundamentalMatrix };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

/// Size p of a minimal subset: 2 (line), 4 (homography), 8 (fundamental matrix).
int minimal_subset_size(ModelKind kind);

/// A fitted model hypothesis. params is unit-norm:
///   Line2D             3 homogeneous line coefficients a, b, c (ax + by + c = 0)
///   Homography         9 row-major entries of the 3x3 matrix
///   FundamentalMatrix  9 row-major entries of the rank-2 3x3 matrix
struct Model {
    ModelKind kind = ModelKind::Line2D;
    Eigen::VectorXd params;

    bool valid() const { return params.size() > 0 && params.norm() > 0.0; }
};

/// Least-squares model through `subset` (total least squares for lines,
/// normalized DLT for homographies, normalized 8-point with rank-2 enforcement
/// for fundamental matrices). Accepts minimal and larger subsets.
/// Throws DegenerateSubset / NumericalFailure.
Model fit(ModelKind kind, const DataSet& dataset, std::span<const int> subset);

/// Absolute residual of one datum against one model: orthogonal distance,
/// symmetric transfer error, or Sampson distance. Never throws; a singular
/// homography yields +inf.
double residual(const Model& model, const Datum& datum);

/// Residuals of every datum against one model. Same definitions as residual(),
/// with per-model work (the inverse homography) hoisted out of the loop.
Eigen::VectorXd residual_column(const Model& model, const DataSet& dataset);

/// True iff the subset cannot determine a unique model: coincident points,
/// collinear homography triples, or a rank-deficient 8-point design matrix.
/// Expects exactly minimal_subset_size(kind) indices.
bool is_degenerate(ModelKind kind, const DataSet& dataset, std::span<const int> subset);

}  // namespace itksf
