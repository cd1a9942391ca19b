#pragma once

#include <Eigen/Core>
#include <vector>

#include "itksf/dataset.hpp"
#include "itksf/random.hpp"

namespace itksf {

struct LineSceneSpec {
    int n_lines = 5;
    int inliers_per_line = 100;
    int n_outliers = 250;
    double noise_sigma = 0.01;
    double box_min_x = 0.0, box_min_y = 0.0;
    double box_max_x = 1.0, box_max_y = 1.0;
};

/// Labeled 2D point cloud plus the planted lines as unit-normal (a, b, c)
/// coefficients, indexed by structure id minus one.
struct LineScene {
    DataSet data;
    std::vector<Eigen::Vector3d> lines;
};

/// Random line segments spanning the box. Inliers sit uniformly along each
/// segment with orthogonal Gaussian noise; outliers are uniform in the box.
/// Structure s occupies labels s = 1.., outliers label 0.
LineScene generate_synthetic_lines(const LineSceneSpec& spec, Rng& rng);

struct CorrespondenceSceneSpec {
    int n_structures = 1;
    int inliers_per_structure = 50;
    int n_outliers = 0;
    double noise_sigma = 0.0;
    double image_size = 512.0;
};

/// Labeled correspondences plus the planted 3x3 model matrix per structure.
struct CorrespondenceScene {
    DataSet data;
    std::vector<Eigen::Matrix3d> models;
};

/// Each structure is a well-conditioned plane-induced homography; matches are
/// exact projections of uniform first-image points, plus optional pixel noise
/// on the second image and uniform random-pair outliers.
CorrespondenceScene generate_synthetic_homographies(const CorrespondenceSceneSpec& spec,
                                                    Rng& rng);

/// Each structure is one rigid motion seen by a calibrated camera pair; the
/// stored matrix is the induced epipolar constraint built from the motion.
CorrespondenceScene generate_synthetic_fundamentals(const CorrespondenceSceneSpec& spec,
                                                    Rng& rng);

}  // namespace itksf
