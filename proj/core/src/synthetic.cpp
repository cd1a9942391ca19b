#include "itksf/synthetic.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "itksf/error.hpp"

namespace itksf {

namespace {

double uniform_in(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.real01(); }

Eigen::Vector3d canonical_line(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1) {
    const Eigen::Vector2d dir = (p1 - p0).normalized();
    Eigen::Vector2d normal(-dir.y(), dir.x());
    double c = -normal.dot(p0);
    if (normal.x() < 0.0 || (normal.x() == 0.0 && normal.y() < 0.0)) {
        normal = -normal;
        c = -c;
    }
    return {normal.x(), normal.y(), c};
}

Eigen::Vector2d apply_homography(const Eigen::Matrix3d& h, const Eigen::Vector2d& p) {
    const Eigen::Vector3d q = h * Eigen::Vector3d(p.x(), p.y(), 1.0);
    return {q.x() / q.z(), q.y() / q.z()};
}

void check_counts(int structures, int inliers, int outliers, double sigma) {
    if (structures < 0 || inliers < 0 || outliers < 0)
        throw InvalidConfig("scene counts must be non-negative");
    if (sigma < 0.0) throw InvalidConfig("noise scale must be non-negative");
}

/// Smaller of the two maximum endpoint-to-line deviations between two segments.
/// Near zero exactly when one segment lies along the other's infinite line.
double segment_separation(const Eigen::Vector2d& a0, const Eigen::Vector2d& a1,
                          const Eigen::Vector2d& b0, const Eigen::Vector2d& b1) {
    const Eigen::Vector3d la = canonical_line(a0, a1);
    const Eigen::Vector3d lb = canonical_line(b0, b1);
    const auto dist = [](const Eigen::Vector3d& l, const Eigen::Vector2d& p) {
        return std::abs(l.x() * p.x() + l.y() * p.y() + l.z());
    };
    const double a_off_b = std::max(dist(lb, a0), dist(lb, a1));
    const double b_off_a = std::max(dist(la, b0), dist(la, b1));
    return std::min(a_off_b, b_off_a);
}

}  // namespace

LineScene generate_synthetic_lines(const LineSceneSpec& spec, Rng& rng) {
    check_counts(spec.n_lines, spec.inliers_per_line, spec.n_outliers, spec.noise_sigma);
    if (spec.box_max_x <= spec.box_min_x || spec.box_max_y <= spec.box_min_y)
        throw InvalidConfig("domain box must have positive extent");

    LineScene scene;
    scene.data.coords = DataSet::Coords::Points2D;
    const double w = spec.box_max_x - spec.box_min_x;
    const double hgt = spec.box_max_y - spec.box_min_y;
    const double min_len = 0.5 * std::hypot(w, hgt);

    const double min_sep = 0.1 * std::hypot(w, hgt);
    constexpr int kRedrawCap = 200;
    std::vector<std::pair<Eigen::Vector2d, Eigen::Vector2d>> segments;

    for (int s = 0; s < spec.n_lines; ++s) {
        Eigen::Vector2d p0, p1, best_p0, best_p1;
        double best_sep = -1.0;
        for (int attempt = 0; attempt < kRedrawCap; ++attempt) {
            do {
                p0 = {uniform_in(rng, spec.box_min_x, spec.box_max_x),
                      uniform_in(rng, spec.box_min_y, spec.box_max_y)};
                p1 = {uniform_in(rng, spec.box_min_x, spec.box_max_x),
                      uniform_in(rng, spec.box_min_y, spec.box_max_y)};
            } while ((p1 - p0).norm() < min_len);
            double sep = std::numeric_limits<double>::infinity();
            for (const auto& [q0, q1] : segments)
                sep = std::min(sep, segment_separation(p0, p1, q0, q1));
            if (sep > best_sep) {
                best_sep = sep;
                best_p0 = p0;
                best_p1 = p1;
            }
            if (sep >= min_sep) break;
        }
        p0 = best_p0;
        p1 = best_p1;
        segments.emplace_back(p0, p1);
        scene.lines.push_back(canonical_line(p0, p1));

        const Eigen::Vector2d dir = (p1 - p0).normalized();
        const Eigen::Vector2d normal(-dir.y(), dir.x());
        for (int i = 0; i < spec.inliers_per_line; ++i) {
            const Eigen::Vector2d on = p0 + rng.real01() * (p1 - p0);
            const Eigen::Vector2d pt = on + spec.noise_sigma * rng.gaussian() * normal;
            scene.data.data.push_back(Datum{pt.x(), pt.y(), 0.0, 0.0, s + 1});
        }
    }
    for (int i = 0; i < spec.n_outliers; ++i)
        scene.data.data.push_back(Datum{uniform_in(rng, spec.box_min_x, spec.box_max_x),
                                        uniform_in(rng, spec.box_min_y, spec.box_max_y), 0.0, 0.0,
                                        0});
    return scene;
}

CorrespondenceScene generate_synthetic_homographies(const CorrespondenceSceneSpec& spec,
                                                    Rng& rng) {
    check_counts(spec.n_structures, spec.inliers_per_structure, spec.n_outliers,
                 spec.noise_sigma);
    CorrespondenceScene scene;
    scene.data.coords = DataSet::Coords::Correspondences;
    const double w = spec.image_size;

    for (int s = 0; s < spec.n_structures; ++s) {
        const double scale = uniform_in(rng, 0.7, 1.3);
        const double theta = uniform_in(rng, -0.5, 0.5);
        const double tx = uniform_in(rng, -0.1 * w, 0.1 * w);
        const double ty = uniform_in(rng, -0.1 * w, 0.1 * w);
        const double p1 = uniform_in(rng, -1.0, 1.0) * 1e-4;
        const double p2 = uniform_in(rng, -1.0, 1.0) * 1e-4;
        Eigen::Matrix3d h;
        h << scale * std::cos(theta), -scale * std::sin(theta), tx,
             scale * std::sin(theta), scale * std::cos(theta), ty,
             p1, p2, 1.0;
        scene.models.push_back(h);

        for (int i = 0; i < spec.inliers_per_structure; ++i) {
            const Eigen::Vector2d a(uniform_in(rng, 0.0, w), uniform_in(rng, 0.0, w));
            Eigen::Vector2d b = apply_homography(h, a);
            b.x() += spec.noise_sigma * rng.gaussian();
            b.y() += spec.noise_sigma * rng.gaussian();
            scene.data.data.push_back(Datum{a.x(), a.y(), b.x(), b.y(), s + 1});
        }
    }
    for (int i = 0; i < spec.n_outliers; ++i)
        scene.data.data.push_back(Datum{uniform_in(rng, 0.0, w), uniform_in(rng, 0.0, w),
                                        uniform_in(rng, 0.0, w), uniform_in(rng, 0.0, w), 0});
    return scene;
}

CorrespondenceScene generate_synthetic_fundamentals(const CorrespondenceSceneSpec& spec,
                                                    Rng& rng) {
    check_counts(spec.n_structures, spec.inliers_per_structure, spec.n_outliers,
                 spec.noise_sigma);
    CorrespondenceScene scene;
    scene.data.coords = DataSet::Coords::Correspondences;
    const double w = spec.image_size;
    const double f = 1.4 * w;
    Eigen::Matrix3d intr;
    intr << f, 0.0, 0.5 * w, 0.0, f, 0.5 * w, 0.0, 0.0, 1.0;
    const Eigen::Matrix3d intr_inv = intr.inverse();

    for (int s = 0; s < spec.n_structures; ++s) {
        const Eigen::Vector3d axis =
            Eigen::Vector3d(uniform_in(rng, -1.0, 1.0), uniform_in(rng, -1.0, 1.0),
                            uniform_in(rng, -1.0, 1.0))
                .normalized();
        const double angle = uniform_in(rng, 0.05, 0.25);
        const Eigen::Matrix3d rot = Eigen::AngleAxisd(angle, axis).toRotationMatrix();
        Eigen::Vector3d trans(uniform_in(rng, -1.0, 1.0), uniform_in(rng, -1.0, 1.0),
                              uniform_in(rng, -0.3, 0.3));
        if (trans.norm() < 0.3) trans = Eigen::Vector3d(1.0, 0.2, 0.0);
        trans.normalize();

        Eigen::Matrix3d cross;
        cross << 0.0, -trans.z(), trans.y(), trans.z(), 0.0, -trans.x(), -trans.y(), trans.x(),
            0.0;
        scene.models.push_back(intr_inv.transpose() * cross * rot * intr_inv);

        int made = 0;
        while (made < spec.inliers_per_structure) {
            const Eigen::Vector3d pt(uniform_in(rng, -2.0, 2.0), uniform_in(rng, -2.0, 2.0),
                                     uniform_in(rng, 4.0, 8.0));
            const Eigen::Vector3d q1 = intr * pt;
            const Eigen::Vector3d q2 = intr * (rot * pt + trans);
            if (q1.z() <= 0.1 || q2.z() <= 0.1) continue;
            Eigen::Vector2d a(q1.x() / q1.z(), q1.y() / q1.z());
            Eigen::Vector2d b(q2.x() / q2.z(), q2.y() / q2.z());
            if (a.x() < -w || a.x() > 2.0 * w || a.y() < -w || a.y() > 2.0 * w) continue;
            if (b.x() < -w || b.x() > 2.0 * w || b.y() < -w || b.y() > 2.0 * w) continue;
            b.x() += spec.noise_sigma * rng.gaussian();
            b.y() += spec.noise_sigma * rng.gaussian();
            scene.data.data.push_back(Datum{a.x(), a.y(), b.x(), b.y(), s + 1});
            ++made;
        }
    }
    for (int i = 0; i < spec.n_outliers; ++i)
        scene.data.data.push_back(Datum{uniform_in(rng, 0.0, w), uniform_in(rng, 0.0, w),
                                        uniform_in(rng, 0.0, w), uniform_in(rng, 0.0, w), 0});
    return scene;
}

}  // namespace itksf
