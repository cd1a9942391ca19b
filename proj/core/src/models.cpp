#include "itksf/models.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "itksf/error.hpp"

namespace itksf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCollinearTol = 1e-9;
constexpr double kRankRatioTol = 1e-9;

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

/// Hartley normalization: centroid to origin, mean distance sqrt(2).
Mat3 normalizing_transform(const std::vector<Vec2>& pts) {
    Vec2 centroid = Vec2::Zero();
    for (const Vec2& p : pts) centroid += p;
    centroid /= static_cast<double>(pts.size());
    double mean_dist = 0.0;
    for (const Vec2& p : pts) mean_dist += (p - centroid).norm();
    mean_dist /= static_cast<double>(pts.size());
    if (mean_dist < 1e-15)
        throw DegenerateSubset("all points coincident, normalization undefined");
    const double s = std::sqrt(2.0) / mean_dist;
    Mat3 t;
    t << s, 0, -s * centroid.x(), 0, s, -s * centroid.y(), 0, 0, 1;
    return t;
}

void check_finite(const DataSet& ds, std::span<const int> subset) {
    for (int idx : subset) {
        const Datum& d = ds.data[idx];
        if (!std::isfinite(d.x1) || !std::isfinite(d.y1) || !std::isfinite(d.x2) ||
            !std::isfinite(d.y2))
            throw NumericalFailure("non-finite coordinates in subset");
    }
}

/// Unit-normalize with a deterministic sign: largest-magnitude entry positive.
Eigen::VectorXd canonicalize(Eigen::VectorXd v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n))
        throw NumericalFailure("degenerate parameter vector");
    v /= n;
    int imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v[imax] < 0.0) v = -v;
    return v;
}

/// Right-singular vector of the smallest singular value; throws if the
/// second-smallest singular value is not clearly separated from rank
/// deficiency (the system would admit multiple solutions).
Eigen::VectorXd null_vector(const Eigen::MatrixXd& a) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const int last = static_cast<int>(a.cols()) - 1;
    if (!(sv(0) > 0.0))
        throw DegenerateSubset("zero design matrix");
    if (sv(last - 1) / sv(0) < kRankRatioTol)
        throw DegenerateSubset("design matrix rank deficient, model not unique");
    return svd.matrixV().col(last);
}

Model fit_line(const DataSet& ds, std::span<const int> subset) {
    Vec2 centroid = Vec2::Zero();
    for (int idx : subset) centroid += Vec2(ds.data[idx].x1, ds.data[idx].y1);
    centroid /= static_cast<double>(subset.size());

    Eigen::Matrix2d scatter = Eigen::Matrix2d::Zero();
    for (int idx : subset) {
        const Vec2 d = Vec2(ds.data[idx].x1, ds.data[idx].y1) - centroid;
        scatter += d * d.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(scatter);
    // Both eigenvalues ~0 means every point sits on the centroid.
    const double spread = eig.eigenvalues()(1);
    if (!(spread > 1e-24 * (1.0 + centroid.squaredNorm())))
        throw DegenerateSubset("coincident points, line not unique");
    const Vec2 normal = eig.eigenvectors().col(0);  // smallest eigenvalue first

    Eigen::VectorXd params(3);
    params << normal.x(), normal.y(), -normal.dot(centroid);
    return Model{ModelKind::Line2D, canonicalize(std::move(params))};
}

Model fit_homography(const DataSet& ds, std::span<const int> subset) {
    const int n = static_cast<int>(subset.size());
    std::vector<Vec2> p1, p2;
    p1.reserve(n);
    p2.reserve(n);
    for (int idx : subset) {
        p1.emplace_back(ds.data[idx].x1, ds.data[idx].y1);
        p2.emplace_back(ds.data[idx].x2, ds.data[idx].y2);
    }
    const Mat3 t1 = normalizing_transform(p1);
    const Mat3 t2 = normalizing_transform(p2);

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 9);
    for (int r = 0; r < n; ++r) {
        const Vec3 x = t1 * p1[r].homogeneous();
        const Vec3 y = t2 * p2[r].homogeneous();
        const double u = y.x() / y.z(), v = y.y() / y.z();
        a.row(2 * r) << 0, 0, 0, -x.x(), -x.y(), -x.z(), v * x.x(), v * x.y(), v * x.z();
        a.row(2 * r + 1) << x.x(), x.y(), x.z(), 0, 0, 0, -u * x.x(), -u * x.y(), -u * x.z();
    }
    const Eigen::VectorXd h = null_vector(a);
    Mat3 hn;
    hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
    const Mat3 hd = t2.inverse() * hn * t1;

    Eigen::VectorXd params(9);
    params << hd(0, 0), hd(0, 1), hd(0, 2), hd(1, 0), hd(1, 1), hd(1, 2), hd(2, 0), hd(2, 1),
        hd(2, 2);
    return Model{ModelKind::Homography, canonicalize(std::move(params))};
}

Eigen::MatrixXd fundamental_design(const std::vector<Vec2>& p1, const std::vector<Vec2>& p2,
                                   const Mat3& t1, const Mat3& t2) {
    const int n = static_cast<int>(p1.size());
    Eigen::MatrixXd a(n, 9);
    for (int r = 0; r < n; ++r) {
        const Vec3 x = t1 * p1[r].homogeneous();
        const Vec3 y = t2 * p2[r].homogeneous();
        const double xx = x.x() / x.z(), xy = x.y() / x.z();
        const double yx = y.x() / y.z(), yy = y.y() / y.z();
        a.row(r) << yx * xx, yx * xy, yx, yy * xx, yy * xy, yy, xx, xy, 1.0;
    }
    return a;
}

Model fit_fundamental(const DataSet& ds, std::span<const int> subset) {
    const int n = static_cast<int>(subset.size());
    std::vector<Vec2> p1, p2;
    p1.reserve(n);
    p2.reserve(n);
    for (int idx : subset) {
        p1.emplace_back(ds.data[idx].x1, ds.data[idx].y1);
        p2.emplace_back(ds.data[idx].x2, ds.data[idx].y2);
    }
    const Mat3 t1 = normalizing_transform(p1);
    const Mat3 t2 = normalizing_transform(p2);
    const Eigen::VectorXd f = null_vector(fundamental_design(p1, p2, t1, t2));

    Mat3 fn;
    fn << f(0), f(1), f(2), f(3), f(4), f(5), f(6), f(7), f(8);
    // Rank-2 enforcement: zero the smallest singular value.
    Eigen::JacobiSVD<Mat3> svd(fn, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Vec3 sv = svd.singularValues();
    sv(2) = 0.0;
    const Mat3 f2 = svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose();
    const Mat3 fd = t2.transpose() * f2 * t1;

    Eigen::VectorXd params(9);
    params << fd(0, 0), fd(0, 1), fd(0, 2), fd(1, 0), fd(1, 1), fd(1, 2), fd(2, 0), fd(2, 1),
        fd(2, 2);
    return Model{ModelKind::FundamentalMatrix, canonicalize(std::move(params))};
}

Mat3 as_matrix(const Eigen::VectorXd& p) {
    Mat3 m;
    m << p(0), p(1), p(2), p(3), p(4), p(5), p(6), p(7), p(8);
    return m;
}

double line_residual(const Eigen::VectorXd& p, const Datum& d) {
    const double den = std::hypot(p(0), p(1));
    if (!(den > 0.0)) return kInf;
    return std::abs(p(0) * d.x1 + p(1) * d.y1 + p(2)) / den;
}

double transfer_error_sq(const Mat3& h, double x, double y, double u, double v) {
    const Vec3 m = h * Vec3(x, y, 1.0);
    if (std::abs(m.z()) < 1e-15) return kInf;
    const double du = m.x() / m.z() - u;
    const double dv = m.y() / m.z() - v;
    return du * du + dv * dv;
}

double homography_residual(const Mat3& h, const Mat3& hinv, bool invertible, const Datum& d) {
    if (!invertible) return kInf;
    const double fwd = transfer_error_sq(h, d.x1, d.y1, d.x2, d.y2);
    const double bwd = transfer_error_sq(hinv, d.x2, d.y2, d.x1, d.y1);
    return std::sqrt(fwd + bwd);
}

double sampson_residual(const Mat3& f, const Datum& d) {
    const Vec3 x1(d.x1, d.y1, 1.0);
    const Vec3 x2(d.x2, d.y2, 1.0);
    const Vec3 fx1 = f * x1;
    const Vec3 ftx2 = f.transpose() * x2;
    const double num = x2.dot(fx1);
    const double den =
        fx1.x() * fx1.x() + fx1.y() * fx1.y() + ftx2.x() * ftx2.x() + ftx2.y() * ftx2.y();
    if (!(den > 0.0)) return num == 0.0 ? 0.0 : kInf;
    return std::abs(num) / std::sqrt(den);
}

bool invert_homography(const Mat3& h, Mat3& hinv) {
    const double det = h.determinant();
    if (!std::isfinite(det) || std::abs(det) < 1e-12) return false;  // params are unit-norm
    hinv = h.inverse();
    return true;
}

bool coincident(const Datum& a, const Datum& b, bool correspondence) {
    const double scale = 1.0 + std::max({std::abs(a.x1), std::abs(a.y1), std::abs(b.x1),
                                         std::abs(b.y1), std::abs(a.x2), std::abs(a.y2),
                                         std::abs(b.x2), std::abs(b.y2)});
    const double tol = 1e-9 * scale;
    double d = std::hypot(a.x1 - b.x1, a.y1 - b.y1);
    if (correspondence) d = std::max(d, std::hypot(a.x2 - b.x2, a.y2 - b.y2));
    return d <= tol;
}

/// |cross(p2-p1, p3-p1)| normalized by the leg lengths; near zero = collinear.
bool collinear(const Vec2& p1, const Vec2& p2, const Vec2& p3) {
    const Vec2 u = p2 - p1;
    const Vec2 v = p3 - p1;
    const double nu = u.norm(), nv = v.norm();
    if (nu < 1e-15 || nv < 1e-15) return true;  // duplicated points
    return std::abs(u.x() * v.y() - u.y() * v.x()) / (nu * nv) < kCollinearTol;
}

}  // namespace

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Line2D: return "line";
        case ModelKind::Homography: return "homography";
        case ModelKind::FundamentalMatrix: return "fundamental";
    }
    return "unknown";
}

ModelKind model_kind_from_string(const std::string& name) {
    if (name == "line") return ModelKind::Line2D;
    if (name == "homography") return ModelKind::Homography;
    if (name == "fundamental") return ModelKind::FundamentalMatrix;
    throw InvalidConfig("unknown model kind '" + name + "'");
}

int minimal_subset_size(ModelKind kind) {
    switch (kind) {
        case ModelKind::Line2D: return 2;
        case ModelKind::Homography: return 4;
        case ModelKind::FundamentalMatrix: return 8;
    }
    return 0;
}

Model fit(ModelKind kind, const DataSet& dataset, std::span<const int> subset) {
    if (static_cast<int>(subset.size()) < minimal_subset_size(kind))
        throw DimensionMismatch("subset smaller than the minimal size for this model kind");
    check_finite(dataset, subset);
    switch (kind) {
        case ModelKind::Line2D: return fit_line(dataset, subset);
        case ModelKind::Homography: return fit_homography(dataset, subset);
        case ModelKind::FundamentalMatrix: return fit_fundamental(dataset, subset);
    }
    throw NumericalFailure("unreachable model kind");
}

double residual(const Model& model, const Datum& datum) {
    if (!model.valid()) return kInf;
    switch (model.kind) {
        case ModelKind::Line2D: return line_residual(model.params, datum);
        case ModelKind::Homography: {
            const Mat3 h = as_matrix(model.params);
            Mat3 hinv;
            const bool ok = invert_homography(h, hinv);
            return homography_residual(h, hinv, ok, datum);
        }
        case ModelKind::FundamentalMatrix: return sampson_residual(as_matrix(model.params), datum);
    }
    return kInf;
}

Eigen::VectorXd residual_column(const Model& model, const DataSet& dataset) {
    const int n = dataset.size();
    Eigen::VectorXd out(n);
    if (!model.valid()) {
        out.setConstant(kInf);
        return out;
    }
    switch (model.kind) {
        case ModelKind::Line2D:
            for (int i = 0; i < n; ++i) out(i) = line_residual(model.params, dataset.data[i]);
            break;
        case ModelKind::Homography: {
            const Mat3 h = as_matrix(model.params);
            Mat3 hinv;
            const bool ok = invert_homography(h, hinv);
            for (int i = 0; i < n; ++i)
                out(i) = homography_residual(h, hinv, ok, dataset.data[i]);
            break;
        }
        case ModelKind::FundamentalMatrix: {
            const Mat3 f = as_matrix(model.params);
            for (int i = 0; i < n; ++i) out(i) = sampson_residual(f, dataset.data[i]);
            break;
        }
    }
    return out;
}

bool is_degenerate(ModelKind kind, const DataSet& dataset, std::span<const int> subset) {
    const int p = minimal_subset_size(kind);
    if (static_cast<int>(subset.size()) != p)
        throw DimensionMismatch("degeneracy test expects exactly a minimal subset");

    const bool corr = kind != ModelKind::Line2D;
    for (std::size_t a = 0; a + 1 < subset.size(); ++a)
        for (std::size_t b = a + 1; b < subset.size(); ++b)
            if (coincident(dataset.data[subset[a]], dataset.data[subset[b]], corr)) return true;

    switch (kind) {
        case ModelKind::Line2D:
            return false;  // distinct points determine a line
        case ModelKind::Homography: {
            std::vector<Vec2> img1, img2;
            for (int idx : subset) {
                img1.emplace_back(dataset.data[idx].x1, dataset.data[idx].y1);
                img2.emplace_back(dataset.data[idx].x2, dataset.data[idx].y2);
            }
            for (const auto* img : {&img1, &img2})
                for (int skip = 0; skip < 4; ++skip) {
                    Vec2 tri[3];
                    int w = 0;
                    for (int j = 0; j < 4; ++j)
                        if (j != skip) tri[w++] = (*img)[j];
                    if (collinear(tri[0], tri[1], tri[2])) return true;
                }
            return false;
        }
        case ModelKind::FundamentalMatrix: {
            std::vector<Vec2> p1, p2;
            for (int idx : subset) {
                p1.emplace_back(dataset.data[idx].x1, dataset.data[idx].y1);
                p2.emplace_back(dataset.data[idx].x2, dataset.data[idx].y2);
            }
            Mat3 t1, t2;
            try {
                t1 = normalizing_transform(p1);
                t2 = normalizing_transform(p2);
            } catch (const DegenerateSubset&) {
                return true;
            }
            const Eigen::MatrixXd a = fundamental_design(p1, p2, t1, t2);
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
            const auto& sv = svd.singularValues();
            return !(sv(0) > 0.0) || sv(7) / sv(0) < kRankRatioTol;
        }
    }
    return true;
}

}  // namespace itksf
