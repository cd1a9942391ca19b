#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace itksf {

/// One input datum: a 2D point (x1, y1) or a correspondence (x1, y1) <-> (x2, y2).
/// label: ground-truth structure id, 0 = gross outlier, nullopt = unlabeled.
struct Datum {
    double x1 = 0.0, y1 = 0.0, x2 = 0.0, y2 = 0.0;
    std::optional<int> label;
};

struct DataSet {
    enum class Coords { Points2D, Correspondences };

    Coords coords = Coords::Points2D;
    std::vector<Datum> data;

    int size() const { return static_cast<int>(data.size()); }

    /// True when every datum carries a ground-truth label.
    bool has_labels() const {
        return !data.empty() &&
               std::all_of(data.begin(), data.end(),
                           [](const Datum& d) { return d.label.has_value(); });
    }

    std::vector<int> labels() const {
        std::vector<int> out;
        out.reserve(data.size());
        for (const Datum& d : data) out.push_back(d.label.value_or(-1));
        return out;
    }

    /// Distinct structure ids present (labels != 0), ascending.
    std::vector<int> structure_ids() const {
        std::vector<int> ids;
        for (const Datum& d : data)
            if (d.label && *d.label != 0) ids.push_back(*d.label);
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        return ids;
    }

    /// Diagonal of the axis-aligned bounding box of the active coordinates
    /// (R^2 for points, R^4 for correspondences).
    double bounding_box_diagonal() const {
        if (data.empty()) return 0.0;
        const int dim = coords == Coords::Points2D ? 2 : 4;
        double lo[4], hi[4];
        for (int c = 0; c < dim; ++c) {
            lo[c] = std::numeric_limits<double>::infinity();
            hi[c] = -std::numeric_limits<double>::infinity();
        }
        for (const Datum& d : data) {
            const double v[4] = {d.x1, d.y1, d.x2, d.y2};
            for (int c = 0; c < dim; ++c) {
                lo[c] = std::min(lo[c], v[c]);
                hi[c] = std::max(hi[c], v[c]);
            }
        }
        double s = 0.0;
        for (int c = 0; c < dim; ++c) s += (hi[c] - lo[c]) * (hi[c] - lo[c]);
        return std::sqrt(s);
    }
};

/// Squared distance between two data in the active coordinate space.
inline double spatial_distance_sq(const DataSet& ds, int a, int b) {
    const Datum& p = ds.data[a];
    const Datum& q = ds.data[b];
    double s = (p.x1 - q.x1) * (p.x1 - q.x1) + (p.y1 - q.y1) * (p.y1 - q.y1);
    if (ds.coords == DataSet::Coords::Correspondences)
        s += (p.x2 - q.x2) * (p.x2 - q.x2) + (p.y2 - q.y2) * (p.y2 - q.y2);
    return s;
}

}  // namespace itksf
