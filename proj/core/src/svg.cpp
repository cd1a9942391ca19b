#include "itksf/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "itksf/error.hpp"

namespace itksf {

namespace {

constexpr double kCanvas = 800.0;
constexpr double kMargin = 40.0;

const char* kPalette[] = {"#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00",
                          "#a65628", "#f781bf", "#17becf", "#bcbd22", "#2ca02c"};
constexpr int kPaletteSize = 10;

struct Box {
    double min_x = 0.0, min_y = 0.0, max_x = 1.0, max_y = 1.0;
};

Box data_box(const DataSet& data) {
    Box b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const Datum& d : data.data) {
        b.min_x = std::min(b.min_x, d.x1);
        b.min_y = std::min(b.min_y, d.y1);
        b.max_x = std::max(b.max_x, d.x1);
        b.max_y = std::max(b.max_y, d.y1);
    }
    if (data.data.empty() || b.min_x >= b.max_x || b.min_y >= b.max_y)
        return Box{0.0, 0.0, 1.0, 1.0};
    return b;
}

/// Intersections of a x + b y + c = 0 with the box edges, if two exist.
bool clip_line_to_box(const Eigen::VectorXd& p, const Box& box, double pts[4]) {
    const double a = p(0), b = p(1), c = p(2);
    double found[8];
    int n = 0;
    const auto push = [&](double x, double y) {
        for (int i = 0; i < n; ++i)
            if (std::abs(found[2 * i] - x) < 1e-12 && std::abs(found[2 * i + 1] - y) < 1e-12)
                return;
        if (n < 4) {
            found[2 * n] = x;
            found[2 * n + 1] = y;
            ++n;
        }
    };
    if (std::abs(b) > 1e-15) {
        for (double x : {box.min_x, box.max_x}) {
            const double y = -(a * x + c) / b;
            if (y >= box.min_y - 1e-9 && y <= box.max_y + 1e-9) push(x, y);
        }
    }
    if (std::abs(a) > 1e-15) {
        for (double y : {box.min_y, box.max_y}) {
            const double x = -(b * y + c) / a;
            if (x >= box.min_x - 1e-9 && x <= box.max_x + 1e-9) push(x, y);
        }
    }
    if (n < 2) return false;
    int best_i = 0, best_j = 1;
    double best_d = -1.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double dx = found[2 * i] - found[2 * j];
            const double dy = found[2 * i + 1] - found[2 * j + 1];
            const double d = dx * dx + dy * dy;
            if (d > best_d) {
                best_d = d;
                best_i = i;
                best_j = j;
            }
        }
    pts[0] = found[2 * best_i];
    pts[1] = found[2 * best_i + 1];
    pts[2] = found[2 * best_j];
    pts[3] = found[2 * best_j + 1];
    return true;
}

}  // namespace

void write_svg(const std::string& path, const DataSet& data,
               const std::vector<StructureEstimate>& structures) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");

    const Box box = data_box(data);
    const double span = std::max(box.max_x - box.min_x, box.max_y - box.min_y);
    const double scale = (kCanvas - 2.0 * kMargin) / span;
    const auto sx = [&](double x) { return kMargin + (x - box.min_x) * scale; };
    const auto sy = [&](double y) { return kCanvas - kMargin - (y - box.min_y) * scale; };

    std::vector<int> color(data.data.size(), -1);
    bool assigned = false;
    for (std::size_t s = 0; s < structures.size(); ++s)
        if (structures[s].inliers) {
            assigned = true;
            for (int i : *structures[s].inliers)
                color[static_cast<std::size_t>(i)] = static_cast<int>(s);
        }
    if (!assigned)
        for (std::size_t i = 0; i < data.data.size(); ++i)
            if (data.data[i].label && *data.data[i].label > 0)
                color[i] = (*data.data[i].label - 1) % kPaletteSize;

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvas << "\" height=\""
        << kCanvas << "\" viewBox=\"0 0 " << kCanvas << " " << kCanvas << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    out.precision(8);
    for (std::size_t i = 0; i < data.data.size(); ++i) {
        const char* fill = color[i] >= 0 ? kPalette[color[i] % kPaletteSize] : "#999999";
        out << "<circle cx=\"" << sx(data.data[i].x1) << "\" cy=\"" << sy(data.data[i].y1)
            << "\" r=\"3\" fill=\"" << fill << "\" fill-opacity=\"0.75\"/>\n";
    }

    if (data.coords == DataSet::Coords::Points2D) {
        for (std::size_t s = 0; s < structures.size(); ++s) {
            const Model& model = structures[s].model;
            if (model.kind != ModelKind::Line2D || !model.valid()) continue;
            double pts[4];
            if (!clip_line_to_box(model.params, box, pts)) continue;
            out << "<line x1=\"" << sx(pts[0]) << "\" y1=\"" << sy(pts[1]) << "\" x2=\""
                << sx(pts[2]) << "\" y2=\"" << sy(pts[3]) << "\" stroke=\""
                << kPalette[s % kPaletteSize] << "\" stroke-width=\"2.5\"/>\n";
        }
    }
    out << "</svg>\n";
}

}  // namespace itksf
