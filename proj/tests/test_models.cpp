#include <doctest.h>

#include <array>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "itksf/error.hpp"
#include "itksf/models.hpp"

using namespace itksf;

namespace {

DataSet points(std::vector<std::pair<double, double>> pts) {
    DataSet ds;
    ds.coords = DataSet::Coords::Points2D;
    for (auto [x, y] : pts) ds.data.push_back(Datum{x, y, 0.0, 0.0, std::nullopt});
    return ds;
}

DataSet matches(std::vector<std::array<double, 4>> rows) {
    DataSet ds;
    ds.coords = DataSet::Coords::Correspondences;
    for (auto r : rows) ds.data.push_back(Datum{r[0], r[1], r[2], r[3], std::nullopt});
    return ds;
}

}  // namespace

TEST_CASE("model kind names round-trip") {
    CHECK(to_string(ModelKind::Line2D) == "line");
    CHECK(to_string(ModelKind::Homography) == "homography");
    CHECK(to_string(ModelKind::FundamentalMatrix) == "fundamental");
    CHECK(model_kind_from_string("line") == ModelKind::Line2D);
    CHECK(model_kind_from_string("homography") == ModelKind::Homography);
    CHECK(model_kind_from_string("fundamental") == ModelKind::FundamentalMatrix);
    CHECK_THROWS_AS(model_kind_from_string("affine"), InvalidConfig);
}

TEST_CASE("minimal subset sizes") {
    CHECK(minimal_subset_size(ModelKind::Line2D) == 2);
    CHECK(minimal_subset_size(ModelKind::Homography) == 4);
    CHECK(minimal_subset_size(ModelKind::FundamentalMatrix) == 8);
}

TEST_CASE("line through two points on the x axis") {
    const DataSet ds = points({{0.0, 0.0}, {2.0, 0.0}});
    const std::vector<int> subset{0, 1};
    const Model m = fit(ModelKind::Line2D, ds, subset);
    REQUIRE(m.params.size() == 3);
    CHECK(m.params[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(m.params[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.params[2] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(residual(m, Datum{1.0, 0.5, 0, 0, {}}) == doctest::Approx(0.5));
    CHECK(residual(m, Datum{3.0, -2.0, 0, 0, {}}) == doctest::Approx(2.0));
}

TEST_CASE("total least squares line through collinear points, sign convention") {
    const DataSet ds = points({{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}, {3.0, 3.0}});
    const std::vector<int> subset{0, 1, 2, 3};
    const Model m = fit(ModelKind::Line2D, ds, subset);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(m.params[0] == doctest::Approx(s).epsilon(1e-12));
    CHECK(m.params[1] == doctest::Approx(-s).epsilon(1e-12));
    CHECK(m.params[2] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(residual(m, Datum{0.0, 1.0, 0, 0, {}}) == doctest::Approx(s));
    for (int i = 0; i < ds.size(); ++i) CHECK(residual(m, ds.data[i]) < 1e-12);
}

TEST_CASE("fit is invariant to subset ordering") {
    const DataSet ds = points({{0.0, 0.1}, {1.0, 0.9}, {2.0, 2.05}, {3.0, 2.95}, {4.0, 4.1}});
    const std::vector<int> fwd{0, 1, 2, 3, 4};
    const std::vector<int> rev{4, 2, 0, 3, 1};
    const Model a = fit(ModelKind::Line2D, ds, fwd);
    const Model b = fit(ModelKind::Line2D, ds, rev);
    CHECK(std::abs(a.params.dot(b.params)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("identity homography from four self-matched corners") {
    const DataSet ds = matches({{0, 0, 0, 0}, {1, 0, 1, 0}, {0, 1, 0, 1}, {1, 1, 1, 1}});
    const std::vector<int> subset{0, 1, 2, 3};
    const Model m = fit(ModelKind::Homography, ds, subset);
    REQUIRE(m.params.size() == 9);
    const double s = 1.0 / std::sqrt(3.0);
    const double want[9] = {s, 0, 0, 0, s, 0, 0, 0, s};
    for (int i = 0; i < 9; ++i) CHECK(m.params[i] == doctest::Approx(want[i]).epsilon(1e-9));
    CHECK(residual(m, Datum{1.0, 2.0, 1.0, 2.5, {}}) ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
    CHECK(residual(m, Datum{0.3, 0.4, 0.3, 0.4, {}}) < 1e-9);
}

TEST_CASE("fundamental matrix from a sideways translation with depth parallax") {
    // x2 = x1 + 0.3/Z with per-point depths; equal disparities would make the
    // matches homography-consistent and the model non-unique.
    DataSet ds = matches({{0.1, 0.2, 0.50, 0.2},
                          {0.9, 0.1, 1.05, 0.1},
                          {0.4, 0.7, 0.70, 0.7},
                          {0.8, 0.8, 1.00, 0.8},
                          {0.2, 0.5, 0.65, 0.5},
                          {0.6, 0.3, 0.85, 0.3},
                          {0.3, 0.9, 0.65, 0.9},
                          {0.7, 0.6, 0.80, 0.6}});
    const std::vector<int> subset{0, 1, 2, 3, 4, 5, 6, 7};
    const Model m = fit(ModelKind::FundamentalMatrix, ds, subset);
    for (const Datum& d : ds.data) CHECK(residual(m, d) < 1e-9);
    // shifting the second image vertically by 0.2 gives Sampson distance 0.2/sqrt(2)
    CHECK(residual(m, Datum{0.5, 0.5, 0.8, 0.7, {}}) ==
          doctest::Approx(0.2 / std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("degenerate subsets are detected and rejected") {
    SUBCASE("coincident points for a line") {
        const DataSet ds = points({{1.0, 1.0}, {1.0, 1.0}, {2.0, 3.0}});
        const std::vector<int> subset{0, 1};
        CHECK(is_degenerate(ModelKind::Line2D, ds, subset));
        CHECK_THROWS_AS(fit(ModelKind::Line2D, ds, subset), DegenerateSubset);
        const std::vector<int> ok{0, 2};
        CHECK_FALSE(is_degenerate(ModelKind::Line2D, ds, ok));
    }
    SUBCASE("three collinear points for a homography") {
        const DataSet ds =
            matches({{0, 0, 0, 0}, {1, 1, 1, 1}, {2, 2, 2, 2}, {0, 1, 0, 1}});
        const std::vector<int> subset{0, 1, 2, 3};
        CHECK(is_degenerate(ModelKind::Homography, ds, subset));
        CHECK_THROWS_AS(fit(ModelKind::Homography, ds, subset), DegenerateSubset);
    }
    SUBCASE("duplicated correspondences for a fundamental matrix") {
        const DataSet ds = matches({{0.1, 0.2, 0.4, 0.2},
                                    {0.1, 0.2, 0.4, 0.2},
                                    {0.4, 0.7, 0.7, 0.7},
                                    {0.8, 0.8, 1.1, 0.8},
                                    {0.2, 0.5, 0.5, 0.5},
                                    {0.6, 0.3, 0.9, 0.3},
                                    {0.3, 0.9, 0.6, 0.9},
                                    {0.7, 0.6, 1.0, 0.6}});
        const std::vector<int> subset{0, 1, 2, 3, 4, 5, 6, 7};
        CHECK(is_degenerate(ModelKind::FundamentalMatrix, ds, subset));
        CHECK_THROWS_AS(fit(ModelKind::FundamentalMatrix, ds, subset), DegenerateSubset);
    }
    SUBCASE("wrong subset size for the degeneracy test") {
        const DataSet ds = points({{0, 0}, {1, 1}, {2, 0}});
        const std::vector<int> subset{0, 1, 2};
        CHECK_THROWS_AS(is_degenerate(ModelKind::Line2D, ds, subset), DimensionMismatch);
    }
}

TEST_CASE("fit rejects undersized subsets and non-finite coordinates") {
    const DataSet ds = points({{0, 0}, {1, 1}});
    const std::vector<int> one{0};
    CHECK_THROWS_AS(fit(ModelKind::Line2D, ds, one), DimensionMismatch);

    DataSet bad = points({{0, 0}, {1, 1}});
    bad.data[1].x1 = std::numeric_limits<double>::quiet_NaN();
    const std::vector<int> subset{0, 1};
    CHECK_THROWS_AS(fit(ModelKind::Line2D, bad, subset), NumericalFailure);
}

TEST_CASE("residual never throws on unusable models") {
    Model empty;
    empty.kind = ModelKind::Line2D;
    CHECK(std::isinf(residual(empty, Datum{1, 2, 0, 0, {}})));

    Model singular;
    singular.kind = ModelKind::Homography;
    singular.params.resize(9);
    singular.params << 1, 0, 0, 0, 1, 0, 0, 0, 0;
    singular.params.normalize();
    CHECK(std::isinf(residual(singular, Datum{1, 2, 1, 2, {}})));
}

TEST_CASE("residual_column matches per-datum residuals") {
    const DataSet ds = points({{0.0, 0.0}, {1.0, 0.2}, {2.0, -0.1}, {3.0, 0.4}, {0.5, 2.0}});
    const std::vector<int> subset{0, 2};
    const Model m = fit(ModelKind::Line2D, ds, subset);
    const Eigen::VectorXd col = residual_column(m, ds);
    REQUIRE(col.size() == ds.size());
    for (int i = 0; i < ds.size(); ++i)
        CHECK(col[i] == doctest::Approx(residual(m, ds.data[i])).epsilon(1e-14));
}
