#include "doctest.h"

#include <cmath>

#include "acpd/analytic_map.hpp"
#include "test_support.hpp"

using namespace acpd;

namespace {

// Direct multi-index summation oracle for map evaluation.
Vector apply_oracle(const AnalyticMap& map, const Vector& y) {
    const BasisLayout& layout = basis_layout(map.dim(), map.order());
    Vector out = Vector::Zero(map.dim());
    const Matrix coeffs = map.coefficients();
    for (Index i = 0; i < layout.size(); ++i) {
        const auto& alpha = layout.indices()[static_cast<std::size_t>(i)].exponents;
        double term = 1.0;
        for (std::size_t l = 0; l < alpha.size(); ++l) {
            term *= std::pow(y[static_cast<Index>(l)] - map.center()[static_cast<Index>(l)],
                             alpha[l]);
            for (int f = 2; f <= alpha[l]; ++f) term /= f;
        }
        out += term * coeffs.col(i);
    }
    return out;
}

}  // namespace

TEST_CASE("identity map leaves points unchanged") {
    auto rng = testing::make_rng(5);
    SUBCASE("origin center, 2D") {
        const AnalyticMap id = AnalyticMap::identity(2, 1, Vector::Zero(2));
        const PointSet pts = testing::random_points(rng, 30, 2);
        CHECK((id.apply(pts).coords - pts.coords).cwiseAbs().maxCoeff() < 1e-15);
    }
    SUBCASE("shifted center, 3D, higher order") {
        const Vector c = (Vector(3) << 1.0, 2.0, 3.0).finished();
        const AnalyticMap id = AnalyticMap::identity(3, 4, c);
        CHECK((id(c) - c).cwiseAbs().maxCoeff() < 1e-15);
        const PointSet pts = testing::random_points(rng, 30, 3);
        CHECK((id.apply(pts).coords - pts.coords).cwiseAbs().maxCoeff() < 1e-15);
    }
    CHECK_THROWS_AS((void)AnalyticMap::identity(2, 0, Vector::Zero(2)), std::invalid_argument);
}

TEST_CASE("order-0 map is constant") {
    AnalyticMap map(2, 0, Vector::Zero(2));
    std::vector<Matrix> blocks{(Matrix(2, 1) << 3.0, -1.0).finished()};
    const AnalyticMap constant(Vector::Zero(2), std::move(blocks));
    auto rng = testing::make_rng(6);
    const PointSet pts = testing::random_points(rng, 10, 2);
    const PointSet out = constant.apply(pts);
    for (Index m = 0; m < out.size(); ++m) {
        CHECK(out.coords(m, 0) == doctest::Approx(3.0));
        CHECK(out.coords(m, 1) == doctest::Approx(-1.0));
    }
}

TEST_CASE("apply matches the term-by-term summation oracle") {
    auto rng = testing::make_rng(9);
    AnalyticMap map = testing::random_map(rng, 2, 3, 0.8);
    const PointSet pts = testing::random_points(rng, 50, 2);
    const PointSet applied = map.apply(pts);
    for (Index m = 0; m < pts.size(); ++m) {
        const Vector expected = apply_oracle(map, pts.point(m));
        CHECK((applied.point(m) - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("evaluation at the center is the constant coefficient") {
    auto rng = testing::make_rng(10);
    const AnalyticMap map = testing::random_map(rng, 3, 3, 0.5);
    CHECK((map(map.center()) - map.block(0).col(0)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("as_affine extracts (B, b)") {
    SUBCASE("identity") {
        const AnalyticMap id = AnalyticMap::identity(2, 1, Vector::Zero(2));
        auto [b_mat, b_vec] = id.as_affine();
        CHECK((b_mat - Matrix::Identity(2, 2)).norm() == 0.0);
        CHECK(b_vec.norm() == 0.0);
    }
    SUBCASE("translation with non-trivial center") {
        const Vector c = (Vector(2) << 0.3, -0.2).finished();
        const Vector t = (Vector(2) << 1.5, 2.5).finished();
        AnalyticMap map = AnalyticMap::identity(2, 1, c);
        std::vector<Matrix> blocks = map.blocks();
        blocks[0].col(0) = c + t;
        const AnalyticMap translation(c, std::move(blocks));
        auto [b_mat, b_vec] = translation.as_affine();
        CHECK((b_mat - Matrix::Identity(2, 2)).norm() < 1e-15);
        CHECK((b_vec - t).cwiseAbs().maxCoeff() < 1e-15);
    }
    SUBCASE("random first-order map agrees pointwise and round-trips") {
        auto rng = testing::make_rng(12);
        const Matrix lin = testing::random_matrix(rng, 3, 3);
        const Vector off = testing::random_vector(rng, 3);
        const Vector c = testing::random_vector(rng, 3);
        const AnalyticMap map = AnalyticMap::from_affine(lin, off, c);
        for (int rep = 0; rep < 20; ++rep) {
            const Vector y = testing::random_vector(rng, 3, -2.0, 2.0);
            CHECK((map(y) - (lin * y + off)).norm() < 1e-12);
        }
        auto [b_mat, b_vec] = map.as_affine();
        CHECK((b_mat - lin).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((b_vec - off).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("rejects higher order") {
        const AnalyticMap map(2, 2, Vector::Zero(2));
        CHECK_THROWS_AS((void)map.as_affine(), std::invalid_argument);
    }
}

TEST_CASE("coefficients round-trip through from_coefficients") {
    auto rng = testing::make_rng(14);
    const AnalyticMap map = testing::random_map(rng, 2, 4, 0.7);
    const AnalyticMap rebuilt =
        AnalyticMap::from_coefficients(2, 4, map.center(), map.coefficients());
    CHECK((rebuilt.coefficients() - map.coefficients()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("composition of affine maps is affine") {
    auto rng = testing::make_rng(15);
    const AnalyticMap inner = testing::random_map(rng, 2, 1, 0.5);
    const AnalyticMap outer = testing::random_map(rng, 2, 1, 0.5);
    const PointSet samples = testing::random_points(rng, 25, 2);
    CHECK(compose_sampled_degree_check(inner, outer, samples, 1) < 1e-10);
}

TEST_CASE("composition degree bound holds at q_inner * q_outer") {
    auto rng = testing::make_rng(16);
    const AnalyticMap inner = testing::random_map(rng, 2, 2, 0.3);
    const AnalyticMap outer = testing::random_map(rng, 2, 2, 0.3);

    // 6x6 grid covers basis_size(2, 4) = 15 samples.
    Matrix grid(36, 2);
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
            grid(i * 6 + j, 0) = -1.0 + 0.4 * i;
            grid(i * 6 + j, 1) = -1.0 + 0.4 * j;
        }
    }
    const PointSet samples(grid);
    const double at_bound = compose_sampled_degree_check(inner, outer, samples);
    CHECK(at_bound < 1e-8);

    // One order below the bound cannot represent a generic composition.
    const double below = compose_sampled_degree_check(inner, outer, samples, 3);
    CHECK(below > at_bound);
    CHECK(below > 1e-8);
}

TEST_CASE("composition check rejects insufficient samples") {
    auto rng = testing::make_rng(17);
    const AnalyticMap inner = testing::random_map(rng, 2, 2, 0.3);
    const AnalyticMap outer = testing::random_map(rng, 2, 3, 0.3);
    const PointSet samples = testing::random_points(rng, 10, 2);  // < basis_size(2, 6) = 28
    CHECK_THROWS_AS((void)compose_sampled_degree_check(inner, outer, samples),
                    std::invalid_argument);
}

TEST_CASE("apply is polynomial: (q+1)-th axis differences vanish") {
    auto rng = testing::make_rng(18);
    const int q = 3;
    const AnalyticMap map = testing::random_map(rng, 2, q, 0.4);
    for (int axis = 0; axis < 2; ++axis) {
        Vector diff = Vector::Zero(2);
        long long coeff = 1;
        for (int j = 0; j <= q + 1; ++j) {
            Vector y = (Vector(2) << 0.1, -0.2).finished();
            y[axis] += 0.3 * j;
            const double sign = (j % 2 == 0) ? 1.0 : -1.0;
            diff += sign * static_cast<double>(coeff) * map(y);
            coeff = coeff * (q + 1 - j) / (j + 1);
        }
        CHECK(diff.cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("extended maps keep their action and gain zero blocks") {
    auto rng = testing::make_rng(19);
    const AnalyticMap map = testing::random_map(rng, 2, 2, 0.5);
    const AnalyticMap wide = map.extended(5);
    CHECK(wide.order() == 5);
    const PointSet pts = testing::random_points(rng, 20, 2);
    CHECK((wide.apply(pts).coords - map.apply(pts).coords).cwiseAbs().maxCoeff() == 0.0);
    for (int r = 3; r <= 5; ++r) CHECK(wide.block(r).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS((void)map.extended(1), std::invalid_argument);
}
