#include "doctest.h"

#include <cmath>

#include "acpd/normalize.hpp"
#include "test_support.hpp"

using namespace acpd;

TEST_CASE("normalize_pair maps the symmetric singleton pair onto +-1") {
    PointSet fixed((Matrix(1, 2) << 2.0, 0.0).finished());
    PointSet moving((Matrix(1, 2) << 0.0, 0.0).finished());
    auto [nf, nm, t] = normalize_pair(fixed, moving);
    CHECK(nf.coords(0, 0) == doctest::Approx(1.0));
    CHECK(nf.coords(0, 1) == doctest::Approx(0.0));
    CHECK(nm.coords(0, 0) == doctest::Approx(-1.0));
    CHECK(t.center[0] == doctest::Approx(1.0));
    CHECK(t.scale == doctest::Approx(1.0));
}

TEST_CASE("already-normalized input gets the identity transform") {
    PointSet fixed((Matrix(2, 2) << 1.0, 0.0, -1.0, 0.0).finished());
    PointSet moving((Matrix(2, 2) << 0.0, 0.5, 0.0, -0.5).finished());
    auto [nf, nm, t] = normalize_pair(fixed, moving);
    CHECK(t.center.norm() == doctest::Approx(0.0));
    CHECK(t.scale == doctest::Approx(1.0));
    CHECK((nf.coords - fixed.coords).norm() == doctest::Approx(0.0));
}

TEST_CASE("normalize_pair: union centroid at origin, max magnitude one, round trip") {
    auto rng = testing::make_rng(42);
    for (int rep = 0; rep < 10; ++rep) {
        const PointSet fixed = testing::random_points(rng, 17, 3, -30.0, 50.0);
        const PointSet moving = testing::random_points(rng, 11, 3, -30.0, 50.0);
        auto [nf, nm, t] = normalize_pair(fixed, moving);

        const Vector centroid =
            (nf.coords.colwise().sum() + nm.coords.colwise().sum()).transpose() /
            static_cast<double>(nf.size() + nm.size());
        CHECK(centroid.cwiseAbs().maxCoeff() < 1e-12);
        const double max_mag =
            std::max(nf.coords.cwiseAbs().maxCoeff(), nm.coords.cwiseAbs().maxCoeff());
        CHECK(max_mag == doctest::Approx(1.0).epsilon(1e-12));

        // round-trip oracle
        CHECK((denormalize(nf, t).coords - fixed.coords).cwiseAbs().maxCoeff() < 1e-12 * 50.0);
        CHECK((denormalize(nm, t).coords - moving.coords).cwiseAbs().maxCoeff() < 1e-12 * 50.0);
    }
}

TEST_CASE("normalize_pair degenerate input falls back to scale one") {
    PointSet fixed((Matrix(2, 2) << 3.0, 4.0, 3.0, 4.0).finished());
    PointSet moving((Matrix(1, 2) << 3.0, 4.0).finished());
    auto [nf, nm, t] = normalize_pair(fixed, moving);
    CHECK(t.scale == 1.0);
    CHECK(nf.coords.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("normalize_pair rejects bad input") {
    PointSet empty;
    PointSet p2((Matrix(1, 2) << 0.0, 0.0).finished());
    PointSet p3((Matrix(1, 3) << 0.0, 0.0, 0.0).finished());
    CHECK_THROWS_AS((void)normalize_pair(empty, p2), std::invalid_argument);
    CHECK_THROWS_AS((void)normalize_pair(p2, p3), std::invalid_argument);
}

TEST_CASE("denormalize applies center + scale * p") {
    NormalizationTransform t{(Vector(2) << 1.0, 1.0).finished(), 2.0};
    PointSet p((Matrix(1, 2) << 0.5, 0.0).finished());
    const PointSet q = denormalize(p, t);
    CHECK(q.coords(0, 0) == doctest::Approx(2.0));
    CHECK(q.coords(0, 1) == doctest::Approx(1.0));

    NormalizationTransform id{Vector::Zero(2), 1.0};
    CHECK((denormalize(p, id).coords - p.coords).norm() == 0.0);
}

TEST_CASE("rmse matches the direct definition") {
    PointSet a((Matrix(1, 2) << 0.0, 0.0).finished());
    PointSet b((Matrix(1, 2) << 3.0, 4.0).finished());
    CHECK(rmse(a, a) == 0.0);
    CHECK(rmse(a, b) == doctest::Approx(5.0));

    auto rng = testing::make_rng(7);
    const PointSet u = testing::random_points(rng, 100, 3);
    const PointSet v = testing::random_points(rng, 100, 3);
    // naive loop oracle
    double sum = 0.0;
    for (Index m = 0; m < u.size(); ++m) {
        sum += (u.point(m) - v.point(m)).squaredNorm();
    }
    const double expected = std::sqrt(sum / static_cast<double>(u.size()));
    CHECK(rmse(u, v) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(rmse(v, u) == doctest::Approx(rmse(u, v)));  // symmetry

    PointSet w((Matrix(2, 2) << 0.0, 0.0, 1.0, 1.0).finished());
    CHECK_THROWS_AS((void)rmse(a, w), std::invalid_argument);
}
