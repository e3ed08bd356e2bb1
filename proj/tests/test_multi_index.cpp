#include "doctest.h"

#include <cmath>

#include "acpd/multi_index.hpp"
#include "test_support.hpp"

using namespace acpd;

namespace {

// Independent per-index oracle: (y - c)^alpha / alpha! by direct powers.
double basis_entry_oracle(const MultiIndex& alpha, const Vector& y, const Vector& c) {
    double value = 1.0;
    for (std::size_t l = 0; l < alpha.exponents.size(); ++l) {
        value *= std::pow(y[static_cast<Index>(l)] - c[static_cast<Index>(l)],
                          alpha.exponents[l]);
        for (int i = 2; i <= alpha.exponents[l]; ++i) value /= i;
    }
    return value;
}

}  // namespace

TEST_CASE("monomial and basis counts") {
    CHECK(monomial_count(2, 2) == 3);
    CHECK(monomial_count(3, 2) == 6);

    long long sum = 0;
    for (int r = 0; r <= 10; ++r) sum += monomial_count(3, r);
    CHECK(sum == 286);

    CHECK(basis_size(2, 2) == 6);
    CHECK(basis_size(2, 10) == 66);
    CHECK(basis_size(3, 10) == 286);
    CHECK(param_count(2, 10) == 132);
    CHECK(param_count(3, 10) == 858);
    for (int d = 1; d <= 3; ++d) CHECK(param_count(d, 0) == d);

    CHECK_THROWS_AS((void)monomial_count(0, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)basis_size(2, -1), std::invalid_argument);
}

TEST_CASE("layout enumerates basis_size indices grouped by degree") {
    for (int d = 1; d <= 3; ++d) {
        for (int q = 0; q <= 12; ++q) {
            const BasisLayout layout(d, q);
            CHECK(layout.size() == basis_size(d, q));
            for (int r = 0; r <= q; ++r) {
                const Index group = layout.degree_offset(r + 1) - layout.degree_offset(r);
                CHECK(group == monomial_count(d, r));
                for (Index i = layout.degree_offset(r); i < layout.degree_offset(r + 1); ++i) {
                    CHECK(layout.indices()[static_cast<std::size_t>(i)].order() == r);
                }
            }
        }
    }
}

TEST_CASE("layout construction is deterministic") {
    const BasisLayout a(3, 7);
    const BasisLayout b(3, 7);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.indices().size(); ++i) {
        CHECK(a.indices()[i] == b.indices()[i]);
    }
}

TEST_CASE("second-order 2D basis matches the explicit form") {
    const BasisLayout layout(2, 2);
    const Vector y = (Vector(2) << 1.3, -0.4).finished();
    const Vector c = (Vector(2) << 0.1, 0.2).finished();
    const double d1 = y[0] - c[0];
    const double d2 = y[1] - c[1];
    const Vector phi = layout.eval(y, c);
    REQUIRE(phi.size() == 6);
    CHECK(phi[0] == doctest::Approx(1.0));
    CHECK(phi[1] == doctest::Approx(d1));
    CHECK(phi[2] == doctest::Approx(d2));
    CHECK(phi[3] == doctest::Approx(0.5 * d1 * d1));
    CHECK(phi[4] == doctest::Approx(d1 * d2));
    CHECK(phi[5] == doctest::Approx(0.5 * d2 * d2));
}

TEST_CASE("basis at the center is the first unit vector") {
    const BasisLayout layout(3, 5);
    const Vector c = (Vector(3) << 0.5, -1.0, 2.0).finished();
    const Vector phi = layout.eval(c, c);
    CHECK(phi[0] == 1.0);
    CHECK(phi.tail(phi.size() - 1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("basis entries match the per-index oracle") {
    const BasisLayout layout(3, 4);
    auto rng = testing::make_rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        const Vector y = testing::random_vector(rng, 3, -2.0, 2.0);
        const Vector c = testing::random_vector(rng, 3, -1.0, 1.0);
        const Vector phi = layout.eval(y, c);
        for (Index i = 0; i < layout.size(); ++i) {
            const double expected =
                basis_entry_oracle(layout.indices()[static_cast<std::size_t>(i)], y, c);
            CHECK(phi[i] == doctest::Approx(expected).epsilon(1e-14));
        }
    }
}

TEST_CASE("finite differences of order q+1 vanish along each axis") {
    // Each basis entry is a polynomial of total degree <= q, so the (q+1)-th
    // forward difference on an integer grid is identically zero.
    for (int d = 1; d <= 3; ++d) {
        const int q = 4;
        const BasisLayout layout(d, q);
        const Vector c = Vector::Zero(d);
        for (int axis = 0; axis < d; ++axis) {
            Vector diff = Vector::Zero(layout.size());
            long long coeff = 1;
            for (int j = 0; j <= q + 1; ++j) {
                Vector y = Vector::Constant(d, 0.5);
                y[axis] += j;
                const double sign = (j % 2 == 0) ? 1.0 : -1.0;
                diff += sign * static_cast<double>(coeff) * layout.eval(y, c);
                coeff = coeff * (q + 1 - j) / (j + 1);
            }
            CHECK(diff.cwiseAbs().maxCoeff() < 1e-9);
        }
    }
}

TEST_CASE("design matrix rows are basis evaluations") {
    const BasisLayout layout(2, 3);
    auto rng = testing::make_rng(3);
    const Matrix pts = testing::random_matrix(rng, 8, 2);
    const Vector c = Vector::Zero(2);
    const Matrix design = taylor_design_matrix(pts, c, layout);
    REQUIRE(design.rows() == 8);
    REQUIRE(design.cols() == layout.size());
    for (Index m = 0; m < 8; ++m) {
        CHECK((design.row(m).transpose() - layout.eval(pts.row(m).transpose(), c))
                  .cwiseAbs()
                  .maxCoeff() == 0.0);
    }
}
