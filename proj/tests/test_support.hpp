#pragma once

#include <random>

#include "acpd/types.hpp"

namespace acpd::testing {

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Matrix random_matrix(std::mt19937_64& rng, Index rows, Index cols,
                            double lo = -1.0, double hi = 1.0) {
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) m(i, j) = uniform(rng, lo, hi);
    }
    return m;
}

inline Vector random_vector(std::mt19937_64& rng, Index size, double lo = -1.0, double hi = 1.0) {
    return random_matrix(rng, size, 1, lo, hi).col(0);
}

inline PointSet random_points(std::mt19937_64& rng, Index count, int dim,
                              double lo = -1.0, double hi = 1.0) {
    return PointSet(random_matrix(rng, count, dim, lo, hi));
}

}  // namespace acpd::testing

#include "acpd/analytic_map.hpp"

namespace acpd::testing {

/// Zero-centered map with block-r entries uniform in +-scale / r!.
inline AnalyticMap random_map(std::mt19937_64& rng, int dim, int order, double scale) {
    std::vector<Matrix> blocks;
    double factorial = 1.0;
    for (int r = 0; r <= order; ++r) {
        if (r > 0) factorial *= r;
        blocks.push_back(random_matrix(rng, dim, monomial_count(dim, r),
                                       -scale / factorial, scale / factorial));
    }
    return AnalyticMap(Vector::Zero(dim), std::move(blocks));
}

}  // namespace acpd::testing
