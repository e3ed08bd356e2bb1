#pragma once

#include <utility>
#include <vector>

#include "acpd/multi_index.hpp"
#include "acpd/types.hpp"

namespace acpd {

/// Vector-valued truncated Taylor expansion about a fixed center c:
///   A(y) = sum_{|alpha| <= q} a_alpha (y-c)^alpha / alpha!
/// Coefficients are stored per order: blocks[r] is d x C_{d,r}, one column per
/// degree-r monomial in layout order. Immutable value type after construction.
class AnalyticMap {
public:
    /// Zero map of the given dimension and order.
    AnalyticMap(int dim, int order, Vector center);

    /// From explicit per-order blocks; block r must be d x C_{d,r}.
    AnalyticMap(Vector center, std::vector<Matrix> blocks);

    /// A(y) = y for all y. Requires order >= 1.
    static AnalyticMap identity(int dim, int order, Vector center);

    /// First-order map with A(y) = B y + b.
    static AnalyticMap from_affine(const Matrix& linear, const Vector& offset, Vector center);

    /// From a flattened d x S_{d,q} coefficient matrix in layout order.
    static AnalyticMap from_coefficients(int dim, int order, Vector center, const Matrix& coeffs);

    int dim() const { return dim_; }
    int order() const { return order_; }
    const Vector& center() const { return center_; }
    const std::vector<Matrix>& blocks() const { return blocks_; }
    const Matrix& block(int degree) const;

    /// Flattened d x S_{d,q} coefficient matrix, blocks concatenated in layout order.
    Matrix coefficients() const;

    Vector operator()(const Vector& y) const;
    PointSet apply(const PointSet& pts) const;

    /// (B, b) with A(y) = B y + b; requires order == 1.
    std::pair<Matrix, Vector> as_affine() const;

    /// Same map embedded in a higher-order coefficient space (new blocks zero).
    AnalyticMap extended(int new_order) const;

private:
    int dim_;
    int order_;
    Vector center_;
    std::vector<Matrix> blocks_;
};

/// Certifies the composition degree bound numerically: fits a single map of order
/// fit_order (default q_inner * q_outer) to pairs (s, outer(inner(s))) by unweighted
/// least squares and returns the maximum pointwise fitting residual. Requires at
/// least basis_size(d, fit_order) samples.
double compose_sampled_degree_check(const AnalyticMap& inner, const AnalyticMap& outer,
                                    const PointSet& samples, int fit_order = -1);

}  // namespace acpd
