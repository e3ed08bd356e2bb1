#include "acpd/analytic_map.hpp"

#include <Eigen/QR>

namespace acpd {

AnalyticMap::AnalyticMap(int dim, int order, Vector center)
    : dim_(dim), order_(order), center_(std::move(center)) {
    detail::require(dim >= 1, "AnalyticMap: dim must be >= 1");
    detail::require(order >= 0, "AnalyticMap: order must be >= 0");
    detail::require(center_.size() == dim, "AnalyticMap: center dimension mismatch");
    blocks_.reserve(static_cast<std::size_t>(order) + 1);
    for (int r = 0; r <= order; ++r) {
        blocks_.push_back(Matrix::Zero(dim, monomial_count(dim, r)));
    }
}

AnalyticMap::AnalyticMap(Vector center, std::vector<Matrix> blocks)
    : dim_(static_cast<int>(center.size())),
      order_(static_cast<int>(blocks.size()) - 1),
      center_(std::move(center)),
      blocks_(std::move(blocks)) {
    detail::require(!blocks_.empty(), "AnalyticMap: at least the order-0 block is required");
    for (int r = 0; r <= order_; ++r) {
        const Matrix& b = blocks_[static_cast<std::size_t>(r)];
        detail::require(b.rows() == dim_ && b.cols() == monomial_count(dim_, r),
                        "AnalyticMap: block " + std::to_string(r) + " has wrong shape");
    }
}

AnalyticMap AnalyticMap::identity(int dim, int order, Vector center) {
    detail::require(order >= 1, "identity map requires order >= 1");
    AnalyticMap map(dim, order, std::move(center));
    map.blocks_[0].col(0) = map.center_;      // constant term: A(c) = c
    map.blocks_[1] = Matrix::Identity(dim, dim);  // degree-1 columns follow e_1..e_d
    return map;
}

AnalyticMap AnalyticMap::from_affine(const Matrix& linear, const Vector& offset, Vector center) {
    const int d = static_cast<int>(center.size());
    detail::require(linear.rows() == d && linear.cols() == d && offset.size() == d,
                    "from_affine: dimension mismatch");
    AnalyticMap map(d, 1, std::move(center));
    map.blocks_[0].col(0) = linear * map.center_ + offset;
    map.blocks_[1] = linear;
    return map;
}

AnalyticMap AnalyticMap::from_coefficients(int dim, int order, Vector center, const Matrix& coeffs) {
    detail::require(coeffs.rows() == dim && coeffs.cols() == basis_size(dim, order),
                    "from_coefficients: coefficient matrix has wrong shape");
    AnalyticMap map(dim, order, std::move(center));
    const BasisLayout& layout = basis_layout(dim, order);
    for (int r = 0; r <= order; ++r) {
        const Index begin = layout.degree_offset(r);
        const Index count = layout.degree_offset(r + 1) - begin;
        map.blocks_[static_cast<std::size_t>(r)] = coeffs.middleCols(begin, count);
    }
    return map;
}

const Matrix& AnalyticMap::block(int degree) const {
    detail::require(degree >= 0 && degree <= order_, "block: degree out of range");
    return blocks_[static_cast<std::size_t>(degree)];
}

Matrix AnalyticMap::coefficients() const {
    Matrix coeffs(dim_, basis_size(dim_, order_));
    Index col = 0;
    for (const Matrix& b : blocks_) {
        coeffs.middleCols(col, b.cols()) = b;
        col += b.cols();
    }
    return coeffs;
}

Vector AnalyticMap::operator()(const Vector& y) const {
    detail::require(y.size() == dim_, "AnalyticMap: point dimension mismatch");
    return coefficients() * basis_layout(dim_, order_).eval(y, center_);
}

PointSet AnalyticMap::apply(const PointSet& pts) const {
    detail::require(pts.dim() == dim_, "AnalyticMap::apply: dimension mismatch");
    const BasisLayout& layout = basis_layout(dim_, order_);
    const Matrix design = taylor_design_matrix(pts.coords, center_, layout);
    return PointSet(design * coefficients().transpose());
}

std::pair<Matrix, Vector> AnalyticMap::as_affine() const {
    detail::require(order_ == 1, "as_affine requires a first-order map");
    const Matrix& linear = blocks_[1];                       // columns a_{e_l}
    const Vector offset = blocks_[0].col(0) - linear * center_;
    return {linear, offset};
}

AnalyticMap AnalyticMap::extended(int new_order) const {
    detail::require(new_order >= order_, "extended: new order must not shrink the map");
    AnalyticMap map(dim_, new_order, center_);
    for (int r = 0; r <= order_; ++r) {
        map.blocks_[static_cast<std::size_t>(r)] = blocks_[static_cast<std::size_t>(r)];
    }
    return map;
}

double compose_sampled_degree_check(const AnalyticMap& inner, const AnalyticMap& outer,
                                    const PointSet& samples, int fit_order) {
    detail::require(inner.dim() == outer.dim() && samples.dim() == inner.dim(),
                    "compose_sampled_degree_check: dimension mismatch");
    if (fit_order < 0) fit_order = inner.order() * outer.order();
    detail::require(samples.size() >= basis_size(samples.dim(), fit_order),
                    "compose_sampled_degree_check: insufficient samples for the composed order");

    const PointSet composed = outer.apply(inner.apply(samples));
    const BasisLayout& layout = basis_layout(samples.dim(), fit_order);
    const Matrix design = taylor_design_matrix(samples.coords, inner.center(), layout);
    const Matrix coeffs_t = design.colPivHouseholderQr().solve(composed.coords);

    const Matrix residual = composed.coords - design * coeffs_t;
    return residual.rowwise().norm().maxCoeff();
}

}  // namespace acpd
