#include "acpd/multi_index.hpp"

#include <map>
#include <mutex>

namespace acpd {

namespace {

long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    long long result = 1;
    for (int i = 1; i <= k; ++i) {
        result = result * (n - k + i) / i;
    }
    return result;
}

// alpha! as an exact integer; orders stay small (q <= ~12, d <= 3).
long long factorial_of(const MultiIndex& alpha) {
    long long f = 1;
    for (int e : alpha.exponents) {
        for (int i = 2; i <= e; ++i) f *= i;
    }
    return f;
}

// All exponent tuples of exact degree r, lexicographically descending:
// leading exponent runs r..0, recursing on the remainder.
void enumerate_degree(int dim, int degree, std::vector<int>& prefix,
                      std::vector<MultiIndex>& out) {
    if (static_cast<int>(prefix.size()) == dim - 1) {
        prefix.push_back(degree);
        out.push_back(MultiIndex{prefix});
        prefix.pop_back();
        return;
    }
    for (int e = degree; e >= 0; --e) {
        prefix.push_back(e);
        enumerate_degree(dim, degree - e, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

int MultiIndex::order() const {
    int total = 0;
    for (int e : exponents) total += e;
    return total;
}

long long monomial_count(int dim, int degree) {
    detail::require(dim >= 1, "monomial_count: dim must be >= 1");
    detail::require(degree >= 0, "monomial_count: degree must be >= 0");
    return binomial(degree + dim - 1, dim - 1);
}

long long basis_size(int dim, int order) {
    detail::require(dim >= 1, "basis_size: dim must be >= 1");
    detail::require(order >= 0, "basis_size: order must be >= 0");
    return binomial(order + dim, dim);
}

long long param_count(int dim, int order) {
    return static_cast<long long>(dim) * basis_size(dim, order);
}

BasisLayout::BasisLayout(int dim, int order) : dim_(dim), order_(order) {
    detail::require(dim >= 1, "BasisLayout: dim must be >= 1");
    detail::require(order >= 0, "BasisLayout: order must be >= 0");

    indices_.reserve(static_cast<std::size_t>(basis_size(dim, order)));
    offsets_.resize(order + 2, 0);
    std::vector<int> prefix;
    for (int r = 0; r <= order; ++r) {
        offsets_[r] = static_cast<Index>(indices_.size());
        enumerate_degree(dim, r, prefix, indices_);
    }
    offsets_[order + 1] = static_cast<Index>(indices_.size());

    inv_factorial_.resize(size());
    for (Index i = 0; i < size(); ++i) {
        inv_factorial_[i] = 1.0 / static_cast<double>(factorial_of(indices_[static_cast<std::size_t>(i)]));
    }
}

Index BasisLayout::degree_offset(int degree) const {
    detail::require(degree >= 0 && degree <= order_ + 1, "degree_offset: degree out of range");
    return offsets_[static_cast<std::size_t>(degree)];
}

Vector BasisLayout::eval(const Vector& y, const Vector& center) const {
    detail::require(y.size() == dim_ && center.size() == dim_,
                    "eval_basis: dimension mismatch with layout");
    const Vector delta = y - center;

    // Powers delta_l^e for e = 0..order, reused across indices.
    Matrix powers(dim_, order_ + 1);
    powers.col(0).setOnes();
    for (int e = 1; e <= order_; ++e) {
        powers.col(e) = powers.col(e - 1).cwiseProduct(delta);
    }

    Vector phi(size());
    for (Index i = 0; i < size(); ++i) {
        const auto& alpha = indices_[static_cast<std::size_t>(i)].exponents;
        double term = inv_factorial_[i];
        for (int l = 0; l < dim_; ++l) {
            term *= powers(l, alpha[static_cast<std::size_t>(l)]);
        }
        phi[i] = term;
    }
    return phi;
}

const BasisLayout& basis_layout(int dim, int order) {
    static std::map<std::pair<int, int>, BasisLayout> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto [it, inserted] = cache.try_emplace({dim, order}, dim, order);
    return it->second;
}

Vector eval_basis(const Vector& y, const Vector& center, const BasisLayout& layout) {
    return layout.eval(y, center);
}

Matrix taylor_design_matrix(const Matrix& points, const Vector& center, const BasisLayout& layout) {
    detail::require(points.cols() == layout.dim(), "taylor_design_matrix: dimension mismatch");
    Matrix design(points.rows(), layout.size());
    for (Index m = 0; m < points.rows(); ++m) {
        design.row(m) = layout.eval(points.row(m).transpose(), center).transpose();
    }
    return design;
}

}  // namespace acpd
