#pragma once

#include <vector>

#include "acpd/types.hpp"

namespace acpd {

/// Exponent tuple alpha = (alpha_1, ..., alpha_d) labelling one Taylor basis term.
struct MultiIndex {
    std::vector<int> exponents;

    int order() const;
    bool operator==(const MultiIndex&) const = default;
};

/// Number of monomials of exact total degree r in d variables: binom(r+d-1, d-1).
long long monomial_count(int dim, int degree);

/// Number of Taylor basis terms of total degree <= q: binom(q+d, d).
long long basis_size(int dim, int order);

/// Scalar degrees of freedom of a d-valued map truncated at order q: d * binom(q+d, d).
long long param_count(int dim, int order);

/// Enumeration of all multi-indices with |alpha| <= q in graded order (total degree
/// ascending, lexicographically descending exponents within a degree). The same
/// ordering is used for basis evaluation, design-matrix assembly, and coefficient
/// storage.
class BasisLayout {
public:
    BasisLayout(int dim, int order);

    int dim() const { return dim_; }
    int order() const { return order_; }
    Index size() const { return static_cast<Index>(indices_.size()); }
    const std::vector<MultiIndex>& indices() const { return indices_; }

    /// Start of the degree-r group; indices [offset(r), offset(r+1)) have |alpha| = r.
    Index degree_offset(int degree) const;

    /// Basis vector phi_q(y; c): entry for alpha equals (y - c)^alpha / alpha!.
    Vector eval(const Vector& y, const Vector& center) const;

private:
    int dim_;
    int order_;
    std::vector<MultiIndex> indices_;
    std::vector<Index> offsets_;
    Vector inv_factorial_;
};

/// Shared immutable layout per (dim, order); cached across calls.
const BasisLayout& basis_layout(int dim, int order);

Vector eval_basis(const Vector& y, const Vector& center, const BasisLayout& layout);

/// Row m is phi_q(points_m; c)^T. Shape: M x S_{d,q}.
Matrix taylor_design_matrix(const Matrix& points, const Vector& center, const BasisLayout& layout);

}  // namespace acpd
