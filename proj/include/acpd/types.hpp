#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <utility>

namespace acpd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Ordered list of d-dimensional points stored as an M x d coordinate matrix
/// (one point per row). Doubles as the coordinate matrix in all formulas.
struct PointSet {
    Matrix coords;

    PointSet() = default;
    explicit PointSet(Matrix m) : coords(std::move(m)) {}

    Index size() const { return coords.rows(); }
    int dim() const { return static_cast<int>(coords.cols()); }
    bool empty() const { return coords.rows() == 0; }
    bool all_finite() const { return coords.allFinite(); }
    Vector point(Index m) const { return coords.row(m).transpose(); }
};

/// Thrown when a least-squares design is numerically rank deficient.
class FitDegeneracyError : public std::runtime_error {
public:
    FitDegeneracyError(const std::string& msg, Index detected_rank, Index required_rank)
        : std::runtime_error(msg), rank_(detected_rank), required_(required_rank) {}

    Index rank() const { return rank_; }
    Index required_rank() const { return required_; }

private:
    Index rank_;
    Index required_;
};

namespace detail {

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace detail

}  // namespace acpd
