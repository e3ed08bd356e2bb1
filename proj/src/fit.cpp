#include "acpd/fit.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

namespace acpd {

namespace {

constexpr double kRankTolerance = 1e-10;  // relative to the largest singular value / pivot

void validate(const WeightedFitProblem& p) {
    const Index m_s = p.sources.rows();
    const int d = static_cast<int>(p.sources.cols());
    detail::require(m_s > 0, "weighted_fit: empty problem");
    detail::require(p.targets.rows() == m_s && p.targets.cols() == d,
                    "weighted_fit: source/target shape mismatch");
    detail::require(p.weights.size() == m_s, "weighted_fit: weight count mismatch");
    detail::require((p.weights.array() > 0.0).all(), "weighted_fit: weights must be positive");
    detail::require(p.center.size() == d, "weighted_fit: center dimension mismatch");
    detail::require(p.order >= 0, "weighted_fit: order must be >= 0");
    detail::require(m_s >= basis_size(d, p.order),
                    "weighted_fit: underdetermined system (m_s < basis_size)");
}

// Least-squares solve of scaled_design * X = scaled_rhs with the rank policy:
// pivoted QR first, SVD with the same relative threshold on near-degeneracy,
// FitDegeneracyError when the confirmed rank is below full column rank.
// Columns are equilibrated to unit norm first; the factorial basis scaling makes
// raw high-order column norms span many orders of magnitude, and without
// equilibration the rank test would flag that scaling rather than the geometry.
Matrix solve_rank_checked(const Matrix& scaled_design, const Matrix& scaled_rhs) {
    const Index full = scaled_design.cols();
    Vector col_scale(full);
    for (Index j = 0; j < full; ++j) {
        const double norm = scaled_design.col(j).norm();
        col_scale[j] = (norm > 0.0) ? 1.0 / norm : 1.0;
    }
    const Matrix equilibrated = scaled_design * col_scale.asDiagonal();

    Eigen::ColPivHouseholderQR<Matrix> qr(equilibrated);
    qr.setThreshold(kRankTolerance);
    if (qr.rank() == full) {
        return col_scale.asDiagonal() * qr.solve(scaled_rhs);
    }
    Eigen::BDCSVD<Matrix> svd(equilibrated, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(kRankTolerance);
    if (svd.rank() < full) {
        throw FitDegeneracyError(
            "weighted_fit: design matrix is numerically rank deficient (rank " +
                std::to_string(svd.rank()) + " < " + std::to_string(full) + ")",
            svd.rank(), full);
    }
    return col_scale.asDiagonal() * svd.solve(scaled_rhs);
}

}  // namespace

int feasible_order(Index m_s, int dim, int q_raw) {
    detail::require(m_s >= 1, "feasible_order: m_s must be >= 1");
    detail::require(q_raw >= 1, "feasible_order: q_raw must be >= 1");
    if (m_s < basis_size(dim, 1)) {
        throw FitDegeneracyError(
            "feasible_order: " + std::to_string(m_s) +
                " observations cannot determine even an affine map in dimension " +
                std::to_string(dim),
            m_s, basis_size(dim, 1));
    }
    int q = q_raw;
    while (q > 1 && basis_size(dim, q) > m_s) --q;
    return q;
}

AnalyticMap weighted_fit(const WeightedFitProblem& problem) {
    validate(problem);
    const int d = static_cast<int>(problem.sources.cols());
    const BasisLayout& layout = basis_layout(d, problem.order);

    const Matrix design = taylor_design_matrix(problem.sources, problem.center, layout);
    const Vector sqrt_w = problem.weights.array().sqrt();
    const Matrix scaled_design = sqrt_w.asDiagonal() * design;
    const Matrix scaled_targets = sqrt_w.asDiagonal() * problem.targets;

    const Matrix coeffs_t = solve_rank_checked(scaled_design, scaled_targets);
    return AnalyticMap::from_coefficients(d, problem.order, problem.center,
                                          coeffs_t.transpose());
}

AnalyticMap restricted_correction_fit(const WeightedFitProblem& problem,
                                      const AnalyticMap& initial) {
    const int d = static_cast<int>(problem.sources.cols());
    detail::require(initial.dim() == d && initial.order() >= problem.order &&
                        initial.center().size() == problem.center.size() &&
                        (initial.center().array() == problem.center.array()).all(),
                    "restricted_correction_fit: initial map does not match the problem");
    validate(problem);

    const BasisLayout& layout = basis_layout(d, initial.order());
    const Matrix design = taylor_design_matrix(problem.sources, problem.center, layout);
    const Matrix residual = problem.targets - design * initial.coefficients().transpose();

    const Index sub = basis_size(d, problem.order);
    const Vector sqrt_w = problem.weights.array().sqrt();
    const Matrix scaled_design = sqrt_w.asDiagonal() * design.leftCols(sub);
    const Matrix scaled_residual = sqrt_w.asDiagonal() * residual;

    const Matrix delta_t = solve_rank_checked(scaled_design, scaled_residual);
    Matrix coeffs = initial.coefficients();
    coeffs.leftCols(sub) += delta_t.transpose();
    return AnalyticMap::from_coefficients(d, initial.order(), problem.center, coeffs);
}

AnalyticMap correction_fit(const WeightedFitProblem& problem, const AnalyticMap& initial) {
    validate(problem);
    const int d = static_cast<int>(problem.sources.cols());
    detail::require(initial.dim() == d && initial.order() == problem.order &&
                        initial.center().size() == problem.center.size() &&
                        (initial.center().array() == problem.center.array()).all(),
                    "correction_fit: initial map does not match the problem");

    const Index m_s = problem.sources.rows();
    const BasisLayout& layout = basis_layout(d, problem.order);
    const Index s = layout.size();
    const Index k = d * s;

    // Stacked design B with row blocks phi^T (x) I_d, and observation vector l.
    Matrix stacked = Matrix::Zero(d * m_s, k);
    Vector obs(d * m_s);
    Vector sqrt_w(d * m_s);
    for (Index m = 0; m < m_s; ++m) {
        const Vector phi = layout.eval(problem.sources.row(m).transpose(), problem.center);
        const double sw = std::sqrt(problem.weights[m]);
        for (Index j = 0; j < s; ++j) {
            for (int l = 0; l < d; ++l) {
                stacked(m * d + l, j * d + l) = phi[j];
            }
        }
        obs.segment(m * d, d) = problem.targets.row(m).transpose();
        sqrt_w.segment(m * d, d).setConstant(sw);
    }

    // theta = vec(A) column-major, so that B_m theta = A phi_m.
    const Matrix initial_coeffs = initial.coefficients();
    const Vector theta0 = Eigen::Map<const Vector>(initial_coeffs.data(), k);

    const Vector residual = obs - stacked * theta0;
    const Matrix scaled_design = sqrt_w.asDiagonal() * stacked;
    const Vector scaled_residual = sqrt_w.asDiagonal() * residual;

    const Vector delta = solve_rank_checked(scaled_design, scaled_residual);
    const Vector theta1 = theta0 + delta;
    const Matrix coeffs = Eigen::Map<const Matrix>(theta1.data(), d, s);
    return AnalyticMap::from_coefficients(d, problem.order, problem.center, coeffs);
}

}  // namespace acpd
