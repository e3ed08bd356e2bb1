#pragma once

#include "acpd/analytic_map.hpp"
#include "acpd/types.hpp"

namespace acpd {

/// Weighted structured analytic fitting problem: find the order-q map about
/// `center` minimizing sum_m weights_m ||targets_m - A(sources_m)||^2.
struct WeightedFitProblem {
    Matrix sources;  // M_s x d
    Matrix targets;  // M_s x d
    Vector weights;  // M_s, strictly positive
    Vector center;   // d
    int order = 1;
};

/// Largest q <= q_raw with basis_size(d, q) <= m_s. Throws FitDegeneracyError when
/// even the affine system (q = 1) would be underdetermined.
int feasible_order(Index m_s, int dim, int q_raw);

/// Minimizes the weighted objective via column-pivoted QR on the row-scaled design
/// sqrt(W) Phi, with an SVD fallback when the pivoted factorization reports
/// near-degeneracy. All d output coordinates share one design matrix. Throws
/// FitDegeneracyError when the confirmed numerical rank is below basis_size(d, q).
AnalyticMap weighted_fit(const WeightedFitProblem& problem);

/// Single correction step from `initial` in the vectorized form: the stacked
/// design has rows phi_q(y_m; c)^T (x) I_d; the residual system is solved for a
/// coefficient update. Exact for a linear-in-parameters model, so the result
/// matches weighted_fit on well-conditioned problems.
AnalyticMap correction_fit(const WeightedFitProblem& problem, const AnalyticMap& initial);

/// Correction step restricted to the blocks of order <= problem.order: computes
/// the residual of `initial` (whose order may exceed problem.order) against the
/// weighted targets and solves for a low-order coefficient update; higher-order
/// blocks pass through unchanged. With problem.order == initial.order() this is
/// the exact weighted least-squares solution. The engine drives its persistent
/// registration map through this step.
AnalyticMap restricted_correction_fit(const WeightedFitProblem& problem,
                                      const AnalyticMap& initial);

}  // namespace acpd
