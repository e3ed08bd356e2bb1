#pragma once

#include <vector>

#include "acpd/types.hpp"

namespace acpd {

/// Posterior correspondence matrix and the condensed statistics consumed by the
/// M-step and the variance update.
struct PosteriorStats {
    Matrix P;        // M x N posterior probabilities
    Vector rho;      // row sums P 1 (posterior mass per moving point)
    Vector eta;      // column sums P^T 1
    Matrix SX;       // P X, M x d
    double NP = 0.0; // total posterior mass
    std::vector<Index> active;  // { m : rho_m > eps_rho }
};

/// Barycentric soft targets for the active moving points.
struct SoftTargets {
    Matrix targets;              // M_s x d, z_m = (1/rho_m) sum_n P_mn x_n
    Vector weights;              // rho_m restricted to the active set
    std::vector<Index> sources;  // indices into the moving set
};

/// Uniform-outlier normalization constant c_t = (2 pi sigma^2)^{d/2} (w/(1-w)) (M/N).
double outlier_constant(double sigma2, double w, Index n_moving, Index n_fixed, int dim);

/// CPD E-step: P_mn = K_mn / (sum_k K_kn + c_t) with K_mn = exp(-||x_n - y_m||^2 / 2 sigma^2).
/// Columns are independent; with ACPD_THREADS > 1 they are computed in parallel with
/// bitwise-identical results.
PosteriorStats compute_posterior(const PointSet& fixed, const PointSet& moving,
                                 double sigma2, double w, double eps_rho);

SoftTargets soft_targets(const PosteriorStats& stats, const PointSet& fixed);

/// Pairwise posterior-weighted data term: sum_mn P_mn ||x_n - u_m||^2.
double pairwise_objective(const PosteriorStats& stats, const PointSet& fixed,
                          const PointSet& candidates);

/// Condensed weighted term sum_{m active} rho_m ||z_m - u_m||^2. Differs from the
/// pairwise objective by a candidate-independent constant.
double condensed_objective(const SoftTargets& targets, const PointSet& candidates);

}  // namespace acpd
