#pragma once

#include "acpd/engine.hpp"
#include "acpd/types.hpp"

namespace acpd {

/// Reference dense non-rigid CPD: Gaussian-kernel displacement field over the
/// moving points, shared E-step with the analytic engine.
struct CpdConfig {
    double lambda = 2.0;  // coherence regularization weight
    double beta = 2.0;    // kernel width
    double w = 0.1;
    int max_iters = 100;
    double tol = 1e-8;
    double eps_rho = 1e-12;
    double sigma2_floor = 1e-12;
    bool record_external_rmse = false;
    std::optional<ReboundGuardParams> rebound = ReboundGuardParams{};
};

/// G_ij = exp(-||y_i - y_j||^2 / (2 beta^2)); symmetric with unit diagonal.
Matrix gaussian_kernel(const PointSet& pts, double beta);

/// EM loop with the point-indexed kernel M-step: per iteration solves the dense
/// M x M system (Diag(rho) G + lambda sigma^2 I) W = P X - Diag(rho) Y for the
/// kernel weights and moves the points to Y + G W.
RegistrationResult cpd_register(const PointSet& fixed, const PointSet& moving,
                                const CpdConfig& cfg);

}  // namespace acpd
