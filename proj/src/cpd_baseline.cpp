#include "acpd/cpd_baseline.hpp"

#include <Eigen/LU>
#include <chrono>
#include <cmath>

#include "acpd/normalize.hpp"

namespace acpd {

Matrix gaussian_kernel(const PointSet& pts, double beta) {
    detail::require(beta > 0.0, "gaussian_kernel: beta must be positive");
    const Index m = pts.size();
    const double inv_two_beta2 = 1.0 / (2.0 * beta * beta);
    Matrix g(m, m);
    for (Index i = 0; i < m; ++i) {
        g(i, i) = 1.0;
        for (Index j = i + 1; j < m; ++j) {
            const double k =
                std::exp(-(pts.coords.row(i) - pts.coords.row(j)).squaredNorm() * inv_two_beta2);
            g(i, j) = k;
            g(j, i) = k;
        }
    }
    return g;
}

RegistrationResult cpd_register(const PointSet& fixed, const PointSet& moving,
                                const CpdConfig& cfg) {
    detail::require(!fixed.empty() && !moving.empty(), "cpd_register: empty point set");
    detail::require(fixed.dim() == moving.dim(), "cpd_register: dimension mismatch");
    detail::require(cfg.lambda > 0.0 && cfg.beta > 0.0, "cpd_register: lambda, beta must be positive");
    detail::require(cfg.w >= 0.0 && cfg.w < 1.0, "cpd_register: w must lie in [0, 1)");
    detail::require(!cfg.record_external_rmse || fixed.size() == moving.size(),
                    "cpd_register: external RMSE requires index-aligned sets");

    const int d = fixed.dim();
    const Index m = moving.size();
    const Matrix kernel = gaussian_kernel(moving, cfg.beta);

    const ReboundGuardParams guard = cfg.rebound.value_or(ReboundGuardParams{});
    const int min_iters = guard.min_iters.value_or(5);
    ReboundGuardParams effective_guard = guard;
    effective_guard.min_iters = min_iters;
    const int streak_needed = std::max(1, guard.p_rise);

    RegistrationResult result;
    RegistrationTrace& trace = result.trace;

    double sigma2 = std::max(init_sigma2(fixed, moving), cfg.sigma2_floor);
    trace.sigma2_init = sigma2;
    trace.e_soft_init = std::sqrt(d * sigma2);
    if (cfg.record_external_rmse) {
        trace.external_rmse_init = rmse(fixed, moving);
    }

    result.best = moving;
    trace.best_score = cfg.record_external_rmse ? *trace.external_rmse_init : trace.e_soft_init;
    trace.best_iteration = -1;
    trace.stop_reason = StopReason::max_iters;

    PointSet current = moving;  // Y + G W
    double prev_e_soft = trace.e_soft_init;
    double best_internal = trace.e_soft_init;
    int internal_streak = 0;

    const auto start = std::chrono::steady_clock::now();

    for (int t = 0; t < cfg.max_iters; ++t) {
        const PosteriorStats stats =
            compute_posterior(fixed, current, sigma2, cfg.w, cfg.eps_rho);

        // (Diag(rho) G + lambda sigma^2 I) W = S_X - Diag(rho) Y0; the
        // rho-multiplied form stays well defined for vanishing posterior rows.
        // The displacement field is anchored at the original moving set.
        Matrix system = stats.rho.asDiagonal() * kernel;
        system.diagonal().array() += cfg.lambda * sigma2;
        const Matrix rhs = stats.SX - stats.rho.asDiagonal() * moving.coords;
        const Matrix weights = system.partialPivLu().solve(rhs);

        PointSet next(moving.coords + kernel * weights);

        sigma2 = sigma2_update(stats, fixed, next);
        sigma2 = std::isnan(sigma2) ? sigma2 : std::max(sigma2, cfg.sigma2_floor);
        const double e_soft = std::sqrt(d * sigma2);

        IterationRecord rec;
        rec.t = t;
        rec.sigma2 = sigma2;
        rec.e_soft = e_soft;
        rec.elapsed_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        const bool finite = next.all_finite() && std::isfinite(sigma2);
        if (cfg.record_external_rmse && finite) {
            rec.external_rmse = rmse(fixed, next);
        }
        trace.iterations.push_back(rec);

        if (!finite) {
            trace.stop_reason = StopReason::diverged;
            break;
        }

        const double score = cfg.record_external_rmse ? *rec.external_rmse : e_soft;
        if (score < trace.best_score) {
            trace.best_score = score;
            trace.best_iteration = t;
            result.best = next;
        }

        const double previous_e_soft = prev_e_soft;
        const double rel_change = std::abs(e_soft - previous_e_soft) / std::max(previous_e_soft, 1e-300);
        const double max_displacement =
            (next.coords - current.coords).rowwise().norm().maxCoeff();
        current = std::move(next);
        prev_e_soft = e_soft;

        if (rel_change < cfg.tol) {
            trace.stop_reason = StopReason::converged_residual;
            break;
        }
        if (max_displacement < cfg.tol) {
            trace.stop_reason = StopReason::converged_update;
            break;
        }

        if (cfg.rebound.has_value()) {
            if (cfg.record_external_rmse && rebound_check(trace, effective_guard)) {
                trace.stop_reason = StopReason::external_rebound;
                break;
            }
            const bool internal_rise =
                e_soft > (1.0 + guard.tau_rise) * best_internal + guard.eps_rise &&
                e_soft > previous_e_soft;
            internal_streak = (internal_rise && t >= min_iters) ? internal_streak + 1 : 0;
            if (internal_streak >= streak_needed) {
                trace.stop_reason = StopReason::internal_rebound;
                break;
            }
        }
        best_internal = std::min(best_internal, e_soft);
    }

    return result;
}

}  // namespace acpd
