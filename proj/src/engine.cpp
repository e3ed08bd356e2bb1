#include "acpd/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "acpd/fit.hpp"
#include "acpd/normalize.hpp"

namespace acpd {

const char* to_string(StopReason reason) {
    switch (reason) {
        case StopReason::converged_residual: return "converged_residual";
        case StopReason::converged_update: return "converged_update";
        case StopReason::max_iters: return "max_iters";
        case StopReason::external_rebound: return "external_rebound";
        case StopReason::internal_rebound: return "internal_rebound";
        case StopReason::diverged: return "diverged";
    }
    return "unknown";
}

DegreeSchedule build_schedule(int max_order, int t_max) {
    detail::require(max_order >= 1, "build_schedule: max_order must be >= 1");
    detail::require(t_max >= 1, "build_schedule: t_max must be >= 1");

    // With t_max < D no positive non-increasing D-stage schedule exists; use the
    // largest order that still admits one.
    const int stages = std::min(max_order, t_max);
    const long long triangular = static_cast<long long>(stages) * (stages + 1) / 2;

    std::vector<int> lengths(static_cast<std::size_t>(stages));
    long long assigned = 0;
    for (int q = 1; q <= stages; ++q) {
        const long long len =
            static_cast<long long>(t_max) * (stages - q + 1) / triangular;
        lengths[static_cast<std::size_t>(q - 1)] = static_cast<int>(len);
        assigned += len;
    }
    for (long long i = 0; i < t_max - assigned; ++i) {
        lengths[static_cast<std::size_t>(i % stages)] += 1;
    }

    // Positive stage lengths: borrow from the currently longest stage.
    for (int i = stages - 1; i >= 0; --i) {
        while (lengths[static_cast<std::size_t>(i)] < 1) {
            const auto donor = std::max_element(lengths.begin(), lengths.end());
            *donor -= 1;
            lengths[static_cast<std::size_t>(i)] += 1;
        }
    }
    // Non-increasing repair: shift units toward earlier stages until stable.
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i + 1 < stages; ++i) {
            if (lengths[static_cast<std::size_t>(i + 1)] > lengths[static_cast<std::size_t>(i)]) {
                lengths[static_cast<std::size_t>(i)] += 1;
                lengths[static_cast<std::size_t>(i + 1)] -= 1;
                changed = true;
            }
        }
    }

    DegreeSchedule schedule;
    schedule.stage_lengths = lengths;
    schedule.per_iteration.reserve(static_cast<std::size_t>(t_max));
    for (int q = 1; q <= stages; ++q) {
        for (int i = 0; i < lengths[static_cast<std::size_t>(q - 1)]; ++i) {
            schedule.per_iteration.push_back(q);
        }
    }
    return schedule;
}

double init_sigma2(const PointSet& fixed, const PointSet& moving) {
    detail::require(!fixed.empty() && !moving.empty(), "init_sigma2: empty point set");
    detail::require(fixed.dim() == moving.dim(), "init_sigma2: dimension mismatch");
    double total = 0.0;
    for (Index m = 0; m < moving.size(); ++m) {
        total += (fixed.coords.rowwise() - moving.coords.row(m)).squaredNorm();
    }
    return total / (static_cast<double>(fixed.dim()) * static_cast<double>(fixed.size()) *
                    static_cast<double>(moving.size()));
}

double sigma2_update(const PosteriorStats& stats, const PointSet& fixed,
                     const PointSet& moved) {
    detail::require(stats.P.rows() == moved.size() && stats.P.cols() == fixed.size(),
                    "sigma2_update: posterior shape mismatch");
    detail::require(stats.NP > 0.0, "sigma2_update: total posterior mass must be positive");
    const double term_fixed =
        (fixed.coords.array().square().rowwise().sum() * stats.eta.array()).sum();
    const double term_cross = (stats.SX.array() * moved.coords.array()).sum();
    const double term_moved =
        (moved.coords.array().square().rowwise().sum() * stats.rho.array()).sum();
    return (term_fixed - 2.0 * term_cross + term_moved) /
           (stats.NP * static_cast<double>(fixed.dim()));
}

bool rebound_check(const RegistrationTrace& trace, const ReboundGuardParams& params) {
    if (!trace.external_rmse_init.has_value()) {
        throw std::logic_error("rebound_check: external RMSE was not recorded");
    }
    const int min_iters = params.min_iters.value_or(0);
    const int needed = std::max(1, params.p_rise);

    // A rebound iteration rises above the best recorded value: it exceeds the
    // threshold AND is larger than its predecessor. A trajectory still descending
    // toward the best (the usual early contraction transient) never counts.
    double best = *trace.external_rmse_init;
    double previous = *trace.external_rmse_init;
    int streak = 0;
    for (const IterationRecord& rec : trace.iterations) {
        if (!rec.external_rmse.has_value()) {
            throw std::logic_error("rebound_check: iteration without external RMSE");
        }
        const double e = *rec.external_rmse;
        const bool above = e > (1.0 + params.tau_rise) * best + params.eps_rise;
        if (above && e > previous) {
            streak = (rec.t >= min_iters) ? streak + 1 : 0;
        } else {
            streak = 0;
        }
        best = std::min(best, e);
        previous = e;
    }
    return streak >= needed;
}

namespace {

Matrix rows_of(const Matrix& m, const std::vector<Index>& rows) {
    Matrix out(static_cast<Index>(rows.size()), m.cols());
    for (Index i = 0; i < out.rows(); ++i) {
        out.row(i) = m.row(rows[static_cast<std::size_t>(i)]);
    }
    return out;
}

void check_objective_equivalence(const PosteriorStats& stats, const SoftTargets& targets,
                                 const PointSet& fixed, const PointSet& before,
                                 const PointSet& after) {
    const double pair_diff = pairwise_objective(stats, fixed, after) -
                             pairwise_objective(stats, fixed, before);
    const double cond_diff = condensed_objective(targets, after) -
                             condensed_objective(targets, before);
    const double scale = std::max({std::abs(pair_diff), std::abs(cond_diff), 1e-12});
    if (std::abs(pair_diff - cond_diff) > 1e-6 * scale) {
        throw std::logic_error(
            "objective equivalence violated: pairwise diff " + std::to_string(pair_diff) +
            " vs condensed diff " + std::to_string(cond_diff));
    }
}

}  // namespace

RegistrationResult register_points(const PointSet& fixed, const PointSet& moving,
                                   const EngineConfig& cfg) {
    detail::require(!fixed.empty() && !moving.empty(), "register_points: empty point set");
    detail::require(fixed.dim() == moving.dim(), "register_points: dimension mismatch");
    detail::require(fixed.all_finite() && moving.all_finite(),
                    "register_points: non-finite coordinates");
    detail::require(cfg.t_max >= 1, "register_points: t_max must be >= 1");
    detail::require(cfg.q_max >= 1, "register_points: q_max must be >= 1");
    detail::require(cfg.w >= 0.0 && cfg.w < 1.0, "register_points: w must lie in [0, 1)");
    detail::require(!cfg.record_external_rmse || fixed.size() == moving.size(),
                    "register_points: external RMSE requires index-aligned sets");

    const int d = fixed.dim();
    const Vector center = Vector::Zero(d);

    DegreeSchedule schedule;
    if (cfg.fixed_order) {
        schedule.stage_lengths = {cfg.t_max};
        schedule.per_iteration.assign(static_cast<std::size_t>(cfg.t_max), cfg.q_max);
    } else {
        schedule = build_schedule(cfg.q_max, cfg.t_max);
    }

    // Stage transitions perturb the external trajectory transiently (freshly
    // activated orders overshoot once, then re-settle), so the guards arm only
    // once the schedule has reached its final stage, and never before one full
    // stage has elapsed. Single-stage schedules therefore run unguarded.
    const ReboundGuardParams guard = cfg.rebound.value_or(ReboundGuardParams{});
    const int min_iters = guard.min_iters.value_or(
        std::max(cfg.t_max - schedule.stage_lengths.back(), schedule.stage_lengths.front()));
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

    // The registration map is a single analytic map anchored at the original
    // moving configuration. Each EM iteration applies one weighted correction
    // step to its coefficients (exact for the current weighted problem), and the
    // block set is extended in place when the schedule raises the order. The
    // alternative of composing a freshly fitted map onto the current points each
    // iteration bakes the early diffuse-posterior bias into the configuration,
    // where no later finite-order fit can remove it.
    AnalyticMap total = AnalyticMap::identity(d, 1, center);

    PointSet current = moving;
    double prev_e_soft = trace.e_soft_init;
    double best_internal = trace.e_soft_init;
    int internal_streak = 0;

    const auto start = std::chrono::steady_clock::now();

    for (int t = 0; t < cfg.t_max; ++t) {
        PosteriorStats stats;
        SoftTargets targets;
        PointSet next;
        int q_used = 0;
        const int q_raw = schedule.per_iteration[static_cast<std::size_t>(t)];
        try {
            stats = compute_posterior(fixed, current, sigma2, cfg.w, cfg.eps_rho);
            if (stats.active.empty()) {
                throw FitDegeneracyError("no moving point retains posterior mass", 0,
                                         basis_size(d, 1));
            }
            targets = soft_targets(stats, fixed);
            q_used = feasible_order(static_cast<Index>(stats.active.size()), d, q_raw);
            if (q_used > total.order()) total = total.extended(q_used);

            WeightedFitProblem problem;
            problem.sources = rows_of(moving.coords, targets.sources);
            problem.targets = targets.targets;
            problem.weights = targets.weights;
            problem.center = center;
            problem.order = q_used;
            total = restricted_correction_fit(problem, total);
            next = total.apply(moving);  // all moving points, not only the active set
        } catch (const FitDegeneracyError& e) {
            throw FitDegeneracyError("iteration " + std::to_string(t) + ": " + e.what(),
                                     e.rank(), e.required_rank());
        }

        if (cfg.debug_checks) {
            check_objective_equivalence(stats, targets, fixed, current, next);
        }

        sigma2 = sigma2_update(stats, fixed, next);
        sigma2 = std::isnan(sigma2) ? sigma2 : std::max(sigma2, cfg.sigma2_floor);
        const double e_soft = std::sqrt(d * sigma2);

        IterationRecord rec;
        rec.t = t;
        rec.q_raw = q_raw;
        rec.q_used = q_used;
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
