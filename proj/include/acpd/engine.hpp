#pragma once

#include <optional>
#include <vector>

#include "acpd/posterior.hpp"
#include "acpd/types.hpp"

namespace acpd {

/// Constants of the rebound stop rule E > (1 + tau_rise) * E_best + eps_rise.
/// The same constants drive the evaluation-side external guard (ordered benchmarks
/// only) and the internal E_soft guard. When unset, min_iters defaults to the
/// start of the schedule's final stage (and no earlier than one full stage),
/// after the model class stops growing.
struct ReboundGuardParams {
    double tau_rise = 0.02;
    double eps_rise = 1e-12;
    int p_rise = 1;  // consecutive rebound iterations required to stop
    std::optional<int> min_iters;
};

struct EngineConfig {
    int t_max = 55;
    int q_max = 10;
    double w = 0.1;
    double eps_rho = 1e-12;
    double tol = 1e-8;           // relative E_soft change / max update displacement
    double sigma2_floor = 1e-12; // in normalized units
    bool fixed_order = false;    // q_t^raw = q_max for every t (ablation strategies)
    bool record_external_rmse = false;  // requires index-aligned inputs
    std::optional<ReboundGuardParams> rebound = ReboundGuardParams{};
    bool debug_checks = false;   // per-iteration pairwise/condensed objective cross-check
};

enum class StopReason {
    converged_residual,
    converged_update,
    max_iters,
    external_rebound,
    internal_rebound,
    diverged,
};

const char* to_string(StopReason reason);

/// Analytic order per iteration: stage lengths L_1 >= ... >= L_D summing to t_max,
/// triangular weights (D, D-1, ..., 1) scaled and rounded; q_t^raw is the stage
/// containing iteration t.
struct DegreeSchedule {
    std::vector<int> stage_lengths;
    std::vector<int> per_iteration;
};

DegreeSchedule build_schedule(int max_order, int t_max);

struct IterationRecord {
    int t = 0;
    int q_raw = 0;
    int q_used = 0;
    double sigma2 = 0.0;  // after the variance update
    double e_soft = 0.0;  // sqrt(d * sigma2)
    std::optional<double> external_rmse;
    double elapsed_s = 0.0;  // cumulative wall time at the end of the iteration
};

struct RegistrationTrace {
    std::vector<IterationRecord> iterations;
    double sigma2_init = 0.0;
    double e_soft_init = 0.0;
    std::optional<double> external_rmse_init;
    double best_score = 0.0;     // tracked criterion: external RMSE when recorded, else E_soft
    int best_iteration = -1;     // -1 denotes the initial state
    StopReason stop_reason = StopReason::max_iters;
};

struct RegistrationResult {
    PointSet best;  // best-scoring moving configuration
    RegistrationTrace trace;
};

/// sigma_0^2 as in CPD: average pairwise squared distance / d.
double init_sigma2(const PointSet& fixed, const PointSet& moving);

/// Variance update in posterior-statistics form:
/// (tr(X^T Diag(eta) X) - 2 tr(SX^T Y) + tr(Y^T Diag(rho) Y)) / (NP d).
double sigma2_update(const PosteriorStats& stats, const PointSet& fixed,
                     const PointSet& moved);

/// True when the external rebound condition held for the last p_rise consecutive
/// recorded iterations, all at t >= min_iters. Requires external RMSE recording.
bool rebound_check(const RegistrationTrace& trace, const ReboundGuardParams& params);

/// The full EM loop. Inputs must share one normalized frame; the analytic
/// expansion center is the origin of that frame.
RegistrationResult register_points(const PointSet& fixed, const PointSet& moving,
                                   const EngineConfig& cfg);

}  // namespace acpd
