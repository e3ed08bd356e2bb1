#include "acpd/posterior.hpp"

#include <cmath>
#include <numbers>
#include <thread>

#include "acpd/threads.hpp"

namespace acpd {

namespace {

// One posterior column: K column over moving points, normalized by (sum + c_t).
void fill_column(const Matrix& fixed, const Matrix& moving, double inv_two_sigma2,
                 double outlier, Index n, Matrix& P) {
    const auto x = fixed.row(n);
    double sum = 0.0;
    for (Index m = 0; m < moving.rows(); ++m) {
        const double k = std::exp(-(moving.row(m) - x).squaredNorm() * inv_two_sigma2);
        P(m, n) = k;
        sum += k;
    }
    const double denom = sum + outlier;
    if (denom > 0.0) {
        P.col(n) /= denom;
    } else {
        P.col(n).setZero();  // all affinities underflowed and w = 0
    }
}

}  // namespace

double outlier_constant(double sigma2, double w, Index n_moving, Index n_fixed, int dim) {
    detail::require(sigma2 > 0.0, "outlier_constant: sigma2 must be positive");
    detail::require(w >= 0.0 && w < 1.0, "outlier_constant: w must lie in [0, 1)");
    detail::require(n_moving > 0 && n_fixed > 0, "outlier_constant: empty set");
    if (w == 0.0) return 0.0;
    return std::pow(2.0 * std::numbers::pi * sigma2, dim / 2.0) * (w / (1.0 - w)) *
           (static_cast<double>(n_moving) / static_cast<double>(n_fixed));
}

PosteriorStats compute_posterior(const PointSet& fixed, const PointSet& moving,
                                 double sigma2, double w, double eps_rho) {
    detail::require(!fixed.empty() && !moving.empty(), "compute_posterior: empty point set");
    detail::require(fixed.dim() == moving.dim(), "compute_posterior: dimension mismatch");
    detail::require(sigma2 > 0.0, "compute_posterior: sigma2 must be positive");

    const Index m_count = moving.size();
    const Index n_count = fixed.size();
    const double inv_two_sigma2 = 1.0 / (2.0 * sigma2);
    const double outlier = outlier_constant(sigma2, w, m_count, n_count, fixed.dim());

    PosteriorStats stats;
    stats.P.resize(m_count, n_count);

    const int workers = static_cast<int>(std::min<Index>(configured_thread_count(), n_count));
    if (workers <= 1) {
        for (Index n = 0; n < n_count; ++n) {
            fill_column(fixed.coords, moving.coords, inv_two_sigma2, outlier, n, stats.P);
        }
    } else {
        // Columns are disjoint, so any partition yields identical results.
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int t = 0; t < workers; ++t) {
            pool.emplace_back([&, t] {
                for (Index n = t; n < n_count; n += workers) {
                    fill_column(fixed.coords, moving.coords, inv_two_sigma2, outlier, n, stats.P);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    stats.rho = stats.P.rowwise().sum();
    stats.eta = stats.P.colwise().sum().transpose();
    stats.SX = stats.P * fixed.coords;
    stats.NP = stats.rho.sum();
    for (Index m = 0; m < m_count; ++m) {
        if (stats.rho[m] > eps_rho) stats.active.push_back(m);
    }
    return stats;
}

SoftTargets soft_targets(const PosteriorStats& stats, const PointSet& fixed) {
    detail::require(stats.P.cols() == fixed.size(), "soft_targets: stats do not match fixed set");
    detail::require(!stats.active.empty(), "soft_targets: active set is empty");

    const Index count = static_cast<Index>(stats.active.size());
    SoftTargets out;
    out.targets.resize(count, fixed.dim());
    out.weights.resize(count);
    out.sources = stats.active;
    for (Index i = 0; i < count; ++i) {
        const Index m = stats.active[static_cast<std::size_t>(i)];
        out.targets.row(i) = stats.SX.row(m) / stats.rho[m];
        out.weights[i] = stats.rho[m];
    }
    return out;
}

double pairwise_objective(const PosteriorStats& stats, const PointSet& fixed,
                          const PointSet& candidates) {
    detail::require(stats.P.rows() == candidates.size() && stats.P.cols() == fixed.size(),
                    "pairwise_objective: shape mismatch");
    double total = 0.0;
    for (Index m = 0; m < candidates.size(); ++m) {
        for (Index n = 0; n < fixed.size(); ++n) {
            total += stats.P(m, n) * (fixed.coords.row(n) - candidates.coords.row(m)).squaredNorm();
        }
    }
    return total;
}

double condensed_objective(const SoftTargets& targets, const PointSet& candidates) {
    double total = 0.0;
    for (Index i = 0; i < targets.targets.rows(); ++i) {
        const Index m = targets.sources[static_cast<std::size_t>(i)];
        total += targets.weights[i] *
                 (targets.targets.row(i) - candidates.coords.row(m)).squaredNorm();
    }
    return total;
}

}  // namespace acpd
