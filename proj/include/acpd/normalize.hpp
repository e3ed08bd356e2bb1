#pragma once

#include <tuple>

#include "acpd/types.hpp"

namespace acpd {

/// Affine frame mapping normalized coordinates back to original units:
/// original = center + scale * normalized.
struct NormalizationTransform {
    Vector center;
    double scale = 1.0;
};

/// Centers both sets at the joint centroid of their union and scales so the
/// maximum coordinate magnitude over the union equals one. All registration runs
/// in this shared frame, with the analytic expansion center at the origin.
/// Degenerate input (all points identical) falls back to scale 1.
std::tuple<PointSet, PointSet, NormalizationTransform>
normalize_pair(const PointSet& fixed, const PointSet& moving);

PointSet denormalize(const PointSet& pts, const NormalizationTransform& t);
PointSet normalize(const PointSet& pts, const NormalizationTransform& t);

/// Pointwise RMSE between two index-aligned sets: sqrt(mean_m ||a_m - b_m||^2).
double rmse(const PointSet& a, const PointSet& b);

}  // namespace acpd
