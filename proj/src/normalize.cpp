#include "acpd/normalize.hpp"

#include <cmath>

namespace acpd {

std::tuple<PointSet, PointSet, NormalizationTransform>
normalize_pair(const PointSet& fixed, const PointSet& moving) {
    detail::require(!fixed.empty() && !moving.empty(), "normalize_pair: empty point set");
    detail::require(fixed.dim() == moving.dim(), "normalize_pair: dimension mismatch");
    detail::require(fixed.all_finite() && moving.all_finite(),
                    "normalize_pair: non-finite coordinates");

    const Index total = fixed.size() + moving.size();
    const Vector center =
        (fixed.coords.colwise().sum() + moving.coords.colwise().sum()).transpose() /
        static_cast<double>(total);

    const double max_fixed = (fixed.coords.rowwise() - center.transpose()).cwiseAbs().maxCoeff();
    const double max_moving = (moving.coords.rowwise() - center.transpose()).cwiseAbs().maxCoeff();
    double scale = std::max(max_fixed, max_moving);
    if (scale <= 0.0) scale = 1.0;  // all points identical

    NormalizationTransform t{center, scale};
    return {normalize(fixed, t), normalize(moving, t), t};
}

PointSet normalize(const PointSet& pts, const NormalizationTransform& t) {
    detail::require(pts.dim() == t.center.size(), "normalize: dimension mismatch");
    return PointSet((pts.coords.rowwise() - t.center.transpose()) / t.scale);
}

PointSet denormalize(const PointSet& pts, const NormalizationTransform& t) {
    detail::require(pts.dim() == t.center.size(), "denormalize: dimension mismatch");
    return PointSet((pts.coords * t.scale).rowwise() + t.center.transpose());
}

double rmse(const PointSet& a, const PointSet& b) {
    detail::require(a.size() == b.size(), "rmse: cardinality mismatch");
    detail::require(a.dim() == b.dim(), "rmse: dimension mismatch");
    detail::require(a.size() > 0, "rmse: empty point set");
    const double mean_sq = (a.coords - b.coords).rowwise().squaredNorm().mean();
    return std::sqrt(mean_sq);
}

}  // namespace acpd
