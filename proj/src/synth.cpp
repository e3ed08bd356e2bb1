#include "acpd/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace acpd {

namespace {

// Deterministic sub-stream per (seed, tag). Uniform draws avoid
// std::uniform_real_distribution so the byte stream is platform-independent.
class SubStream {
public:
    SubStream(std::uint64_t seed, std::uint64_t tag) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32)};
        engine_.seed(seq);
    }

    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }  // [0, 1)
    double symmetric(double gamma) { return gamma * (2.0 * unit() - 1.0); }

    Matrix symmetric_matrix(Index rows, Index cols, double gamma) {
        Matrix m(rows, cols);
        for (Index i = 0; i < rows; ++i) {
            for (Index j = 0; j < cols; ++j) m(i, j) = symmetric(gamma);
        }
        return m;
    }

private:
    std::mt19937_64 engine_;
};

// Degree-2 Taylor basis block in layout order for d = 3:
// [u1^2/2, u1 u2, u1 u3, u2^2/2, u2 u3, u3^2/2].
Eigen::Matrix<double, 6, 1> quadratic_basis(const Vector& u) {
    Eigen::Matrix<double, 6, 1> phi;
    phi << 0.5 * u[0] * u[0], u[0] * u[1], u[0] * u[2],
           0.5 * u[1] * u[1], u[1] * u[2], 0.5 * u[2] * u[2];
    return phi;
}

}  // namespace

double bump(double r, double sigma) {
    detail::require(r >= 0.0, "bump: r must be >= 0");
    detail::require(sigma > 0.0, "bump: sigma must be positive");
    if (r >= sigma) return 0.0;
    const double ratio = r / sigma;
    return std::exp(-1.0 / (1.0 - ratio * ratio));
}

std::pair<double, double> blend_weights(const Vector& y, const Vector& c1, const Vector& c2,
                                        double sigma) {
    const double b1 = bump((y - c1).norm(), sigma);
    const double b2 = bump((y - c2).norm(), sigma);
    const double total = b1 + b2;
    if (total <= 0.0) {
        throw std::domain_error("blend_weights: point is outside both bump supports");
    }
    return {b1 / total, b2 / total};
}

BumpBlendField make_bump_blend_field(const PointSet& model, const SynthParams& params) {
    detail::require(model.dim() == 3, "make_bump_blend_field: model must be 3D");
    detail::require(model.size() >= 2, "make_bump_blend_field: need at least two points");
    detail::require(params.gamma0 >= 0.0 && params.gamma_q >= 0.0,
                    "make_bump_blend_field: negative coefficient range");

    Index min_idx = 0, max_idx = 0;
    model.coords.col(0).minCoeff(&min_idx);
    model.coords.col(0).maxCoeff(&max_idx);

    BumpBlendField field;
    field.c1 = model.point(min_idx);
    field.c2 = model.point(max_idx);
    field.sigma_bump = (field.c1 - field.c2).norm();
    detail::require(field.sigma_bump > 0.0, "make_bump_blend_field: blend centers coincide");
    field.center = model.coords.colwise().mean().transpose();

    field.translation = SubStream(params.seed, 0).symmetric_matrix(3, 1, params.gamma0);
    field.linear = SubStream(params.seed, 1).symmetric_matrix(3, 3, params.gamma0);
    field.linear.diagonal().setOnes();
    const Matrix baseline = SubStream(params.seed, 2).symmetric_matrix(3, 6, params.gamma0);
    field.q1 = baseline + SubStream(params.seed, 3).symmetric_matrix(3, 6, params.gamma_q);
    field.q2 = baseline + SubStream(params.seed, 4).symmetric_matrix(3, 6, params.gamma_q);
    return field;
}

PointSet apply_bump_blend(const BumpBlendField& field, const PointSet& pts) {
    detail::require(pts.dim() == 3, "apply_bump_blend: points must be 3D");
    Matrix out(pts.size(), 3);
    for (Index m = 0; m < pts.size(); ++m) {
        const Vector y = pts.point(m);
        const auto [w1, w2] = blend_weights(y, field.c1, field.c2, field.sigma_bump);
        const auto phi = quadratic_basis(y - field.center);
        out.row(m) = (field.linear * y + field.translation +
                      (w1 * field.q1 + w2 * field.q2) * phi)
                         .transpose();
    }
    return PointSet(std::move(out));
}

AnalyticMap random_analytic_deformation(int dim, int order, const SynthParams& params) {
    detail::require(order >= 1, "random_analytic_deformation: order must be >= 1");
    detail::require(params.gamma0 >= 0.0, "random_analytic_deformation: negative range");

    AnalyticMap identity = AnalyticMap::identity(dim, order, Vector::Zero(dim));
    std::vector<Matrix> blocks = identity.blocks();
    double factorial = 1.0;
    for (int r = 0; r <= order; ++r) {
        if (r > 0) factorial *= r;
        SubStream stream(params.seed, static_cast<std::uint64_t>(r));
        blocks[static_cast<std::size_t>(r)] +=
            stream.symmetric_matrix(dim, monomial_count(dim, r), params.gamma0 / factorial);
    }
    return AnalyticMap(Vector::Zero(dim), std::move(blocks));
}

PointSet sample_shape(const std::string& name, Index count, std::uint64_t seed) {
    detail::require(count >= 1, "sample_shape: count must be >= 1");
    SubStream stream(seed, 0x5a5a);

    if (name == "square2d") {
        Matrix pts(count, 2);
        for (Index i = 0; i < count; ++i) {
            pts(i, 0) = stream.symmetric(1.0);
            pts(i, 1) = stream.symmetric(1.0);
        }
        return PointSet(std::move(pts));
    }
    if (name == "ring2d") {
        Matrix pts(count, 2);
        for (Index i = 0; i < count; ++i) {
            const double angle = 2.0 * std::numbers::pi * stream.unit();
            const double radius = 0.6 + 0.4 * stream.unit();
            pts(i, 0) = radius * std::cos(angle);
            pts(i, 1) = radius * std::sin(angle);
        }
        return PointSet(std::move(pts));
    }
    if (name == "ellipsoid3d" || name == "sphere3d") {
        const bool surface = (name == "sphere3d");
        const Vector axes = surface ? Vector::Ones(3)
                                    : (Vector(3) << 1.0, 0.7, 0.5).finished();
        Matrix pts(count, 3);
        Index filled = 0;
        while (filled < count) {
            Vector p(3);
            p << stream.symmetric(1.0), stream.symmetric(1.0), stream.symmetric(1.0);
            const double norm = p.norm();
            if (norm > 1.0 || norm == 0.0) continue;
            if (surface) p /= norm;
            pts.row(filled++) = p.cwiseProduct(axes).transpose();
        }
        return PointSet(std::move(pts));
    }
    if (name == "blobs3d") {
        // Asymmetric union of anisotropic ball clusters spread along x. The
        // distinctive local shapes and uneven masses give the posterior layer
        // unambiguous geometry to lock onto.
        constexpr int k = 6;
        constexpr double centers[k][3] = {
            {-1.00, -0.10, 0.05}, {-0.55, 0.40, -0.30}, {-0.15, -0.45, 0.35},
            {0.25, 0.35, 0.25},   {0.60, -0.25, -0.35}, {1.00, 0.15, 0.00}};
        constexpr double radii[k][3] = {
            {0.38, 0.18, 0.25}, {0.15, 0.30, 0.12}, {0.22, 0.12, 0.30},
            {0.12, 0.25, 0.18}, {0.28, 0.14, 0.22}, {0.20, 0.35, 0.14}};
        constexpr double share[k] = {0.26, 0.12, 0.18, 0.12, 0.14, 0.18};
        Matrix pts(count, 3);
        Index i = 0;
        for (int b = 0; b < k; ++b) {
            const Index n = (b == k - 1)
                                ? count - i
                                : static_cast<Index>(std::llround(share[b] * count));
            for (Index j = 0; j < n && i < count; ++j, ++i) {
                Vector p(3);
                do {
                    p << stream.symmetric(1.0), stream.symmetric(1.0), stream.symmetric(1.0);
                } while (p.norm() > 1.0);
                for (int l = 0; l < 3; ++l) pts(i, l) = centers[b][l] + radii[b][l] * p[l];
            }
        }
        return PointSet(std::move(pts));
    }
    throw std::invalid_argument("sample_shape: unknown shape '" + name + "'");
}

}  // namespace acpd
