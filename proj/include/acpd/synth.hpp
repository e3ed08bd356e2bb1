#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "acpd/analytic_map.hpp"
#include "acpd/types.hpp"

namespace acpd {

struct SynthParams {
    double gamma0 = 0.4;   // baseline coefficient range
    double gamma_q = 0.2;  // per-center quadratic perturbation range
    std::uint64_t seed = 0;
    int analytic_order = 2;  // for the model-matched generators
};

/// Two-center smoothly blended quadratic field:
///   tau(y) = A y + t + (w1(y) Q1 + w2(y) Q2) phi2(y - center)
/// with phi2 the degree-2 Taylor basis block and w_i compactly supported bump
/// weights around c1/c2. Smooth but not a single analytic map unless Q1 == Q2.
struct BumpBlendField {
    Matrix linear;       // 3x3, unit diagonal
    Vector translation;  // 3
    Vector center;       // Taylor expansion center of the quadratic blocks
    Matrix q1, q2;       // 3x6 local quadratic templates
    Vector c1, c2;       // blend centers
    double sigma_bump = 0.0;
};

/// Compactly supported C-infinity bump: exp(-1 / (1 - (r/sigma)^2)) for r < sigma, else 0.
double bump(double r, double sigma);

/// Normalized two-center weights (w1, w2), w1 + w2 = 1. Throws std::domain_error
/// when both bumps vanish (point outside both supports).
std::pair<double, double> blend_weights(const Vector& y, const Vector& c1, const Vector& c2,
                                        double sigma);

/// Blend centers are the min-x / max-x model points; baseline blocks are drawn
/// uniformly from [-gamma0, gamma0] with the first-order diagonal forced to one;
/// the quadratic templates are the shared baseline perturbed by [-gamma_q, gamma_q]
/// draws. sigma_bump = ||c1 - c2||. One PRNG sub-stream per coefficient block, so
/// gamma_q = 0 reproduces the baseline field exactly.
BumpBlendField make_bump_blend_field(const PointSet& model, const SynthParams& params);

PointSet apply_bump_blend(const BumpBlendField& field, const PointSet& pts);

/// Identity plus random per-order coefficient blocks with entries drawn from
/// [-gamma0 / r!, gamma0 / r!] at degree r; expansion center at the origin.
AnalyticMap random_analytic_deformation(int dim, int order, const SynthParams& params);

/// Seeded sample clouds used by the synthetic benchmarks:
/// square2d, ring2d, ellipsoid3d, sphere3d.
PointSet sample_shape(const std::string& name, Index count, std::uint64_t seed);

}  // namespace acpd
