#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spinimage/core.hpp"

namespace spinimage {

struct VertexImages {
    std::vector<std::int64_t> indices;        // configuration indices with feasible images
    std::vector<std::vector<double>> images;  // F(delta_tau), aligned with indices
    std::vector<std::int64_t> infeasible;     // excluded configurations (zero message)
};

/// F(delta_tau) for every tau in [q]^d; configurations whose message vanishes
/// are excluded and recorded.
VertexImages vertex_images(const InteractionMatrix& a, int d,
                           std::int64_t state_budget = std::int64_t(1) << 24);

/// xi_mu(tau) proportional to mu(tau) * sum_c prod_i A(c, tau(i)). Satisfies
/// F(mu) = sum_tau xi_mu(tau) F(delta_tau).
JointDistribution mixture_weights(const InteractionMatrix& a, const JointDistribution& mu);

struct HullMembershipReport {
    std::vector<double> point;
    bool is_member = false;
    std::vector<double> weights;  // convex coefficients over vertex_images order
    double max_violation = 0.0;
};

/// Membership of `point` in conv{F(delta_tau)}: minimize the l-inf
/// reconstruction error over the weight simplex (LP); member iff optimum <= tol.
HullMembershipReport hull_membership(const std::vector<double>& point, const InteractionMatrix& a,
                                     int d, double tol = 1e-9);

struct RestartOutcome {
    double value = 0.0;
    ProductMeasure nu;
};

struct ExtremumReport {
    double value = 0.0;
    ProductMeasure argopt;
    bool maximize = false;
    int restarts = 0;
    std::uint64_t seed = 0;
    std::vector<RestartOutcome> outcomes;  // one per restart, final point each
};

/// Multistart projected-gradient optimization of <objective, F(nu)> over
/// product measures. Starts: uniform, every monochromatic vertex, then
/// Dirichlet draws. Stochastic bound, not a certificate.
ExtremumReport product_image_extremum(const InteractionMatrix& a, int d,
                                      const std::vector<double>& objective, int restarts,
                                      std::uint64_t seed, bool maximize = false);

/// Euclidean projection of v onto the probability simplex.
std::vector<double> project_to_simplex(const std::vector<double>& v);

}  // namespace spinimage
