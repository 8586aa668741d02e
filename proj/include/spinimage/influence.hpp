#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spinimage/core.hpp"

namespace spinimage {

enum class PotentialKind { identity, log, sqrt };

/// Strictly monotone reparameterization of marginals, evaluated on
/// [floor, 1]. L = sup|phi|, L_prime = inf|phi'| on that interval.
struct Potential {
    PotentialKind kind = PotentialKind::identity;
    double floor = 1e-3;

    double phi(double x) const;
    double phi_inv(double x) const;
    double sup_abs() const;        // L
    double inf_abs_deriv() const;  // L'
    const char* name() const;
};

Potential make_potential(const std::string& kind, double floor);

struct InfluenceReport {
    std::string graph_digest;
    Pinning pinning;
    std::vector<int> vertices;        // unpinned, ascending; block order of psi
    std::vector<double> psi;          // (nq) x (nq) row-major, n = vertices.size()
    double lambda_max = 0.0;
    double max_imag = 0.0;            // largest |Im| over the spectrum
    bool spectrum_real = false;       // max_imag <= 1e-8
};

/// Entry (b, c) is mu^{pin, r<-b}_v(c) - mu^pin_v(c); rows for colors b with
/// zero conditional mass are zero.
std::vector<double> influence_submatrix(const Graph& g, const InteractionMatrix& a,
                                        const Pinning& pinning, int r, int v,
                                        std::int64_t state_budget = std::int64_t(1) << 24);

InfluenceReport influence_matrix(const Graph& g, const InteractionMatrix& a,
                                 const Pinning& pinning,
                                 std::int64_t state_budget = std::int64_t(1) << 24);

/// phi(F(phi^{-1}(x_1), ..., phi^{-1}(x_d))), componentwise in potential space;
/// F components are clamped to [floor, 1] before phi.
std::vector<double> bp_in_potential_space(const InteractionMatrix& a, const Potential& pot,
                                          const std::vector<std::vector<double>>& x);

/// Central finite-difference Jacobian of the potential-space map at the tuple
/// x; block i holds dF^phi_c / dx_{i,b}, each block q x q row-major.
std::vector<std::vector<double>> fd_jacobian(const InteractionMatrix& a, const Potential& pot,
                                             const std::vector<std::vector<double>>& x,
                                             double step = 1e-6);

enum class NormKind { l1, l2, linf };

NormKind parse_norm(const std::string& name);

/// Induced norm of the block row [J_1 ... J_d] from the product of K-balls to
/// the K-norm: exact row/column norms for linf/l1, power-like iteration for l2.
double induced_block_norm(const std::vector<std::vector<double>>& blocks, int q, NormKind k);

struct ContractionReport {
    std::string matrix_digest;
    int delta = 0;
    std::string potential;
    double floor = 0.0;
    std::string norm;
    int n_samples = 0;
    std::uint64_t seed = 0;
    double estimate = 0.0;          // max over samples; a sampled lower bound on the sup
    double max_one_minus_delta = 0.0;
};

/// Sampled lower bound on sup over degrees d < delta and message tuples of the
/// induced Jacobian norm of the potential-transformed map. Never a certificate.
ContractionReport contraction_estimate(const InteractionMatrix& a, int delta,
                                       const Potential& pot, NormKind k, int n_samples,
                                       std::uint64_t seed);

json to_json(const InfluenceReport& report);
json to_json(const ContractionReport& report);

}  // namespace spinimage
