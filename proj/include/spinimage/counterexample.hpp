#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spinimage/core.hpp"
#include "spinimage/image.hpp"

namespace spinimage {

/// Append a special non-interacting spin: B[0][0] = beta, B[0][c+1] = 1,
/// B[c+1][b+1] = A[c][b]. Spin 0 of B is the special spin.
InteractionMatrix build_B(double beta, const InteractionMatrix& a);

/// Spins b maximizing sum_c A(c,b)^d, within relative tolerance of the max.
std::vector<int> maximizer_set(const InteractionMatrix& a, int d, double tol = 1e-10);

struct ConditionReport {
    bool pass = false;
    bool condition_a = false;  // A >= 1 entrywise, strict somewhere
    bool condition_b = false;  // |M| >= 2 and two maximizers distinguished by some row
    std::vector<int> maximizers;
    int witness_row = -1;      // row c with A(c,a1) != A(c,a2), when condition_b holds
    int witness_a1 = -1, witness_a2 = -1;
    std::vector<std::string> reasons;
};

ConditionReport check_technical_conditions(const InteractionMatrix& a, int d);

/// 1 / (1 + max_b sum_c A(c,b)^d): the floor of the special-spin coordinate
/// over all product measures.
double extremal_value(const InteractionMatrix& a, int d);

/// (1 - F_{B,0}(nu)) / F_{B,0}(nu) for a product measure over the (q+1)-spin
/// space; spin 0 of B is the special spin.
double tilde_ratio(const InteractionMatrix& b, const ProductMeasure& nu);

/// Mixture sum_a zeta(a) delta_a^{(x) d} of monochromatic point masses, zeta
/// supported on `support` (spin indices of B).
JointDistribution zeta_mixture(const std::vector<int>& support, const std::vector<double>& zeta,
                               int d, int q_total);

struct NonconvexityWitness {
    double beta = 0.0;
    InteractionMatrix a;
    int d = 0;
    InteractionMatrix b;
    std::vector<int> maximizer_set;  // spins of A
    double extremal_value = 0.0;
    int pair_a1 = -1, pair_a2 = -1, pair_coord = -1;  // spins / coordinate in B indexing
    double pair_gap = 0.0;
    double linearity_residual = 0.0;
    double vertex_value_residual = 0.0;
    std::vector<double> mixture_point;  // F_B(mu^zeta) for zeta uniform on (a1, a2)
    ExtremumReport optimizer_report;
    std::uint64_t seed = 0;
    int restarts = 0;
};

/// Assemble and check the full nonconvexity certificate. Throws
/// InfeasibleError naming the failing clause if any sub-check fails.
NonconvexityWitness certify_nonconvexity(double beta, const InteractionMatrix& a, int d,
                                         int restarts, std::uint64_t seed);

json witness_to_json(const NonconvexityWitness& w);

/// Recompute every claim in a stored witness from (beta, A, d, seed, restarts)
/// alone and cross-check the stored values. Returns a list of discrepancies
/// (empty = verified).
std::vector<std::string> verify_witness(const json& stored);

}  // namespace spinimage
