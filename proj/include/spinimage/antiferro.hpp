#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spinimage/core.hpp"

namespace spinimage {

/// A = v v^T - diag(D) with v positive, 0 <= D[c] <= v[c]^2.
struct RankOneMinusDiag {
    std::vector<double> v;
    std::vector<double> diag;
    std::vector<double> y;  // y[c] = diag[c] / v[c]^2, in [0, 1]

    int q() const { return static_cast<int>(v.size()); }
};

/// Recover (v, D) from off-diagonal entries: v[b] = sqrt(A[b][c] A[b][c'] / A[c][c']).
/// Needs q >= 3; at q = 2 the decomposition is underdetermined from
/// off-diagonals alone, so pass v explicitly via rank_one_minus_diag_with.
RankOneMinusDiag decompose_rank_one_minus_diag(const InteractionMatrix& a, double tol = 1e-10);

/// Validate a caller-supplied v against A and derive (D, y).
RankOneMinusDiag rank_one_minus_diag_with(const InteractionMatrix& a, const std::vector<double>& v,
                                          double tol = 1e-10);

/// Distribution over color-count vectors alpha (|alpha| = d):
/// xi(alpha) proportional to prod_b v[b]^alpha[b] * mu(sgn = alpha).
struct SignatureDistribution {
    int q = 0, d = 0;
    std::vector<std::vector<int>> compositions;
    std::vector<double> probs;
};

SignatureDistribution signature_distribution(const JointDistribution& mu,
                                             const std::vector<double>& v);

struct CriterionResult {
    bool holds = false;
    double slack = 0.0;  // LHS - RHS
    std::vector<double> m;  // m[c] = E_xi[(1-y[c])^alpha[c]]^{1/d}
};

/// sum_c m[c]/y[c]  >=  (-1 + sum_c 1/y[c]) * max_c m[c]; holds iff
/// slack >= -1e-12. Requires y strictly positive.
CriterionResult iid_criterion(const RankOneMinusDiag& dec, const JointDistribution& mu);

/// Potts specialization (A = 1*1^T - (1-beta)I):
/// sum_c E[beta^alpha(c)]^{1/d} >= (q - (1-beta)) max_c E[beta^alpha(c)]^{1/d}.
/// Slack relates to the general criterion by a factor (1 - beta).
CriterionResult potts_criterion(const JointDistribution& mu, double beta);

/// x = A^{-1} G(mu)^{1/d}, two ways (for cross-checking): a dense linear solve,
/// and the closed-form inverse of 1*1^T - diag(y) conjugated by diag(v).
std::vector<double> solve_x_direct(const InteractionMatrix& a, const JointDistribution& mu);
std::vector<double> solve_x_rank_one(const RankOneMinusDiag& dec, const JointDistribution& mu);

struct SolveProductResult {
    bool found = false;
    ProductMeasure nu;
    double f_residual = 0.0;    // ||F(mu) - F(nu)||_inf when found
    std::vector<double> x;      // pre-clamp solution
};

/// Product measure nu with F(mu) = F(nu), via x = A^{-1} G(mu)^{1/d}:
/// negative dust above -1e-12 is clamped, anything below is a genuine "none".
SolveProductResult solve_product(const InteractionMatrix& a, const JointDistribution& mu);

/// min{1 - sqrt(beta) + eps, 1/10}
double gamma_star(double beta, double eps);

/// Pr[#{i : tau(i) = c} <= gamma_star * d / q] <= eps for every color c,
/// evaluated exactly from mu's color-count distribution.
bool tail_bound_check(const JointDistribution& mu, double beta, double eps);

struct BulkExperimentReport {
    int q = 0, d = 0;
    double beta = 0.0, eps = 0.0;
    int n_samples = 0;
    std::uint64_t seed = 0;
    int successes = 0;
    int failures = 0;
    std::vector<std::string> failure_exemplars;  // digests of failing mu
    double max_f_residual = 0.0;
    int non_tail_attempted = 0;   // samples failing the tail bound, still solved
    int non_tail_solved = 0;
};

/// Sample mu from two families (flat Dirichlet over q^d weights, and exact
/// Gibbs neighborhood marginals on small random graphs), keep n_samples
/// tail-passing ones, and run solve_product on each. `allow_out_of_range`
/// bypasses the theorem's hypothesis window (unsupported by theory).
BulkExperimentReport bulk_experiment(int q, int d, double beta, double eps, int n_samples,
                                     std::uint64_t seed, bool allow_out_of_range = false);

struct InequalityReport {
    bool pass = false;
    double min_slack = 0.0;      // claim "weird"
    double endpoint_value = 0.0; // claim "insane"
    double max_increase = 0.0;   // claim "insane": max forward difference on the grid
    int points = 0;
};

/// ((q-1)/log(1/beta)) * log((q-1)/((q-1)-(1-beta))) >= sqrt(beta) on a grid.
InequalityReport check_claim_weird(const std::vector<int>& q_grid,
                                   const std::vector<double>& beta_grid);

/// Xi_{d,q,eps}(beta) = (q-1) f(beta)/g(beta) with
/// f = (1/d) log(eps beta^{-d/(10q)} + 1-eps) - log(eps beta^{1/(10q(q-1))} + 1-eps),
/// g = log(1/beta): nonincreasing on [1 - q/(d+1), 1) and endpoint <= eps.
InequalityReport check_claim_insane(int d, int q, double eps, int grid_points = 200);

double xi_function(int d, int q, double eps, double beta);

json to_json(const BulkExperimentReport& report);

}  // namespace spinimage
