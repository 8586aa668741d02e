#pragma once

#include <optional>
#include <vector>

#include "spinimage/core.hpp"

namespace spinimage {

// 24 bits of state: q^n <= 2^24 by default.
constexpr std::int64_t kDefaultStateBudget = std::int64_t(1) << 24;

/// Component c is E_{tau ~ mu}[prod_i A(c, tau(i))]. Single pass over mu's
/// support, compensated summation per component.
std::vector<double> unnormalized_message(const InteractionMatrix& a, const JointDistribution& mu);

/// The belief propagation functional F_A(mu): unnormalized_message scaled to
/// sum 1. Throws InfeasibleError when every component vanishes.
std::vector<double> bp(const InteractionMatrix& a, const JointDistribution& mu);

/// F_A on a product measure via the factorized form:
/// F_c proportional to prod_i sum_b A(c,b) nu_i(b).
std::vector<double> bp_product(const InteractionMatrix& a, const ProductMeasure& nu);

/// Same factorized evaluation on raw per-site weight vectors (no normalization
/// requirement on the inputs); used by the contraction estimator.
std::vector<double> bp_factored_raw(const InteractionMatrix& a,
                                    const std::vector<std::vector<double>>& site_weights);

/// (lambda * mu)(tau) proportional to mu(tau) * prod_i lambda[i][tau(i)].
JointDistribution tilt(const ExternalField& field, const JointDistribution& mu);

/// Exact marginal onto the site subset `sites` (output site order = input order).
JointDistribution marginalize(const JointDistribution& mu, const std::vector<int>& sites);

struct GibbsResult {
    JointDistribution dist;  // over [q]^n, mixed-radix in vertex order
    double log_z = 0.0;
    double z = 0.0;
};

/// Exhaustive Gibbs distribution mu(sigma) = (1/Z) prod_{uv in E} A(sigma(u),sigma(v))
/// * prod_v lambda[v][sigma(v)]. Fields default to all-ones.
GibbsResult gibbs(const Graph& g, const InteractionMatrix& a,
                  const std::optional<ExternalField>& fields = std::nullopt,
                  std::int64_t state_budget = kDefaultStateBudget);

/// || mu_{G,v} - F_{A,d}(mu_{G-v,N(v)}) ||_inf from two independent Gibbs
/// enumerations. With fields, the predicted marginal is additionally tilted by
/// the field row at v.
double check_vertex_recursion(const Graph& g, const InteractionMatrix& a, int v,
                              const std::optional<ExternalField>& fields = std::nullopt,
                              std::int64_t state_budget = kDefaultStateBudget);

}  // namespace spinimage
