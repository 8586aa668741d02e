#include "spinimage/antiferro.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <random>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "spinimage/bp.hpp"
#include "spinimage/errors.hpp"
#include "spinimage/numeric.hpp"
#include "spinimage/rng.hpp"

namespace spinimage {

namespace {

std::string digest(const std::vector<double>& w) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (double x : w) {
        std::uint64_t bits;
        std::memcpy(&bits, &x, sizeof bits);
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xffULL;
            h *= 0x100000001b3ULL;
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

RankOneMinusDiag finish_decomposition(const InteractionMatrix& a, std::vector<double> v,
                                      double tol) {
    int q = a.q;
    RankOneMinusDiag dec;
    dec.v = std::move(v);
    dec.diag.resize(q);
    dec.y.resize(q);
    for (int c = 0; c < q; ++c) {
        if (dec.v[c] <= 0.0)
            throw ValidationError("rank-one-minus-diagonal: v must be strictly positive");
        dec.diag[c] = dec.v[c] * dec.v[c] - a.at(c, c);
        if (dec.diag[c] < -tol || dec.diag[c] > dec.v[c] * dec.v[c] + tol)
            throw InfeasibleError("not of rank-one-minus-diagonal form (diagonal out of range)");
        dec.diag[c] = std::clamp(dec.diag[c], 0.0, dec.v[c] * dec.v[c]);
        dec.y[c] = dec.diag[c] / (dec.v[c] * dec.v[c]);
    }
    double residual = 0.0;
    for (int b = 0; b < q; ++b)
        for (int c = 0; c < q; ++c) {
            double want = dec.v[b] * dec.v[c] - (b == c ? dec.diag[b] : 0.0);
            residual = std::max(residual, std::fabs(want - a.at(b, c)));
        }
    if (residual > tol)
        throw InfeasibleError("not of rank-one-minus-diagonal form (off-diagonal residual " +
                              std::to_string(residual) + ")");
    return dec;
}

}  // namespace

RankOneMinusDiag decompose_rank_one_minus_diag(const InteractionMatrix& a, double tol) {
    validate(a);
    if (a.q < 3)
        throw ValidationError(
            "decompose_rank_one_minus_diag: q >= 3 required; at q = 2 pass v explicitly");
    std::vector<double> v(a.q);
    for (int b = 0; b < a.q; ++b) {
        int c = b == 0 ? 1 : 0;
        int cp = b <= 1 ? 2 : 1;
        if (a.at(c, cp) <= 0.0 || a.at(b, c) <= 0.0 || a.at(b, cp) <= 0.0)
            throw InfeasibleError(
                "decompose_rank_one_minus_diag: zero off-diagonal entry, v unrecoverable");
        v[b] = std::sqrt(a.at(b, c) * a.at(b, cp) / a.at(c, cp));
    }
    return finish_decomposition(a, std::move(v), tol);
}

RankOneMinusDiag rank_one_minus_diag_with(const InteractionMatrix& a,
                                          const std::vector<double>& v, double tol) {
    validate(a);
    if (static_cast<int>(v.size()) != a.q)
        throw ValidationError("rank_one_minus_diag_with: v has wrong length");
    return finish_decomposition(a, v, tol);
}

SignatureDistribution signature_distribution(const JointDistribution& mu,
                                             const std::vector<double>& v) {
    validate(mu);
    if (static_cast<int>(v.size()) != mu.q)
        throw ValidationError("signature_distribution: v has wrong length");
    SignatureDistribution xi;
    xi.q = mu.q;
    xi.d = mu.d;
    std::map<std::vector<int>, std::size_t> index;
    std::int64_t states = static_cast<std::int64_t>(mu.weights.size());
    KahanSum total;
    for (std::int64_t idx = 0; idx < states; ++idx) {
        if (mu.weights[idx] <= 0.0) continue;
        std::vector<int> alpha(mu.q, 0);
        std::int64_t rest = idx;
        double vw = 1.0;
        for (int i = 0; i < mu.d; ++i) {
            int color = static_cast<int>(rest % mu.q);
            ++alpha[color];
            vw *= v[color];
            rest /= mu.q;
        }
        auto [it, fresh] = index.try_emplace(alpha, xi.compositions.size());
        if (fresh) {
            xi.compositions.push_back(std::move(alpha));
            xi.probs.push_back(0.0);
        }
        xi.probs[it->second] += mu.weights[idx] * vw;
        total.add(mu.weights[idx] * vw);
    }
    if (total.value() <= 0.0) throw InfeasibleError("signature_distribution: zero mass");
    normalize_in_place(xi.probs, total.value());
    return xi;
}

namespace {

// m[c] = E_xi[(1 - y[c])^alpha[c]]^{1/d}
std::vector<double> criterion_moments(const SignatureDistribution& xi,
                                      const std::vector<double>& y) {
    std::vector<double> m(xi.q, 0.0);
    for (int c = 0; c < xi.q; ++c) {
        KahanSum acc;
        for (std::size_t j = 0; j < xi.probs.size(); ++j)
            acc.add(xi.probs[j] * std::pow(1.0 - y[c], xi.compositions[j][c]));
        m[c] = std::pow(acc.value(), 1.0 / static_cast<double>(xi.d));
    }
    return m;
}

}  // namespace

CriterionResult iid_criterion(const RankOneMinusDiag& dec, const JointDistribution& mu) {
    for (double yc : dec.y)
        if (yc <= 0.0)
            throw InfeasibleError("iid_criterion: criterion undefined; use solve_product directly");
    SignatureDistribution xi = signature_distribution(mu, dec.v);
    CriterionResult result;
    result.m = criterion_moments(xi, dec.y);
    double lhs = 0.0, inv_sum = 0.0;
    for (int c = 0; c < xi.q; ++c) {
        lhs += result.m[c] / dec.y[c];
        inv_sum += 1.0 / dec.y[c];
    }
    double rhs = (-1.0 + inv_sum) * *std::max_element(result.m.begin(), result.m.end());
    result.slack = lhs - rhs;
    result.holds = result.slack >= -1e-12;
    return result;
}

CriterionResult potts_criterion(const JointDistribution& mu, double beta) {
    if (beta <= 0.0 || beta >= 1.0)
        throw ValidationError("potts_criterion: need 0 < beta < 1");
    SignatureDistribution xi = signature_distribution(mu, std::vector<double>(mu.q, 1.0));
    CriterionResult result;
    result.m = criterion_moments(xi, std::vector<double>(mu.q, 1.0 - beta));
    double lhs = 0.0;
    for (double mc : result.m) lhs += mc;
    double rhs = (mu.q - (1.0 - beta)) * *std::max_element(result.m.begin(), result.m.end());
    result.slack = lhs - rhs;
    result.holds = result.slack >= -1e-12;
    return result;
}

namespace {

std::vector<double> message_root(const InteractionMatrix& a, const JointDistribution& mu) {
    std::vector<double> g = unnormalized_message(a, mu);
    for (double& x : g) x = std::pow(std::max(x, 0.0), 1.0 / static_cast<double>(mu.d));
    return g;
}

}  // namespace

std::vector<double> solve_x_direct(const InteractionMatrix& a, const JointDistribution& mu) {
    validate(a);
    if (a.q != mu.q) throw ValidationError("solve_x_direct: mu.q != A.q");
    Eigen::MatrixXd mat(a.q, a.q);
    for (int i = 0; i < a.q; ++i)
        for (int j = 0; j < a.q; ++j) mat(i, j) = a.at(i, j);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(mat, Eigen::ComputeThinU | Eigen::ComputeThinV);
    double smax = svd.singularValues()(0);
    double smin = svd.singularValues()(a.q - 1);
    if (smax <= 0.0 || smin / smax < 1e-10)
        throw InfeasibleError("interaction matrix not invertible; criterion path unavailable");
    std::vector<double> g = message_root(a, mu);
    Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(g.data(), a.q);
    Eigen::VectorXd x = svd.solve(rhs);
    return std::vector<double>(x.data(), x.data() + a.q);
}

std::vector<double> solve_x_rank_one(const RankOneMinusDiag& dec, const JointDistribution& mu) {
    int q = dec.q();
    for (double yc : dec.y)
        if (yc <= 0.0)
            throw InfeasibleError("solve_x_rank_one: zero y coordinate, closed form unavailable");
    InteractionMatrix a = InteractionMatrix::zero(q);
    for (int b = 0; b < q; ++b)
        for (int c = 0; c < q; ++c)
            a.at(b, c) = dec.v[b] * dec.v[c] - (b == c ? dec.diag[b] : 0.0);
    std::vector<double> g = message_root(a, mu);
    // A^{-1} = diag(1/v) (1*1^T - diag y)^{-1} diag(1/v), and the middle
    // inverse is -diag(1/y) - diag(1/y) 1*1^T diag(1/y) / (1 - sum 1/y)
    double inv_sum = 0.0, t = 0.0;
    std::vector<double> z(q);
    for (int c = 0; c < q; ++c) {
        z[c] = g[c] / dec.v[c];
        inv_sum += 1.0 / dec.y[c];
        t += z[c] / dec.y[c];
    }
    std::vector<double> x(q);
    for (int c = 0; c < q; ++c)
        x[c] = (-z[c] / dec.y[c] - t / (dec.y[c] * (1.0 - inv_sum))) / dec.v[c];
    return x;
}

SolveProductResult solve_product(const InteractionMatrix& a, const JointDistribution& mu) {
    SolveProductResult result;
    result.x = solve_x_direct(a, mu);
    double min_x = *std::min_element(result.x.begin(), result.x.end());
    if (min_x < -1e-12) return result;  // genuine "none", not roundoff

    std::vector<double> p = result.x;
    double total = 0.0;
    for (double& xc : p) {
        xc = std::max(xc, 0.0);
        total += xc;
    }
    if (total <= 0.0) return result;
    normalize_in_place(p, total);
    result.nu = ProductMeasure::iid(p, mu.d);
    result.f_residual = linf_diff(bp(a, mu), bp_product(a, result.nu));
    result.found = true;
    return result;
}

double gamma_star(double beta, double eps) {
    if (beta < 0.0 || beta > 1.0 || eps > 0.25)
        throw ValidationError("gamma_star: need 0 <= beta <= 1 and eps <= 1/4");
    return std::min(1.0 - std::sqrt(beta) + eps, 0.1);
}

bool tail_bound_check(const JointDistribution& mu, double beta, double eps) {
    double threshold = gamma_star(beta, eps) * mu.d / mu.q;
    SignatureDistribution xi = signature_distribution(mu, std::vector<double>(mu.q, 1.0));
    for (int c = 0; c < mu.q; ++c) {
        KahanSum tail;
        for (std::size_t j = 0; j < xi.probs.size(); ++j)
            if (xi.compositions[j][c] <= threshold + 1e-12) tail.add(xi.probs[j]);
        if (tail.value() > eps) return false;
    }
    return true;
}

namespace {

// Exact neighborhood marginal mu_{G-r, N(r)} of a random small graph whose
// root r has degree d.
JointDistribution gibbs_neighborhood_sample(int q, int d, double beta, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> extra_count(0, 2);
    int extras = extra_count(rng);
    int n = 1 + d + extras;
    Graph g;
    g.n = n;
    std::vector<int> degree(n, 0);
    for (int i = 1; i <= d; ++i) {
        g.edges.emplace_back(0, i);
        ++degree[0];
        ++degree[i];
    }
    std::bernoulli_distribution coin(0.35);
    for (int u = 1; u < n; ++u)
        for (int w = u + 1; w < n; ++w)
            if (degree[u] < d + 1 && degree[w] < d + 1 && coin(rng)) {
                g.edges.emplace_back(u, w);
                ++degree[u];
                ++degree[w];
            }
    Graph rest = g.remove_vertex(0);
    GibbsResult gr = gibbs(rest, InteractionMatrix::potts(q, beta));
    std::vector<int> neighborhood(d);
    for (int i = 0; i < d; ++i) neighborhood[i] = i;  // root's neighbors, shifted down
    return marginalize(gr.dist, neighborhood);
}

}  // namespace

BulkExperimentReport bulk_experiment(int q, int d, double beta, double eps, int n_samples,
                                     std::uint64_t seed, bool allow_out_of_range) {
    if (!allow_out_of_range) {
        double low = std::max(0.0, 1.0 - static_cast<double>(q) / (d + 1));
        if (d < 2 * q || beta < low || beta > 1.0)
            throw ValidationError("bulk_experiment: (q, d, beta) outside the supported range; "
                                  "use the override to proceed without theory cover");
    }
    if (ipow(q, d) > kDefaultStateBudget)
        throw ResourceError("bulk_experiment: q^d exceeds enumeration budget");

    InteractionMatrix a = InteractionMatrix::potts(q, beta);
    BulkExperimentReport report;
    report.q = q;
    report.d = d;
    report.beta = beta;
    report.eps = eps;
    report.n_samples = n_samples;
    report.seed = seed;

    std::int64_t states = ipow(q, d);
    int kept = 0;
    for (std::uint64_t attempt = 0; kept < n_samples; ++attempt) {
        if (attempt > static_cast<std::uint64_t>(50) * n_samples)
            throw ResourceError("bulk_experiment: sampler could not find enough tail-passing draws");
        auto rng = make_stream(seed, attempt);
        JointDistribution mu;
        if (attempt % 2 == 0) {
            mu = JointDistribution{q, d, dirichlet_flat(rng, static_cast<std::size_t>(states))};
        } else {
            mu = gibbs_neighborhood_sample(q, d, beta, rng);
        }

        bool tail_ok = tail_bound_check(mu, beta, eps);
        SolveProductResult solved = solve_product(a, mu);
        if (!tail_ok) {
            ++report.non_tail_attempted;
            if (solved.found) ++report.non_tail_solved;
            continue;
        }
        ++kept;
        if (solved.found && solved.f_residual <= 1e-9) {
            ++report.successes;
            report.max_f_residual = std::max(report.max_f_residual, solved.f_residual);
        } else {
            ++report.failures;
            if (report.failure_exemplars.size() < 16)
                report.failure_exemplars.push_back(digest(mu.weights));
        }
    }
    return report;
}

InequalityReport check_claim_weird(const std::vector<int>& q_grid,
                                   const std::vector<double>& beta_grid) {
    InequalityReport report;
    bool first = true;
    for (int q : q_grid) {
        if (q < 2) throw ValidationError("check_claim_weird: q >= 2 required");
        for (double beta : beta_grid) {
            if (beta <= 0.0 || beta >= 1.0)
                throw ValidationError("check_claim_weird: need 0 < beta < 1");
            double lhs = (q - 1.0) / std::log(1.0 / beta) *
                         std::log((q - 1.0) / ((q - 1.0) - (1.0 - beta)));
            double slack = lhs - std::sqrt(beta);
            if (first || slack < report.min_slack) report.min_slack = slack;
            first = false;
            ++report.points;
        }
    }
    report.pass = !first && report.min_slack >= -1e-12;
    return report;
}

double xi_function(int d, int q, double eps, double beta) {
    double f = std::log(eps * std::pow(beta, -d / (10.0 * q)) + (1.0 - eps)) / d -
               std::log(eps * std::pow(beta, 1.0 / (10.0 * q * (q - 1.0))) + (1.0 - eps));
    double g = std::log(1.0 / beta);
    return (q - 1.0) * f / g;
}

InequalityReport check_claim_insane(int d, int q, double eps, int grid_points) {
    if (d < 2 * q || eps > 0.25 || eps < 0.0)
        throw ValidationError("check_claim_insane: need d >= 2q and 0 <= eps <= 1/4");
    if (grid_points < 2) throw ValidationError("check_claim_insane: grid too small");
    double left = 1.0 - static_cast<double>(q) / (d + 1);
    double right = 1.0 - 1e-6;
    InequalityReport report;
    report.points = grid_points;
    double prev = 0.0;
    for (int j = 0; j < grid_points; ++j) {
        double beta = left + (right - left) * j / (grid_points - 1.0);
        double value = xi_function(d, q, eps, beta);
        if (j == 0)
            report.endpoint_value = value;
        else
            report.max_increase = std::max(report.max_increase, value - prev);
        prev = value;
    }
    report.pass = report.max_increase <= 1e-12 && report.endpoint_value <= eps + 1e-12;
    return report;
}

json to_json(const BulkExperimentReport& report) {
    return json{{"q", report.q},
                {"d", report.d},
                {"beta", report.beta},
                {"eps", report.eps},
                {"n_samples", report.n_samples},
                {"seed", report.seed},
                {"successes", report.successes},
                {"failures", report.failures},
                {"failure_exemplars", report.failure_exemplars},
                {"max_F_residual", report.max_f_residual},
                {"non_tail_attempted", report.non_tail_attempted},
                {"non_tail_solved", report.non_tail_solved}};
}

}  // namespace spinimage
