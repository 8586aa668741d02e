#include "spinimage/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spinimage/bp.hpp"
#include "spinimage/errors.hpp"
#include "spinimage/lp.hpp"
#include "spinimage/numeric.hpp"
#include "spinimage/rng.hpp"

namespace spinimage {

VertexImages vertex_images(const InteractionMatrix& a, int d, std::int64_t state_budget) {
    validate(a);
    std::int64_t states = ipow(a.q, d);
    if (states > state_budget) throw ResourceError("vertex_images: q^d exceeds budget");
    VertexImages out;
    for (std::int64_t idx = 0; idx < states; ++idx) {
        Configuration tau = config_unindex(idx, a.q, d);
        // message for a point mass is just prod_i A(c, tau(i))
        std::vector<double> message(a.q);
        double total = 0.0;
        for (int c = 0; c < a.q; ++c) {
            double prod = 1.0;
            for (int i = 0; i < d; ++i) prod *= a.at(c, tau.sites[i]);
            message[c] = prod;
            total += prod;
        }
        if (total <= 0.0) {
            out.infeasible.push_back(idx);
            continue;
        }
        normalize_in_place(message, total);
        out.indices.push_back(idx);
        out.images.push_back(std::move(message));
    }
    return out;
}

JointDistribution mixture_weights(const InteractionMatrix& a, const JointDistribution& mu) {
    validate(mu);
    if (mu.q != a.q) throw ValidationError("mixture_weights: mu.q != A.q");
    JointDistribution xi{mu.q, mu.d, std::vector<double>(mu.weights.size(), 0.0)};
    KahanSum total;
    std::int64_t states = static_cast<std::int64_t>(mu.weights.size());
    for (std::int64_t idx = 0; idx < states; ++idx) {
        if (mu.weights[idx] <= 0.0) continue;
        std::int64_t rest = idx;
        std::vector<double> prods(a.q, 1.0);
        for (int i = 0; i < mu.d; ++i) {
            int color = static_cast<int>(rest % a.q);
            for (int c = 0; c < a.q; ++c) prods[c] *= a.at(c, color);
            rest /= a.q;
        }
        double s = std::accumulate(prods.begin(), prods.end(), 0.0);
        xi.weights[idx] = mu.weights[idx] * s;
        total.add(xi.weights[idx]);
    }
    if (total.value() <= 0.0) throw InfeasibleError("mixture_weights: infeasible mu");
    normalize_in_place(xi.weights, total.value());
    return xi;
}

HullMembershipReport hull_membership(const std::vector<double>& point, const InteractionMatrix& a,
                                     int d, double tol) {
    if (static_cast<int>(point.size()) != a.q)
        throw ValidationError("hull_membership: point dimension != q");
    VertexImages vimg = vertex_images(a, d);
    std::size_t m = vimg.images.size();
    if (m == 0) throw InfeasibleError("hull_membership: no feasible vertex images");

    // minimize t  s.t.  |V w - point|_inf <= t,  sum w = 1,  w >= 0
    std::size_t n = m + 1;  // w..., t
    std::vector<double> c(n, 0.0);
    c[m] = 1.0;
    std::vector<std::vector<double>> a_ub;
    std::vector<double> b_ub;
    for (int r = 0; r < a.q; ++r) {
        std::vector<double> pos(n, 0.0), neg(n, 0.0);
        for (std::size_t j = 0; j < m; ++j) {
            pos[j] = vimg.images[j][r];
            neg[j] = -vimg.images[j][r];
        }
        pos[m] = -1.0;
        neg[m] = -1.0;
        a_ub.push_back(std::move(pos));
        b_ub.push_back(point[r]);
        a_ub.push_back(std::move(neg));
        b_ub.push_back(-point[r]);
    }
    std::vector<std::vector<double>> a_eq(1, std::vector<double>(n, 1.0));
    a_eq[0][m] = 0.0;
    std::vector<double> b_eq{1.0};

    LpResult lp = solve_lp(c, a_ub, b_ub, a_eq, b_eq);
    if (!lp.feasible) throw InfeasibleError("hull_membership: LP infeasible");

    HullMembershipReport report;
    report.point = point;
    report.weights.assign(lp.x.begin(), lp.x.begin() + m);
    // recompute the violation from the recovered weights rather than trusting
    // the LP objective
    std::vector<double> recon(a.q, 0.0);
    for (std::size_t j = 0; j < m; ++j)
        for (int r = 0; r < a.q; ++r) recon[r] += report.weights[j] * vimg.images[j][r];
    report.max_violation = linf_diff(recon, point);
    report.is_member = report.max_violation <= tol;
    return report;
}

std::vector<double> project_to_simplex(const std::vector<double>& v) {
    std::vector<double> u = v;
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cumsum = 0.0;
    double theta = 0.0;
    int rho = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        cumsum += u[i];
        double t = (cumsum - 1.0) / static_cast<double>(i + 1);
        if (u[i] - t > 0.0) {
            rho = static_cast<int>(i + 1);
            theta = t;
        }
    }
    (void)rho;
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(0.0, v[i] - theta);
    return out;
}

namespace {

double eval_objective(const InteractionMatrix& a, const ProductMeasure& nu,
                      const std::vector<double>& objective) {
    std::vector<double> f = bp_factored_raw(a, nu.marginals);
    double v = 0.0;
    for (int c = 0; c < a.q; ++c) v += objective[c] * f[c];
    return v;
}

// central finite differences in the ambient d*q coordinates
std::vector<std::vector<double>> fd_gradient(const InteractionMatrix& a, const ProductMeasure& nu,
                                             const std::vector<double>& objective) {
    const double h = 1e-6;
    int d = nu.d(), q = nu.q();
    std::vector<std::vector<double>> grad(d, std::vector<double>(q, 0.0));
    ProductMeasure work = nu;
    for (int i = 0; i < d; ++i) {
        for (int c = 0; c < q; ++c) {
            double orig = work.marginals[i][c];
            work.marginals[i][c] = orig + h;
            double up = eval_objective(a, work, objective);
            work.marginals[i][c] = std::max(0.0, orig - h);
            double down = eval_objective(a, work, objective);
            double denom = (orig + h) - std::max(0.0, orig - h);
            grad[i][c] = (up - down) / denom;
            work.marginals[i][c] = orig;
        }
    }
    return grad;
}

}  // namespace

ExtremumReport product_image_extremum(const InteractionMatrix& a, int d,
                                      const std::vector<double>& objective, int restarts,
                                      std::uint64_t seed, bool maximize) {
    validate(a);
    if (static_cast<int>(objective.size()) != a.q)
        throw ValidationError("product_image_extremum: objective dimension != q");
    if (restarts < 1) throw ValidationError("product_image_extremum: budget = 0");

    const int max_iters = 200;
    double sign = maximize ? -1.0 : 1.0;  // always minimize sign * objective

    ExtremumReport report;
    report.maximize = maximize;
    report.restarts = restarts;
    report.seed = seed;

    auto signed_value = [&](const ProductMeasure& nu) {
        return sign * eval_objective(a, nu, objective);
    };

    double best = 0.0;
    bool have_best = false;
    for (int r = 0; r < restarts; ++r) {
        ProductMeasure nu;
        if (r == 0) {
            nu = ProductMeasure::uniform(a.q, d);
        } else if (r <= a.q) {
            nu = ProductMeasure::monochromatic(a.q, d, r - 1);
        } else {
            auto rng = make_stream(seed, static_cast<std::uint64_t>(r));
            nu.marginals.resize(d);
            for (int i = 0; i < d; ++i) nu.marginals[i] = dirichlet_flat(rng, a.q);
        }

        double value = signed_value(nu);
        double step = 1.0;
        for (int iter = 0; iter < max_iters; ++iter) {
            auto grad = fd_gradient(a, nu, objective);
            ProductMeasure trial = nu;
            for (int i = 0; i < d; ++i) {
                for (int c = 0; c < a.q; ++c) trial.marginals[i][c] -= step * sign * grad[i][c];
                trial.marginals[i] = project_to_simplex(trial.marginals[i]);
            }
            double trial_value = signed_value(trial);
            if (trial_value < value) {
                nu = std::move(trial);
                value = trial_value;
                step = std::min(step * 1.5, 4.0);
            } else {
                step *= 0.5;
                if (step < 1e-12) break;
            }
        }

        report.outcomes.push_back(RestartOutcome{sign * value, nu});
        if (!have_best || value < best) {
            best = value;
            report.argopt = report.outcomes.back().nu;
            have_best = true;
        }
    }
    report.value = sign * best;
    return report;
}

}  // namespace spinimage
