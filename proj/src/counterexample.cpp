#include "spinimage/counterexample.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "spinimage/bp.hpp"
#include "spinimage/errors.hpp"
#include "spinimage/numeric.hpp"
#include "spinimage/rng.hpp"

namespace spinimage {

InteractionMatrix build_B(double beta, const InteractionMatrix& a) {
    validate(a);
    if (beta < 1.0) throw ValidationError("build_B: beta < 1");
    InteractionMatrix b = InteractionMatrix::zero(a.q + 1);
    b.at(0, 0) = beta;
    for (int c = 0; c < a.q; ++c) {
        b.at(0, c + 1) = 1.0;
        b.at(c + 1, 0) = 1.0;
        for (int e = 0; e < a.q; ++e) b.at(c + 1, e + 1) = a.at(c, e);
    }
    return b;
}

namespace {

std::vector<double> column_power_sums(const InteractionMatrix& a, int d) {
    std::vector<double> sums(a.q, 0.0);
    for (int b = 0; b < a.q; ++b)
        for (int c = 0; c < a.q; ++c) sums[b] += std::pow(a.at(c, b), d);
    return sums;
}

}  // namespace

std::vector<int> maximizer_set(const InteractionMatrix& a, int d, double tol) {
    validate(a);
    std::vector<double> sums = column_power_sums(a, d);
    double top = *std::max_element(sums.begin(), sums.end());
    std::vector<int> m;
    for (int b = 0; b < a.q; ++b)
        if (sums[b] >= top * (1.0 - tol)) m.push_back(b);
    return m;
}

ConditionReport check_technical_conditions(const InteractionMatrix& a, int d) {
    validate(a);
    ConditionReport report;

    bool all_ge_one = true;
    bool some_strict = false;
    for (double x : a.entries) {
        if (x < 1.0) all_ge_one = false;
        if (x > 1.0) some_strict = true;
    }
    report.condition_a = all_ge_one && some_strict;
    if (!all_ge_one) report.reasons.push_back("condition (a): some entry below 1");
    if (!some_strict) report.reasons.push_back("condition (a): no entry strictly above 1");

    report.maximizers = maximizer_set(a, d);
    if (report.maximizers.size() < 2) {
        report.reasons.push_back("condition (b): maximizer set is a singleton");
    } else {
        for (int c = 0; c < a.q && report.witness_row < 0; ++c) {
            for (std::size_t i = 0; i < report.maximizers.size() && report.witness_row < 0; ++i) {
                for (std::size_t j = i + 1; j < report.maximizers.size(); ++j) {
                    int a1 = report.maximizers[i], a2 = report.maximizers[j];
                    if (a.at(c, a1) != a.at(c, a2)) {
                        report.witness_row = c;
                        report.witness_a1 = a1;
                        report.witness_a2 = a2;
                        break;
                    }
                }
            }
        }
        if (report.witness_row < 0)
            report.reasons.push_back(
                "condition (b): no row distinguishes any pair of maximizers");
    }
    report.condition_b = report.maximizers.size() >= 2 && report.witness_row >= 0;
    report.pass = report.condition_a && report.condition_b;
    return report;
}

double extremal_value(const InteractionMatrix& a, int d) {
    std::vector<double> sums = column_power_sums(a, d);
    return 1.0 / (1.0 + *std::max_element(sums.begin(), sums.end()));
}

double tilde_ratio(const InteractionMatrix& b, const ProductMeasure& nu) {
    std::vector<double> f = bp_product(b, nu);
    if (f[0] <= 0.0) throw InfeasibleError("tilde_ratio: zero special-spin coordinate");
    return (1.0 - f[0]) / f[0];
}

JointDistribution zeta_mixture(const std::vector<int>& support, const std::vector<double>& zeta,
                               int d, int q_total) {
    if (support.size() != zeta.size())
        throw ValidationError("zeta_mixture: support/weight length mismatch");
    JointDistribution mu{q_total, d, std::vector<double>(ipow(q_total, d), 0.0)};
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (support[i] < 0 || support[i] >= q_total)
            throw ValidationError("zeta_mixture: support outside spin range");
        Configuration tau{std::vector<int>(d, support[i])};
        mu.weights[config_index(tau, q_total, d)] += zeta[i];
    }
    validate(mu);
    return mu;
}

namespace {

double linearity_residual_for(const InteractionMatrix& b, const std::vector<int>& b_support,
                              const std::vector<double>& zeta, int d) {
    JointDistribution mu = zeta_mixture(b_support, zeta, d, b.q);
    std::vector<double> lhs = bp(b, mu);
    std::vector<double> rhs(b.q, 0.0);
    for (std::size_t i = 0; i < b_support.size(); ++i) {
        std::vector<double> f = bp(b, JointDistribution::monochromatic(b.q, d, b_support[i]));
        for (int c = 0; c < b.q; ++c) rhs[c] += zeta[i] * f[c];
    }
    return linf_diff(lhs, rhs);
}

}  // namespace

NonconvexityWitness certify_nonconvexity(double beta, const InteractionMatrix& a, int d,
                                         int restarts, std::uint64_t seed) {
    if (beta < 1.0) throw ValidationError("certify_nonconvexity: beta < 1");
    ConditionReport cond = check_technical_conditions(a, d);
    if (!cond.pass) {
        std::string msg = "certify_nonconvexity: technical conditions fail:";
        for (const auto& r : cond.reasons) msg += " [" + r + "]";
        throw InfeasibleError(msg);
    }

    NonconvexityWitness w;
    w.beta = beta;
    w.a = a;
    w.d = d;
    w.b = build_B(beta, a);
    w.maximizer_set = cond.maximizers;
    w.extremal_value = extremal_value(a, d);
    w.seed = seed;
    w.restarts = restarts;

    // (i) every maximizer vertex attains the extremal special-spin coordinate
    for (int spin : w.maximizer_set) {
        std::vector<double> f = bp(w.b, JointDistribution::monochromatic(w.b.q, d, spin + 1));
        w.vertex_value_residual =
            std::max(w.vertex_value_residual, std::fabs(f[0] - w.extremal_value));
    }
    if (w.vertex_value_residual > 1e-12)
        throw InfeasibleError("certify_nonconvexity: clause (i) failed (vertex value residual " +
                              std::to_string(w.vertex_value_residual) + ")");

    // (ii) linearity of F_B on mixtures of monochromatic maximizer masses
    std::vector<int> b_support;
    for (int spin : w.maximizer_set) b_support.push_back(spin + 1);
    std::size_t m = b_support.size();
    {
        std::vector<double> zeta(m, 1.0 / static_cast<double>(m));
        w.linearity_residual = linearity_residual_for(w.b, b_support, zeta, d);
    }
    for (int k = 0; k < 8; ++k) {
        auto rng = make_stream(seed, 1000 + static_cast<std::uint64_t>(k));
        std::vector<double> zeta = dirichlet_flat(rng, m);
        w.linearity_residual =
            std::max(w.linearity_residual, linearity_residual_for(w.b, b_support, zeta, d));
    }
    if (w.linearity_residual > 1e-12)
        throw InfeasibleError("certify_nonconvexity: clause (ii) failed (linearity residual " +
                              std::to_string(w.linearity_residual) + ")");

    // (iii) two maximizer vertices with visibly different images
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> fi = bp(w.b, JointDistribution::monochromatic(w.b.q, d, b_support[i]));
        for (std::size_t j = i + 1; j < m; ++j) {
            std::vector<double> fj =
                bp(w.b, JointDistribution::monochromatic(w.b.q, d, b_support[j]));
            for (int c = 0; c < w.b.q; ++c) {
                double gap = std::fabs(fi[c] - fj[c]);
                if (gap > w.pair_gap) {
                    w.pair_gap = gap;
                    w.pair_a1 = b_support[i];
                    w.pair_a2 = b_support[j];
                    w.pair_coord = c;
                }
            }
        }
    }
    if (w.pair_gap <= 1e-6)
        throw InfeasibleError("certify_nonconvexity: clause (iii) failed (max image gap " +
                              std::to_string(w.pair_gap) + ")");

    // mixture point for zeta uniform on the distinguished pair
    {
        JointDistribution mu = zeta_mixture({w.pair_a1, w.pair_a2}, {0.5, 0.5}, d, w.b.q);
        w.mixture_point = bp(w.b, mu);
    }

    // (iv) stochastic sweep: no product measure dips below the closed-form
    // floor, and every optimizer endpoint attaining it sits at a vertex
    std::vector<double> objective(w.b.q, 0.0);
    objective[0] = 1.0;
    w.optimizer_report = product_image_extremum(w.b, d, objective, restarts, seed, false);
    if (w.optimizer_report.value < w.extremal_value - 1e-9)
        throw InfeasibleError("certify_nonconvexity: clause (iv) failed (optimizer beat the "
                              "closed-form floor)");
    for (const auto& outcome : w.optimizer_report.outcomes) {
        if (outcome.value > w.extremal_value + 1e-9) continue;
        double best_dist = 1.0;
        for (int spin : b_support) {
            ProductMeasure vertex = ProductMeasure::monochromatic(w.b.q, d, spin);
            double dist = 0.0;
            for (int i = 0; i < d; ++i)
                dist = std::max(dist, linf_diff(outcome.nu.marginals[i], vertex.marginals[i]));
            best_dist = std::min(best_dist, dist);
        }
        if (best_dist > 1e-4)
            throw InfeasibleError("certify_nonconvexity: clause (iv) failed (minimizer not at a "
                                  "monochromatic vertex, distance " +
                                  std::to_string(best_dist) + ")");
    }

    return w;
}

json witness_to_json(const NonconvexityWitness& w) {
    json opt{{"value", w.optimizer_report.value},
             {"maximize", w.optimizer_report.maximize},
             {"restarts", w.optimizer_report.restarts},
             {"seed", w.optimizer_report.seed},
             {"argopt", to_json(w.optimizer_report.argopt)},
             {"note", "stochastic evidence: sampled lower bound, not a certificate"}};
    json minimizers = json::array();
    for (const auto& o : w.optimizer_report.outcomes) {
        if (o.value <= w.extremal_value + 1e-9)
            minimizers.push_back(json{{"value", o.value}, {"nu", to_json(o.nu)}});
    }
    opt["minimizers"] = minimizers;
    return json{{"beta", w.beta},
                {"A", to_json(w.a)},
                {"d", w.d},
                {"B", to_json(w.b)},
                {"maximizer_set", w.maximizer_set},
                {"extremal_value", w.extremal_value},
                {"distinct_pair",
                 json{{"a1", w.pair_a1},
                      {"a2", w.pair_a2},
                      {"coordinate", w.pair_coord},
                      {"gap", w.pair_gap}}},
                {"vertex_value_residual", w.vertex_value_residual},
                {"linearity_residual", w.linearity_residual},
                {"mixture_point", w.mixture_point},
                {"optimizer_report", opt},
                {"seed", w.seed},
                {"restarts", w.restarts}};
}

std::vector<std::string> verify_witness(const json& stored) {
    std::vector<std::string> issues;
    double beta = stored.at("beta").get<double>();
    InteractionMatrix a = interaction_from_json(stored.at("A"));
    int d = stored.at("d").get<int>();
    std::uint64_t seed = stored.at("seed").get<std::uint64_t>();
    int restarts = stored.at("restarts").get<int>();

    NonconvexityWitness fresh;
    try {
        fresh = certify_nonconvexity(beta, a, d, restarts, seed);
    } catch (const std::exception& e) {
        issues.push_back(std::string("re-certification failed: ") + e.what());
        return issues;
    }

    auto check_close = [&](const char* name, double got, double want, double tol) {
        if (std::fabs(got - want) > tol)
            issues.push_back(std::string(name) + ": stored " + std::to_string(want) +
                             " vs recomputed " + std::to_string(got));
    };
    check_close("extremal_value", fresh.extremal_value, stored.at("extremal_value").get<double>(),
                1e-12);
    if (fresh.maximizer_set != stored.at("maximizer_set").get<std::vector<int>>())
        issues.push_back("maximizer_set mismatch");
    check_close("distinct_pair.gap", fresh.pair_gap,
                stored.at("distinct_pair").at("gap").get<double>(), 1e-12);
    check_close("linearity_residual", fresh.linearity_residual,
                stored.at("linearity_residual").get<double>(), 1e-12);
    auto mix = stored.at("mixture_point").get<std::vector<double>>();
    if (mix.size() != fresh.mixture_point.size() || linf_diff(mix, fresh.mixture_point) > 1e-12)
        issues.push_back("mixture_point mismatch");
    check_close("optimizer value", fresh.optimizer_report.value,
                stored.at("optimizer_report").at("value").get<double>(), 1e-9);
    return issues;
}

}  // namespace spinimage
