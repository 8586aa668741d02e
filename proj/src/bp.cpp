#include "spinimage/bp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spinimage/errors.hpp"
#include "spinimage/numeric.hpp"

namespace spinimage {

std::vector<double> unnormalized_message(const InteractionMatrix& a, const JointDistribution& mu) {
    if (mu.q != a.q) throw ValidationError("unnormalized_message: mu.q != A.q");
    int q = a.q;
    std::vector<KahanSum> acc(q);
    std::int64_t states = static_cast<std::int64_t>(mu.weights.size());
    for (std::int64_t idx = 0; idx < states; ++idx) {
        double w = mu.weights[idx];
        if (w <= 0.0) continue;
        for (int c = 0; c < q; ++c) {
            std::int64_t rest = idx;
            double prod = 1.0;
            for (int i = 0; i < mu.d; ++i) {
                prod *= a.at(c, static_cast<int>(rest % q));
                rest /= q;
            }
            acc[c].add(w * prod);
        }
    }
    std::vector<double> message(q);
    for (int c = 0; c < q; ++c) message[c] = acc[c].value();
    return message;
}

namespace {

std::vector<double> normalize_message(std::vector<double> message, const char* who) {
    KahanSum total;
    for (double x : message) total.add(x);
    if (total.value() <= 0.0)
        throw InfeasibleError(std::string(who) +
                              ": infeasible input (all message components vanish)");
    normalize_in_place(message, total.value());
    return message;
}

}  // namespace

std::vector<double> bp(const InteractionMatrix& a, const JointDistribution& mu) {
    return normalize_message(unnormalized_message(a, mu), "bp");
}

std::vector<double> bp_factored_raw(const InteractionMatrix& a,
                                    const std::vector<std::vector<double>>& site_weights) {
    int q = a.q;
    std::vector<double> message(q);
    for (int c = 0; c < q; ++c) {
        double prod = 1.0;
        for (const auto& site : site_weights) {
            double s = 0.0;
            for (int b = 0; b < q; ++b) s += a.at(c, b) * site[b];
            prod *= s;
        }
        message[c] = prod;
    }
    return normalize_message(std::move(message), "bp_product");
}

std::vector<double> bp_product(const InteractionMatrix& a, const ProductMeasure& nu) {
    validate(nu);
    if (nu.q() != a.q) throw ValidationError("bp_product: nu.q != A.q");
    return bp_factored_raw(a, nu.marginals);
}

JointDistribution tilt(const ExternalField& field, const JointDistribution& mu) {
    if (field.d() != mu.d) throw ValidationError("tilt: field has wrong number of sites");
    JointDistribution out{mu.q, mu.d, std::vector<double>(mu.weights.size())};
    KahanSum total;
    std::int64_t states = static_cast<std::int64_t>(mu.weights.size());
    for (std::int64_t idx = 0; idx < states; ++idx) {
        std::int64_t rest = idx;
        double w = mu.weights[idx];
        for (int i = 0; i < mu.d; ++i) {
            w *= field.weights[i][rest % mu.q];
            rest /= mu.q;
        }
        out.weights[idx] = w;
        total.add(w);
    }
    if (total.value() <= 0.0) throw InfeasibleError("tilt: field annihilates distribution");
    normalize_in_place(out.weights, total.value());
    return out;
}

JointDistribution marginalize(const JointDistribution& mu, const std::vector<int>& sites) {
    if (sites.empty()) throw ValidationError("marginalize: empty site subset");
    for (int s : sites)
        if (s < 0 || s >= mu.d) throw ValidationError("marginalize: site out of range");
    int k = static_cast<int>(sites.size());
    JointDistribution out{mu.q, k, std::vector<double>(ipow(mu.q, k), 0.0)};
    std::vector<KahanSum> acc(out.weights.size());
    std::int64_t states = static_cast<std::int64_t>(mu.weights.size());
    std::vector<std::int64_t> radix(k), site_pow(k);
    for (int j = 0; j < k; ++j) {
        radix[j] = ipow(mu.q, j);
        site_pow[j] = ipow(mu.q, sites[j]);
    }
    for (std::int64_t idx = 0; idx < states; ++idx) {
        std::int64_t sub = 0;
        for (int j = 0; j < k; ++j) sub += ((idx / site_pow[j]) % mu.q) * radix[j];
        acc[sub].add(mu.weights[idx]);
    }
    for (std::size_t i = 0; i < acc.size(); ++i) out.weights[i] = acc[i].value();
    return out;
}

GibbsResult gibbs(const Graph& g, const InteractionMatrix& a,
                  const std::optional<ExternalField>& fields, std::int64_t state_budget) {
    validate(g);
    validate(a);
    if (fields) {
        validate(*fields);
        if (fields->d() != g.n) throw ValidationError("gibbs: fields have wrong vertex count");
    }
    double bits = g.n * std::log2(static_cast<double>(a.q));
    if (bits > std::log2(static_cast<double>(state_budget)) + 1e-9)
        throw ResourceError("gibbs: q^n exceeds enumeration budget");
    std::int64_t states = ipow(a.q, g.n);

    JointDistribution mu{a.q, g.n, std::vector<double>(states)};
    KahanSum z;
    std::vector<int> sigma(g.n, 0);
    for (std::int64_t idx = 0; idx < states; ++idx) {
        double w = 1.0;
        for (auto [u, v] : g.edges) w *= a.at(sigma[u], sigma[v]);
        if (fields)
            for (int v = 0; v < g.n; ++v) w *= fields->weights[v][sigma[v]];
        mu.weights[idx] = w;
        z.add(w);
        // mixed-radix increment, site 0 least significant
        for (int i = 0; i < g.n; ++i) {
            if (++sigma[i] < a.q) break;
            sigma[i] = 0;
        }
    }
    if (z.value() <= 0.0) throw InfeasibleError("gibbs: no feasible configuration (Z = 0)");
    normalize_in_place(mu.weights, z.value());
    return GibbsResult{std::move(mu), std::log(z.value()), z.value()};
}

double check_vertex_recursion(const Graph& g, const InteractionMatrix& a, int v,
                              const std::optional<ExternalField>& fields,
                              std::int64_t state_budget) {
    auto nbrs = g.neighbors(v);
    if (nbrs.empty()) throw ValidationError("check_vertex_recursion: vertex has degree 0");

    GibbsResult full = gibbs(g, a, fields, state_budget);
    std::vector<double> lhs = marginalize(full.dist, {v}).weights;

    Graph reduced = g.remove_vertex(v);
    std::optional<ExternalField> reduced_fields;
    if (fields) {
        ExternalField f;
        for (int u = 0; u < g.n; ++u)
            if (u != v) f.weights.push_back(fields->weights[u]);
        reduced_fields = std::move(f);
    }
    GibbsResult partial = gibbs(reduced, a, reduced_fields, state_budget);

    std::vector<int> mapped;
    for (int u : nbrs) mapped.push_back(u > v ? u - 1 : u);
    JointDistribution neighborhood = marginalize(partial.dist, mapped);

    std::vector<double> message = unnormalized_message(a, neighborhood);
    if (fields)
        for (int c = 0; c < a.q; ++c) message[c] *= fields->weights[v][c];
    KahanSum total;
    for (double x : message) total.add(x);
    if (total.value() <= 0.0)
        throw InfeasibleError("check_vertex_recursion: predicted marginal vanishes");
    normalize_in_place(message, total.value());

    return linf_diff(lhs, message);
}

}  // namespace spinimage
