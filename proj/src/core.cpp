#include "spinimage/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "spinimage/errors.hpp"
#include "spinimage/numeric.hpp"

namespace spinimage {

InteractionMatrix InteractionMatrix::zero(int q) {
    return InteractionMatrix{q, std::vector<double>(static_cast<std::size_t>(q) * q, 0.0)};
}

InteractionMatrix InteractionMatrix::all_ones(int q) {
    return InteractionMatrix{q, std::vector<double>(static_cast<std::size_t>(q) * q, 1.0)};
}

InteractionMatrix InteractionMatrix::potts(int q, double beta) {
    InteractionMatrix a = all_ones(q);
    for (int c = 0; c < q; ++c) a.at(c, c) = beta;
    return a;
}

InteractionMatrix InteractionMatrix::hardcore_padded(int q) {
    InteractionMatrix a = all_ones(q);
    a.at(0, 0) = 0.0;
    return a;
}

JointDistribution JointDistribution::uniform(int q, int d) {
    std::int64_t states = ipow(q, d);
    return JointDistribution{q, d, std::vector<double>(states, 1.0 / static_cast<double>(states))};
}

JointDistribution JointDistribution::point_mass(int q, int d, const Configuration& tau) {
    validate(tau, q, d);
    JointDistribution mu{q, d, std::vector<double>(ipow(q, d), 0.0)};
    mu.weights[config_index(tau, q, d)] = 1.0;
    return mu;
}

JointDistribution JointDistribution::monochromatic(int q, int d, int color) {
    return point_mass(q, d, Configuration{std::vector<int>(d, color)});
}

ProductMeasure ProductMeasure::uniform(int q, int d) {
    return ProductMeasure{std::vector<std::vector<double>>(
        d, std::vector<double>(q, 1.0 / static_cast<double>(q)))};
}

ProductMeasure ProductMeasure::monochromatic(int q, int d, int color) {
    std::vector<double> marginal(q, 0.0);
    marginal[color] = 1.0;
    return ProductMeasure{std::vector<std::vector<double>>(d, marginal)};
}

ProductMeasure ProductMeasure::iid(const std::vector<double>& p, int d) {
    return ProductMeasure{std::vector<std::vector<double>>(d, p)};
}

ExternalField ExternalField::all_ones(int q, int d) {
    return ExternalField{std::vector<std::vector<double>>(d, std::vector<double>(q, 1.0))};
}

std::vector<std::vector<int>> Graph::adjacency() const {
    std::vector<std::vector<int>> adj(n);
    for (auto [u, v] : edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    for (auto& row : adj) std::sort(row.begin(), row.end());
    return adj;
}

std::vector<int> Graph::neighbors(int v) const {
    std::vector<int> out;
    for (auto [a, b] : edges) {
        if (a == v) out.push_back(b);
        if (b == v) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Graph Graph::remove_vertex(int v) const {
    Graph g;
    g.n = n - 1;
    for (auto [a, b] : edges) {
        if (a == v || b == v) continue;
        g.edges.emplace_back(a > v ? a - 1 : a, b > v ? b - 1 : b);
    }
    return g;
}

std::int64_t ipow(std::int64_t base, int exp) {
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

std::int64_t config_index(const Configuration& tau, int q, int d) {
    validate(tau, q, d);
    std::int64_t idx = 0;
    std::int64_t radix = 1;
    for (int i = 0; i < d; ++i) {
        idx += tau.sites[i] * radix;
        radix *= q;
    }
    return idx;
}

Configuration config_unindex(std::int64_t index, int q, int d) {
    Configuration tau;
    tau.sites.resize(d);
    for (int i = 0; i < d; ++i) {
        tau.sites[i] = static_cast<int>(index % q);
        index /= q;
    }
    return tau;
}

void validate(const InteractionMatrix& a) {
    if (a.q < 2) throw ValidationError("InteractionMatrix.q: must be >= 2");
    if (a.entries.size() != static_cast<std::size_t>(a.q) * a.q)
        throw ValidationError("InteractionMatrix.entries: expected q*q values");
    for (int b = 0; b < a.q; ++b) {
        for (int c = 0; c < a.q; ++c) {
            double x = a.at(b, c);
            if (!(x >= 0.0) || !std::isfinite(x))
                throw ValidationError("InteractionMatrix.entries[" + std::to_string(b) + "][" +
                                      std::to_string(c) + "]: negative weight");
            if (a.at(b, c) != a.at(c, b))
                throw ValidationError("InteractionMatrix.entries[" + std::to_string(b) + "][" +
                                      std::to_string(c) + "]: not symmetric");
        }
    }
}

void validate(const JointDistribution& mu) {
    if (mu.q < 1 || mu.d < 1) throw ValidationError("JointDistribution: q and d must be positive");
    if (mu.weights.size() != static_cast<std::size_t>(ipow(mu.q, mu.d)))
        throw ValidationError("JointDistribution.weights: expected q^d values");
    KahanSum total;
    for (std::size_t i = 0; i < mu.weights.size(); ++i) {
        if (!(mu.weights[i] >= 0.0) || !std::isfinite(mu.weights[i]))
            throw ValidationError("JointDistribution.weights[" + std::to_string(i) +
                                  "]: negative weight");
        total.add(mu.weights[i]);
    }
    if (total.value() == 0.0) throw ValidationError("JointDistribution.weights: zero mass");
    if (std::fabs(total.value() - 1.0) > kNormalizationTol)
        throw ValidationError("JointDistribution.weights: not normalized (sum = " +
                              std::to_string(total.value()) + ")");
}

void validate(const ProductMeasure& nu) {
    if (nu.marginals.empty()) throw ValidationError("ProductMeasure.marginals: empty");
    for (std::size_t i = 0; i < nu.marginals.size(); ++i) {
        const auto& m = nu.marginals[i];
        if (m.size() != nu.marginals[0].size())
            throw ValidationError("ProductMeasure.marginals[" + std::to_string(i) +
                                  "]: inconsistent q");
        KahanSum total;
        for (std::size_t c = 0; c < m.size(); ++c) {
            if (!(m[c] >= 0.0) || !std::isfinite(m[c]))
                throw ValidationError("ProductMeasure.marginals[" + std::to_string(i) + "][" +
                                      std::to_string(c) + "]: negative weight");
            total.add(m[c]);
        }
        if (total.value() == 0.0)
            throw ValidationError("ProductMeasure.marginals[" + std::to_string(i) + "]: zero mass");
        if (std::fabs(total.value() - 1.0) > kNormalizationTol)
            throw ValidationError("ProductMeasure.marginals[" + std::to_string(i) +
                                  "]: not normalized");
    }
}

void validate(const ExternalField& field) {
    if (field.weights.empty()) throw ValidationError("ExternalField.weights: empty");
    for (std::size_t i = 0; i < field.weights.size(); ++i) {
        bool any_positive = false;
        for (std::size_t c = 0; c < field.weights[i].size(); ++c) {
            double x = field.weights[i][c];
            if (!(x >= 0.0) || !std::isfinite(x))
                throw ValidationError("ExternalField.weights[" + std::to_string(i) + "][" +
                                      std::to_string(c) + "]: negative weight");
            if (x > 0.0) any_positive = true;
        }
        if (!any_positive)
            throw ValidationError("ExternalField.weights[" + std::to_string(i) +
                                  "]: all-zero row");
    }
}

void validate(const Graph& g) {
    if (g.n < 0) throw ValidationError("Graph.n: negative");
    std::set<std::pair<int, int>> seen;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        auto [u, v] = g.edges[e];
        if (u < 0 || v < 0 || u >= g.n || v >= g.n)
            throw ValidationError("Graph.edges[" + std::to_string(e) + "]: vertex out of range");
        if (u == v) throw ValidationError("Graph.edges[" + std::to_string(e) + "]: self-loop");
        auto key = std::minmax(u, v);
        if (!seen.insert(key).second)
            throw ValidationError("Graph.edges[" + std::to_string(e) + "]: duplicate edge");
    }
}

void validate(const Configuration& tau, int q, int d) {
    if (static_cast<int>(tau.sites.size()) != d)
        throw ValidationError("Configuration.sites: expected " + std::to_string(d) + " sites");
    for (int i = 0; i < d; ++i)
        if (tau.sites[i] < 0 || tau.sites[i] >= q)
            throw ValidationError("Configuration.sites[" + std::to_string(i) +
                                  "]: color out of range");
}

JointDistribution product_to_joint(const ProductMeasure& nu) {
    validate(nu);
    int q = nu.q();
    int d = nu.d();
    std::int64_t states = ipow(q, d);
    JointDistribution mu{q, d, std::vector<double>(states)};
    KahanSum total;
    for (std::int64_t idx = 0; idx < states; ++idx) {
        std::int64_t rest = idx;
        double w = 1.0;
        for (int i = 0; i < d; ++i) {
            w *= nu.marginals[i][rest % q];
            rest /= q;
        }
        mu.weights[idx] = w;
        total.add(w);
    }
    if (total.value() == 0.0) throw InfeasibleError("product measure has zero total mass");
    normalize_in_place(mu.weights, total.value());
    return mu;
}

namespace {

std::vector<std::vector<double>> matrix_rows(const InteractionMatrix& a) {
    std::vector<std::vector<double>> rows(a.q, std::vector<double>(a.q));
    for (int b = 0; b < a.q; ++b)
        for (int c = 0; c < a.q; ++c) rows[b][c] = a.at(b, c);
    return rows;
}

json require(const json& j, const char* key, const char* type_name) {
    if (!j.contains(key))
        throw ValidationError(std::string("missing field \"") + key + "\" (" + type_name + ")");
    return j.at(key);
}

}  // namespace

json to_json(const InteractionMatrix& a) { return json{{"q", a.q}, {"entries", matrix_rows(a)}}; }

json to_json(const JointDistribution& mu) {
    return json{{"q", mu.q}, {"d", mu.d}, {"weights", mu.weights}};
}

json to_json(const ProductMeasure& nu) { return json{{"marginals", nu.marginals}}; }

json to_json(const ExternalField& field) { return json{{"weights", field.weights}}; }

json to_json(const Graph& g) {
    std::vector<std::vector<int>> edges;
    for (auto [u, v] : g.edges) edges.push_back({u, v});
    return json{{"n", g.n}, {"edges", edges}};
}

json to_json(const Pinning& pin) {
    json j = json::object();
    for (auto [v, c] : pin.assignments) j[std::to_string(v)] = c;
    return json{{"assignments", j}};
}

InteractionMatrix interaction_from_json(const json& j) {
    InteractionMatrix a;
    a.q = require(j, "q", "InteractionMatrix").get<int>();
    auto rows = require(j, "entries", "InteractionMatrix").get<std::vector<std::vector<double>>>();
    if (static_cast<int>(rows.size()) != a.q)
        throw ValidationError("InteractionMatrix.entries: expected q rows");
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != a.q)
            throw ValidationError("InteractionMatrix.entries: expected q columns per row");
        a.entries.insert(a.entries.end(), row.begin(), row.end());
    }
    validate(a);
    return a;
}

JointDistribution joint_from_json(const json& j) {
    JointDistribution mu;
    mu.q = require(j, "q", "JointDistribution").get<int>();
    mu.d = require(j, "d", "JointDistribution").get<int>();
    mu.weights = require(j, "weights", "JointDistribution").get<std::vector<double>>();
    validate(mu);
    return mu;
}

ProductMeasure product_from_json(const json& j) {
    ProductMeasure nu;
    nu.marginals = require(j, "marginals", "ProductMeasure").get<std::vector<std::vector<double>>>();
    validate(nu);
    return nu;
}

ExternalField field_from_json(const json& j) {
    ExternalField f;
    f.weights = require(j, "weights", "ExternalField").get<std::vector<std::vector<double>>>();
    validate(f);
    return f;
}

Graph graph_from_json(const json& j) {
    Graph g;
    g.n = require(j, "n", "Graph").get<int>();
    for (const auto& e : require(j, "edges", "Graph")) {
        if (!e.is_array() || e.size() != 2)
            throw ValidationError("Graph.edges: each edge must be a pair");
        g.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    validate(g);
    return g;
}

Pinning pinning_from_json(const json& j) {
    Pinning pin;
    for (const auto& [key, value] : require(j, "assignments", "Pinning").items())
        pin.assignments[std::stoi(key)] = value.get<int>();
    return pin;
}

}  // namespace spinimage
