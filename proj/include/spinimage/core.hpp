#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace spinimage {

using json = nlohmann::json;

constexpr double kNormalizationTol = 1e-9;

/// Symmetric nonnegative q x q matrix of pairwise spin weights.
struct InteractionMatrix {
    int q = 0;
    std::vector<double> entries;  // row-major, q*q

    double at(int b, int c) const { return entries[static_cast<std::size_t>(b) * q + c]; }
    double& at(int b, int c) { return entries[static_cast<std::size_t>(b) * q + c]; }

    static InteractionMatrix zero(int q);
    static InteractionMatrix all_ones(int q);
    /// 1*1^T + (beta-1)*I. beta > 1 ferromagnetic, beta < 1 antiferromagnetic.
    static InteractionMatrix potts(int q, double beta);
    /// A[0][0] = 0, all other entries 1. q = 2 is the hardcore model.
    static InteractionMatrix hardcore_padded(int q);
};

/// One coloring of d sites; colors are 0-based.
struct Configuration {
    std::vector<int> sites;
};

/// Dense probability vector over [q]^d, mixed-radix indexed (site 0 least
/// significant).
struct JointDistribution {
    int q = 0;
    int d = 0;
    std::vector<double> weights;  // length q^d

    static JointDistribution uniform(int q, int d);
    static JointDistribution point_mass(int q, int d, const Configuration& tau);
    /// Monochromatic point mass delta_c^{(x) d}.
    static JointDistribution monochromatic(int q, int d, int color);
};

/// d marginal distributions on {0,...,q-1}.
struct ProductMeasure {
    std::vector<std::vector<double>> marginals;

    int d() const { return static_cast<int>(marginals.size()); }
    int q() const { return marginals.empty() ? 0 : static_cast<int>(marginals[0].size()); }

    static ProductMeasure uniform(int q, int d);
    static ProductMeasure monochromatic(int q, int d, int color);
    static ProductMeasure iid(const std::vector<double>& p, int d);
};

/// d x q nonnegative tilt weights acting on distributions via the star operation.
struct ExternalField {
    std::vector<std::vector<double>> weights;

    int d() const { return static_cast<int>(weights.size()); }
    static ExternalField all_ones(int q, int d);
};

struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // unordered pairs, no self-loops

    std::vector<std::vector<int>> adjacency() const;
    std::vector<int> neighbors(int v) const;  // sorted ascending
    Graph remove_vertex(int v) const;         // vertices above v shift down by one
};

/// Partial assignment vertex -> color.
struct Pinning {
    std::map<int, int> assignments;
};

std::int64_t ipow(std::int64_t base, int exp);

/// Mixed-radix index of tau: sum_i tau(i) * q^i.
std::int64_t config_index(const Configuration& tau, int q, int d);
Configuration config_unindex(std::int64_t index, int q, int d);

void validate(const InteractionMatrix& a);
void validate(const JointDistribution& mu);
void validate(const ProductMeasure& nu);
void validate(const ExternalField& field);
void validate(const Graph& g);
void validate(const Configuration& tau, int q, int d);

/// weights[index(tau)] = prod_i nu_i(tau(i)), normalized.
JointDistribution product_to_joint(const ProductMeasure& nu);

// JSON (de)serialization. Schemas:
//   InteractionMatrix  {"q": int, "entries": [[real]]}        row-major
//   JointDistribution  {"q": int, "d": int, "weights": [real]} mixed-radix order
//   ProductMeasure     {"marginals": [[real]]}
//   ExternalField      {"weights": [[real]]}
//   Graph              {"n": int, "edges": [[int,int]]}
json to_json(const InteractionMatrix& a);
json to_json(const JointDistribution& mu);
json to_json(const ProductMeasure& nu);
json to_json(const ExternalField& field);
json to_json(const Graph& g);
json to_json(const Pinning& pin);

InteractionMatrix interaction_from_json(const json& j);
JointDistribution joint_from_json(const json& j);
ProductMeasure product_from_json(const json& j);
ExternalField field_from_json(const json& j);
Graph graph_from_json(const json& j);
Pinning pinning_from_json(const json& j);

}  // namespace spinimage
