#include "spinimage/influence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstring>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include "spinimage/bp.hpp"
#include "spinimage/errors.hpp"
#include "spinimage/numeric.hpp"
#include "spinimage/rng.hpp"

namespace spinimage {

double Potential::phi(double x) const {
    switch (kind) {
        case PotentialKind::identity: return x;
        case PotentialKind::log: return std::log(x);
        case PotentialKind::sqrt: return std::sqrt(x);
    }
    return x;
}

double Potential::phi_inv(double x) const {
    switch (kind) {
        case PotentialKind::identity: return x;
        case PotentialKind::log: return std::exp(x);
        case PotentialKind::sqrt: return x * x;
    }
    return x;
}

double Potential::sup_abs() const {
    switch (kind) {
        case PotentialKind::identity: return 1.0;
        case PotentialKind::log: return -std::log(floor);
        case PotentialKind::sqrt: return 1.0;
    }
    return 1.0;
}

double Potential::inf_abs_deriv() const {
    switch (kind) {
        case PotentialKind::identity: return 1.0;
        case PotentialKind::log: return 1.0;        // 1/x at x = 1
        case PotentialKind::sqrt: return 0.5;       // 1/(2 sqrt x) at x = 1
    }
    return 1.0;
}

const char* Potential::name() const {
    switch (kind) {
        case PotentialKind::identity: return "identity";
        case PotentialKind::log: return "log";
        case PotentialKind::sqrt: return "sqrt";
    }
    return "identity";
}

Potential make_potential(const std::string& kind, double floor) {
    if (floor <= 0.0 || floor >= 1.0)
        throw ValidationError("make_potential: floor must lie in (0, 1)");
    Potential pot;
    pot.floor = floor;
    if (kind == "identity")
        pot.kind = PotentialKind::identity;
    else if (kind == "log")
        pot.kind = PotentialKind::log;
    else if (kind == "sqrt")
        pot.kind = PotentialKind::sqrt;
    else
        throw ValidationError("make_potential: unknown potential '" + kind + "'");
    return pot;
}

namespace {

std::string fnv_digest(const std::vector<double>& w) {
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

std::string graph_digest(const Graph& g) {
    std::vector<double> data{static_cast<double>(g.n)};
    for (auto [u, v] : g.edges) {
        data.push_back(u);
        data.push_back(v);
    }
    return fnv_digest(data);
}

ExternalField pinning_fields(const Pinning& pinning, int q, int n) {
    ExternalField fields = ExternalField::all_ones(q, n);
    for (auto [vertex, color] : pinning.assignments) {
        if (vertex < 0 || vertex >= n)
            throw ValidationError("pinning: vertex out of range");
        if (color < 0 || color >= q) throw ValidationError("pinning: color out of range");
        std::fill(fields.weights[vertex].begin(), fields.weights[vertex].end(), 0.0);
        fields.weights[vertex][color] = 1.0;
    }
    return fields;
}

// rows b of (mu^{r<-b}_v(c) - mu_v(c)) from the pair marginal; infeasible b
// rows are zero
std::vector<double> block_from_pair(const JointDistribution& pair_rv,
                                    const std::vector<double>& mu_v, int q) {
    std::vector<double> block(static_cast<std::size_t>(q) * q, 0.0);
    std::vector<double> mass_r(q, 0.0);
    for (int b = 0; b < q; ++b)
        for (int c = 0; c < q; ++c) mass_r[b] += pair_rv.weights[b + q * c];
    for (int b = 0; b < q; ++b) {
        if (mass_r[b] <= 0.0) continue;
        for (int c = 0; c < q; ++c)
            block[static_cast<std::size_t>(b) * q + c] =
                pair_rv.weights[b + q * c] / mass_r[b] - mu_v[c];
    }
    return block;
}

std::vector<double> self_block(const std::vector<double>& mu_v, int q) {
    std::vector<double> block(static_cast<std::size_t>(q) * q, 0.0);
    for (int b = 0; b < q; ++b) {
        if (mu_v[b] <= 0.0) continue;
        for (int c = 0; c < q; ++c)
            block[static_cast<std::size_t>(b) * q + c] = (b == c ? 1.0 : 0.0) - mu_v[c];
    }
    return block;
}

}  // namespace

std::vector<double> influence_submatrix(const Graph& g, const InteractionMatrix& a,
                                        const Pinning& pinning, int r, int v,
                                        std::int64_t state_budget) {
    validate(g);
    if (pinning.assignments.count(r) || pinning.assignments.count(v))
        throw ValidationError("influence_submatrix: r and v must be unpinned");
    ExternalField fields = pinning_fields(pinning, a.q, g.n);
    GibbsResult gr = gibbs(g, a, fields, state_budget);
    std::vector<double> mu_v = marginalize(gr.dist, {v}).weights;
    if (r == v) return self_block(mu_v, a.q);
    return block_from_pair(marginalize(gr.dist, {r, v}), mu_v, a.q);
}

InfluenceReport influence_matrix(const Graph& g, const InteractionMatrix& a,
                                 const Pinning& pinning, std::int64_t state_budget) {
    validate(g);
    InfluenceReport report;
    report.graph_digest = graph_digest(g);
    report.pinning = pinning;
    for (int v = 0; v < g.n; ++v)
        if (!pinning.assignments.count(v)) report.vertices.push_back(v);
    int n = static_cast<int>(report.vertices.size());
    if (n == 0) throw ValidationError("influence_matrix: every vertex is pinned");
    std::size_t dim = static_cast<std::size_t>(n) * a.q;
    if (static_cast<std::int64_t>(dim) > state_budget)
        throw ResourceError("influence_matrix: matrix dimension exceeds budget");
    report.psi.assign(dim * dim, 0.0);

    ExternalField fields = pinning_fields(pinning, a.q, g.n);
    GibbsResult gr = gibbs(g, a, fields, state_budget);
    std::vector<std::vector<double>> marginals(n);
    for (int i = 0; i < n; ++i)
        marginals[i] = marginalize(gr.dist, {report.vertices[i]}).weights;

    for (int ri = 0; ri < n; ++ri) {
        for (int vi = 0; vi < n; ++vi) {
            std::vector<double> block =
                ri == vi ? self_block(marginals[vi], a.q)
                         : block_from_pair(
                               marginalize(gr.dist, {report.vertices[ri], report.vertices[vi]}),
                               marginals[vi], a.q);
            for (int b = 0; b < a.q; ++b)
                for (int c = 0; c < a.q; ++c)
                    report.psi[(static_cast<std::size_t>(ri) * a.q + b) * dim + vi * a.q + c] =
                        block[static_cast<std::size_t>(b) * a.q + c];
        }
    }

    Eigen::MatrixXd m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) m(i, j) = report.psi[i * dim + j];
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success)
        throw InfeasibleError("influence_matrix: eigensolver did not converge");
    report.lambda_max = solver.eigenvalues().real().maxCoeff();
    report.max_imag = solver.eigenvalues().imag().cwiseAbs().maxCoeff();
    report.spectrum_real = report.max_imag <= 1e-8;
    return report;
}

std::vector<double> bp_in_potential_space(const InteractionMatrix& a, const Potential& pot,
                                          const std::vector<std::vector<double>>& x) {
    std::vector<std::vector<double>> m(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        m[i].resize(x[i].size());
        for (std::size_t c = 0; c < x[i].size(); ++c) m[i][c] = pot.phi_inv(x[i][c]);
    }
    std::vector<double> f = bp_factored_raw(a, m);
    for (double& fc : f) fc = pot.phi(std::clamp(fc, pot.floor, 1.0));
    return f;
}

std::vector<std::vector<double>> fd_jacobian(const InteractionMatrix& a, const Potential& pot,
                                             const std::vector<std::vector<double>>& x,
                                             double step) {
    int d = static_cast<int>(x.size());
    int q = a.q;
    std::vector<std::vector<double>> blocks(d,
                                            std::vector<double>(static_cast<std::size_t>(q) * q));
    std::vector<std::vector<double>> work = x;
    for (int i = 0; i < d; ++i) {
        for (int b = 0; b < q; ++b) {
            double orig = work[i][b];
            work[i][b] = orig + step;
            std::vector<double> up = bp_in_potential_space(a, pot, work);
            work[i][b] = orig - step;
            std::vector<double> down = bp_in_potential_space(a, pot, work);
            work[i][b] = orig;
            for (int c = 0; c < q; ++c) {
                double diff = up[c] - down[c];
                // differences at the roundoff floor are normalization noise,
                // not derivative signal; a constant map must report exactly 0
                double floor_ulp = 8.0 * std::numeric_limits<double>::epsilon() *
                                   std::max(std::fabs(up[c]), std::fabs(down[c]));
                if (std::fabs(diff) <= floor_ulp) diff = 0.0;
                blocks[i][static_cast<std::size_t>(c) * q + b] = diff / (2.0 * step);
            }
        }
    }
    return blocks;
}

NormKind parse_norm(const std::string& name) {
    if (name == "l1") return NormKind::l1;
    if (name == "l2") return NormKind::l2;
    if (name == "linf" || name == "loo") return NormKind::linf;
    throw ValidationError("parse_norm: unknown norm '" + name + "'");
}

namespace {

double l2_block_norm(const std::vector<std::vector<double>>& blocks, int q) {
    // sup_{||w||=1} sum_i ||J_i^T w||_2 by fixed-point iteration from several
    // starting directions
    int d = static_cast<int>(blocks.size());
    auto value_and_next = [&](const std::vector<double>& w, std::vector<double>& next) {
        double total = 0.0;
        std::fill(next.begin(), next.end(), 0.0);
        for (int i = 0; i < d; ++i) {
            std::vector<double> jt_w(q, 0.0);
            for (int c = 0; c < q; ++c)
                for (int b = 0; b < q; ++b)
                    jt_w[b] += blocks[i][static_cast<std::size_t>(c) * q + b] * w[c];
            double norm = 0.0;
            for (double xb : jt_w) norm += xb * xb;
            norm = std::sqrt(norm);
            total += norm;
            if (norm <= 0.0) continue;
            for (int c = 0; c < q; ++c) {
                double acc = 0.0;
                for (int b = 0; b < q; ++b)
                    acc += blocks[i][static_cast<std::size_t>(c) * q + b] * jt_w[b] / norm;
                next[c] += acc;
            }
        }
        return total;
    };

    double best = 0.0;
    for (int start = 0; start <= q; ++start) {
        std::vector<double> w(q, start == q ? 1.0 : 0.0);
        if (start < q) w[start] = 1.0;
        double norm = 0.0;
        for (double x : w) norm += x * x;
        for (double& x : w) x /= std::sqrt(norm);
        std::vector<double> next(q);
        for (int iter = 0; iter < 200; ++iter) {
            double value = value_and_next(w, next);
            best = std::max(best, value);
            double nn = 0.0;
            for (double x : next) nn += x * x;
            if (nn <= 0.0) break;
            nn = std::sqrt(nn);
            for (int c = 0; c < q; ++c) w[c] = next[c] / nn;
        }
    }
    return best;
}

}  // namespace

double induced_block_norm(const std::vector<std::vector<double>>& blocks, int q, NormKind k) {
    int d = static_cast<int>(blocks.size());
    switch (k) {
        case NormKind::linf: {
            double best = 0.0;
            for (int c = 0; c < q; ++c) {
                double row = 0.0;
                for (int i = 0; i < d; ++i)
                    for (int b = 0; b < q; ++b)
                        row += std::fabs(blocks[i][static_cast<std::size_t>(c) * q + b]);
                best = std::max(best, row);
            }
            return best;
        }
        case NormKind::l1: {
            double total = 0.0;
            for (int i = 0; i < d; ++i) {
                double best_col = 0.0;
                for (int b = 0; b < q; ++b) {
                    double col = 0.0;
                    for (int c = 0; c < q; ++c)
                        col += std::fabs(blocks[i][static_cast<std::size_t>(c) * q + b]);
                    best_col = std::max(best_col, col);
                }
                total += best_col;
            }
            return total;
        }
        case NormKind::l2: return l2_block_norm(blocks, q);
    }
    return 0.0;
}

ContractionReport contraction_estimate(const InteractionMatrix& a, int delta,
                                       const Potential& pot, NormKind k, int n_samples,
                                       std::uint64_t seed) {
    validate(a);
    if (delta < 2) throw ValidationError("contraction_estimate: delta >= 2 required");
    if (n_samples < 1) throw ValidationError("contraction_estimate: need at least one sample");
    if (a.q * pot.floor >= 1.0)
        throw ValidationError("contraction_estimate: floor too large for this q");

    ContractionReport report;
    report.matrix_digest = fnv_digest(a.entries);
    report.delta = delta;
    report.potential = pot.name();
    report.floor = pot.floor;
    report.norm = k == NormKind::l1 ? "l1" : k == NormKind::l2 ? "l2" : "linf";
    report.n_samples = n_samples;
    report.seed = seed;

    for (int d = 1; d < delta; ++d) {
        for (int s = 0; s < n_samples; ++s) {
            auto rng = make_stream(seed, (static_cast<std::uint64_t>(d) << 32) |
                                             static_cast<std::uint64_t>(s));
            std::vector<std::vector<double>> x(d);
            for (int i = 0; i < d; ++i) {
                std::vector<double> m = dirichlet_flat(rng, a.q);
                for (double& mc : m) mc = pot.floor + (1.0 - a.q * pot.floor) * mc;
                x[i].resize(a.q);
                for (int c = 0; c < a.q; ++c) x[i][c] = pot.phi(m[c]);
            }
            double norm = induced_block_norm(fd_jacobian(a, pot, x), a.q, k);
            report.estimate = std::max(report.estimate, norm);
        }
    }
    report.max_one_minus_delta = report.estimate;
    return report;
}

json to_json(const InfluenceReport& report) {
    json pin = json::object();
    for (auto [v, c] : report.pinning.assignments) pin[std::to_string(v)] = c;
    return json{{"graph_digest", report.graph_digest},
                {"pinning", pin},
                {"vertices", report.vertices},
                {"psi", report.psi},
                {"lambda_max", report.lambda_max},
                {"max_imag", report.max_imag},
                {"spectrum_real", report.spectrum_real}};
}

json to_json(const ContractionReport& report) {
    return json{{"matrix_digest", report.matrix_digest},
                {"delta", report.delta},
                {"potential", report.potential},
                {"floor", report.floor},
                {"norm", report.norm},
                {"n_samples", report.n_samples},
                {"seed", report.seed},
                {"estimate", report.estimate},
                {"max_one_minus_delta", report.max_one_minus_delta},
                {"note", "sampled lower bound on the induced-norm sup; not certified"}};
}

}  // namespace spinimage
