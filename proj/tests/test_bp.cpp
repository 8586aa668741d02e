#include <doctest.h>

#include "spinimage/bp.hpp"
#include "spinimage/counterexample.hpp"
#include "spinimage/errors.hpp"
#include "spinimage/numeric.hpp"
#include "spinimage/rng.hpp"

using namespace spinimage;

namespace {

JointDistribution random_joint(int q, int d, std::uint64_t seed, std::uint64_t index) {
    auto rng = make_stream(seed, index);
    return JointDistribution{q, d, dirichlet_flat(rng, static_cast<std::size_t>(ipow(q, d)))};
}

}  // namespace

TEST_CASE("monochromatic image of the special-spin extension of ferro Potts") {
    // B(2, Potts(3, 2)), d = 2: the image of delta_a^{(x)2} for an interacting
    // spin a is (1, 4, 1, 1)/7 up to permutation of the non-special entries
    auto b = build_B(2.0, InteractionMatrix::potts(3, 2.0));
    auto f = bp(b, JointDistribution::monochromatic(4, 2, 1));
    CHECK(f[0] == doctest::Approx(1.0 / 7).epsilon(1e-14));
    CHECK(f[1] == doctest::Approx(4.0 / 7).epsilon(1e-14));
    CHECK(f[2] == doctest::Approx(1.0 / 7).epsilon(1e-14));
    CHECK(f[3] == doctest::Approx(1.0 / 7).epsilon(1e-14));
}

TEST_CASE("factorized product evaluation matches the dense functional") {
    auto a = InteractionMatrix::potts(3, 0.4);
    for (std::uint64_t i = 0; i < 20; ++i) {
        auto rng = make_stream(11, i);
        ProductMeasure nu;
        nu.marginals = {dirichlet_flat(rng, 3), dirichlet_flat(rng, 3), dirichlet_flat(rng, 3)};
        CHECK(linf_diff(bp_product(a, nu), bp(a, product_to_joint(nu))) <= 1e-14);
    }
}

TEST_CASE("gibbs on an edge") {
    Graph k2{2, {{0, 1}}};
    InteractionMatrix a{2, {2, 1, 1, 2}};
    auto result = gibbs(k2, a);
    CHECK(result.z == doctest::Approx(6.0).epsilon(1e-14));
    // weights (2,1,1,2)/6 in mixed-radix order (0,0),(1,0),(0,1),(1,1)
    CHECK(result.dist.weights[0] == doctest::Approx(2.0 / 6).epsilon(1e-14));
    CHECK(result.dist.weights[1] == doctest::Approx(1.0 / 6).epsilon(1e-14));
}

TEST_CASE("gibbs on a triangle, two-spin ferro") {
    Graph tri{3, {{0, 1}, {1, 2}, {0, 2}}};
    auto result = gibbs(tri, InteractionMatrix::potts(2, 2.0));
    // 2 monochromatic configs of weight 8, 6 mixed configs of weight 2
    CHECK(result.z == doctest::Approx(28.0).epsilon(1e-14));
}

TEST_CASE("gibbs respects external fields") {
    Graph k2{2, {{0, 1}}};
    ExternalField fields{{{1.0, 0.0}, {1.0, 1.0}}};  // pin vertex 0 to color 0
    auto result = gibbs(k2, InteractionMatrix::potts(2, 3.0), fields);
    auto marginal = marginalize(result.dist, {1});
    CHECK(marginal.weights[0] == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(marginal.weights[1] == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("state budget is enforced") {
    Graph big{30, {}};
    CHECK_THROWS_AS(gibbs(big, InteractionMatrix::potts(3, 2.0), std::nullopt, 1 << 10),
                    ResourceError);
}

TEST_CASE("tilt rejects annihilating fields") {
    auto mu = JointDistribution::monochromatic(2, 2, 0);
    ExternalField kill{{{0.0, 1.0}, {1.0, 1.0}}};
    CHECK_THROWS_AS(tilt(kill, mu), InfeasibleError);
}

TEST_CASE("marginalize is consistent with the product structure") {
    ProductMeasure nu{{{0.2, 0.8}, {0.6, 0.4}, {0.5, 0.5}}};
    auto mu = product_to_joint(nu);
    auto m1 = marginalize(mu, {1});
    CHECK(m1.weights[0] == doctest::Approx(0.6).epsilon(1e-14));
    auto pair = marginalize(mu, {2, 0});
    // site order follows the request: index = tau_2 + 2 * tau_0
    CHECK(pair.weights[1] == doctest::Approx(0.5 * 0.2).epsilon(1e-14));
}

TEST_CASE("vertex recursion on small graphs") {
    Graph path{4, {{0, 1}, {1, 2}, {2, 3}}};
    Graph cycle{5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}};
    for (const auto& a :
         {InteractionMatrix::potts(3, 2.0), InteractionMatrix::potts(3, 0.5)}) {
        for (int v : {0, 1, 2}) {
            CHECK(check_vertex_recursion(path, a, v) <= 1e-14);
            CHECK(check_vertex_recursion(cycle, a, v) <= 1e-14);
        }
    }
}

TEST_CASE("vertex recursion with fields tilts the predicted marginal") {
    Graph tri{3, {{0, 1}, {1, 2}, {0, 2}}};
    auto rng = make_stream(3, 0);
    ExternalField fields{{dirichlet_flat(rng, 2), dirichlet_flat(rng, 2), dirichlet_flat(rng, 2)}};
    CHECK(check_vertex_recursion(tri, InteractionMatrix::potts(2, 1.7), 1, fields) <= 1e-14);
}

TEST_CASE("unnormalized message uses only the support") {
    auto a = InteractionMatrix::hardcore_padded(2);
    auto mu = random_joint(2, 3, 5, 0);
    auto g = unnormalized_message(a, mu);
    // component 0 excludes every configuration containing color 0
    double expect = 0.0;
    for (std::int64_t idx = 0; idx < 8; ++idx) {
        auto tau = config_unindex(idx, 2, 3);
        double prod = 1.0;
        for (int c : tau.sites) prod *= a.at(0, c);
        expect += mu.weights[idx] * prod;
    }
    CHECK(g[0] == doctest::Approx(expect).epsilon(1e-13));
}
