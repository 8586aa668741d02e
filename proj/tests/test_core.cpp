#include <doctest.h>

#include <nlohmann/json.hpp>

#include "spinimage/core.hpp"
#include "spinimage/errors.hpp"

using namespace spinimage;

TEST_CASE("mixed-radix indexing puts site 0 in the least significant digit") {
    // tau = (2, 1) over q=3: index = 2 + 1*3 = 5
    CHECK(config_index(Configuration{{2, 1}}, 3, 2) == 5);
    auto tau = config_unindex(5, 3, 2);
    CHECK(tau.sites == std::vector<int>{2, 1});
    // exhaustive roundtrip on a small slice
    for (std::int64_t idx = 0; idx < ipow(4, 3); ++idx)
        CHECK(config_index(config_unindex(idx, 4, 3), 4, 3) == idx);
}

TEST_CASE("potts factory") {
    auto a = InteractionMatrix::potts(3, 2.0);
    CHECK(a.at(0, 0) == 2.0);
    CHECK(a.at(1, 1) == 2.0);
    CHECK(a.at(0, 1) == 1.0);
    CHECK(a.at(2, 0) == 1.0);
}

TEST_CASE("validation reports the offending field path") {
    InteractionMatrix a = InteractionMatrix::all_ones(2);
    a.at(0, 1) = -1.0;
    a.at(1, 0) = -1.0;
    CHECK_THROWS_WITH_AS(validate(a), doctest::Contains("entries[0][1]"), ValidationError);

    InteractionMatrix asym = InteractionMatrix::all_ones(2);
    asym.at(0, 1) = 2.0;
    CHECK_THROWS_WITH_AS(validate(asym), doctest::Contains("not symmetric"), ValidationError);

    JointDistribution mu = JointDistribution::uniform(2, 2);
    mu.weights[0] += 0.5;
    CHECK_THROWS_WITH_AS(validate(mu), doctest::Contains("not normalized"), ValidationError);

    JointDistribution zero{2, 1, {0.0, 0.0}};
    CHECK_THROWS_WITH_AS(validate(zero), doctest::Contains("zero mass"), ValidationError);
}

TEST_CASE("product_to_joint multiplies marginals sitewise") {
    ProductMeasure nu{{{0.25, 0.75}, {0.5, 0.5}}};
    auto mu = product_to_joint(nu);
    CHECK(mu.weights[0] == doctest::Approx(0.125).epsilon(1e-14));   // (0,0)
    CHECK(mu.weights[1] == doctest::Approx(0.375).epsilon(1e-14));   // (1,0)
    CHECK(mu.weights[2] == doctest::Approx(0.125).epsilon(1e-14));   // (0,1)
    CHECK(mu.weights[3] == doctest::Approx(0.375).epsilon(1e-14));   // (1,1)
}

TEST_CASE("remove_vertex shifts higher vertex labels down") {
    Graph g{4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}};
    Graph h = g.remove_vertex(1);
    CHECK(h.n == 3);
    CHECK(h.edges == std::vector<std::pair<int, int>>{{1, 2}, {0, 2}});
    CHECK(g.neighbors(1) == std::vector<int>{0, 2});
}

TEST_CASE("graph validation") {
    CHECK_THROWS_AS(validate(Graph{2, {{0, 0}}}), ValidationError);
    CHECK_THROWS_AS(validate(Graph{2, {{0, 1}, {1, 0}}}), ValidationError);
    CHECK_THROWS_AS(validate(Graph{2, {{0, 2}}}), ValidationError);
}

TEST_CASE("json parsing diagnoses missing fields by name") {
    CHECK_THROWS_WITH_AS(interaction_from_json(json{{"q", 2}}),
                         doctest::Contains("entries"), ValidationError);
    CHECK_THROWS_WITH_AS(joint_from_json(json{{"q", 2}, {"weights", {1.0}}}),
                         doctest::Contains("\"d\""), ValidationError);

    auto a = interaction_from_json(to_json(InteractionMatrix::potts(3, 0.5)));
    CHECK(a.at(2, 2) == 0.5);
    auto g = graph_from_json(to_json(Graph{3, {{0, 2}}}));
    CHECK(g.edges.front() == std::pair<int, int>{0, 2});
}
