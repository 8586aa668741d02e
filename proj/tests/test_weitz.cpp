#include <doctest.h>

#include "spinimage/errors.hpp"
#include "spinimage/rng.hpp"
#include "spinimage/weitz.hpp"

using namespace spinimage;

TEST_CASE("field layout: prefix rows from row 0, suffix rows from row 1") {
    InteractionMatrix a{2, {3.0, 0.5, 0.5, 2.0}};
    auto fields = weitz_fields(a, 3);
    REQUIRE(fields.size() == 3);
    CHECK(fields[1].weights[0] == std::vector<double>{3.0, 0.5});
    CHECK(fields[1].weights[1] == std::vector<double>{1.0, 1.0});
    CHECK(fields[1].weights[2] == std::vector<double>{0.5, 2.0});
    CHECK(fields[0].weights[0] == std::vector<double>{1.0, 1.0});
    CHECK(fields[2].weights[2] == std::vector<double>{1.0, 1.0});
}

TEST_CASE("the identity holds exactly for two-spin systems") {
    for (std::uint64_t i = 0; i < 50; ++i) {
        auto rng = make_stream(21, i);
        std::uniform_real_distribution<double> entry(0.2, 2.0);
        double diag0 = entry(rng), diag1 = entry(rng), off = entry(rng);
        InteractionMatrix a{2, {diag0, off, off, diag1}};
        int d = 2 + static_cast<int>(i % 3);
        JointDistribution mu{2, d, dirichlet_flat(rng, static_cast<std::size_t>(ipow(2, d)))};
        CHECK(weitz_check(a, mu) <= 1e-12);
    }
}

TEST_CASE("more than two spins is rejected") {
    CHECK_THROWS_AS(weitz_fields(InteractionMatrix::potts(3, 2.0), 2), ValidationError);
}
