#include <doctest.h>

#include <cmath>

#include "spinimage/antiferro.hpp"
#include "spinimage/bp.hpp"
#include "spinimage/errors.hpp"
#include "spinimage/numeric.hpp"
#include "spinimage/rng.hpp"

using namespace spinimage;

namespace {

InteractionMatrix rank_one_matrix(const std::vector<double>& v, const std::vector<double>& y) {
    int q = static_cast<int>(v.size());
    InteractionMatrix a = InteractionMatrix::zero(q);
    for (int b = 0; b < q; ++b)
        for (int c = 0; c < q; ++c) a.at(b, c) = v[b] * v[c] * (b == c ? 1.0 - y[b] : 1.0);
    return a;
}

}  // namespace

TEST_CASE("decomposition recovers v from off-diagonals") {
    auto dec = decompose_rank_one_minus_diag(InteractionMatrix::potts(3, 0.4));
    for (int c = 0; c < 3; ++c) {
        CHECK(dec.v[c] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(dec.y[c] == doctest::Approx(0.6).epsilon(1e-12));
    }

    InteractionMatrix scaled{3, {1.5, 2, 2, 2, 1.5, 2, 2, 2, 1.5}};
    auto dec2 = decompose_rank_one_minus_diag(scaled);
    CHECK(dec2.v[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(dec2.y[0] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("matrices without the structure are rejected") {
    // at q = 3 the off-diagonals always determine a consistent v, so an
    // inconsistent instance needs q >= 4
    InteractionMatrix bad{4, {1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 2, 1, 1, 2, 1}};
    CHECK_THROWS_WITH_AS(decompose_rank_one_minus_diag(bad),
                         doctest::Contains("rank-one-minus-diagonal"), InfeasibleError);
    CHECK_THROWS_AS(decompose_rank_one_minus_diag(InteractionMatrix::potts(2, 0.5)),
                    ValidationError);  // q = 2 needs explicit v
    auto dec = rank_one_minus_diag_with(InteractionMatrix::potts(2, 0.5), {1.0, 1.0});
    CHECK(dec.y[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("signature distribution counts colors") {
    auto xi = signature_distribution(JointDistribution::uniform(2, 2), {1.0, 1.0});
    REQUIRE(xi.compositions.size() == 3);
    for (std::size_t j = 0; j < xi.compositions.size(); ++j) {
        if (xi.compositions[j] == std::vector<int>{1, 1})
            CHECK(xi.probs[j] == doctest::Approx(0.5).epsilon(1e-14));
        else
            CHECK(xi.probs[j] == doctest::Approx(0.25).epsilon(1e-14));
    }
    auto point = signature_distribution(JointDistribution::monochromatic(3, 4, 2), {1, 1, 1});
    REQUIRE(point.probs.size() == 1);
    CHECK(point.compositions[0] == std::vector<int>{0, 0, 4});
}

TEST_CASE("criterion holds by symmetry for exchangeable inputs") {
    auto dec = decompose_rank_one_minus_diag(InteractionMatrix::potts(3, 0.5));
    auto result = iid_criterion(dec, JointDistribution::uniform(3, 4));
    CHECK(result.holds);
}

TEST_CASE("criterion fails for a point mass missing a color at low beta") {
    // a monochromatic point mass sits exactly on the criterion boundary, so
    // use a two-color configuration with the third color absent
    auto dec = decompose_rank_one_minus_diag(InteractionMatrix::potts(3, 0.05));
    auto mu = JointDistribution::point_mass(3, 4, Configuration{{0, 0, 1, 1}});
    auto result = iid_criterion(dec, mu);
    CHECK(!result.holds);
}

TEST_CASE("potts specialization matches the general criterion up to the 1-beta factor") {
    double beta = 0.6;
    auto dec = decompose_rank_one_minus_diag(InteractionMatrix::potts(3, beta));
    for (std::uint64_t i = 0; i < 30; ++i) {
        auto rng = make_stream(41, i);
        JointDistribution mu{3, 4, dirichlet_flat(rng, 81)};
        auto general = iid_criterion(dec, mu);
        auto special = potts_criterion(mu, beta);
        CHECK(special.slack ==
              doctest::Approx(general.slack * (1.0 - beta)).epsilon(1e-12));
        CHECK(general.holds == special.holds);
    }
}

TEST_CASE("closed-form inverse agrees with the dense solve") {
    for (std::uint64_t i = 0; i < 30; ++i) {
        auto rng = make_stream(43, i);
        std::uniform_real_distribution<double> vu(0.5, 2.0), yu(0.05, 0.95);
        std::vector<double> v(3), y(3);
        for (auto& x : v) x = vu(rng);
        for (auto& x : y) x = yu(rng);
        auto a = rank_one_matrix(v, y);
        auto dec = decompose_rank_one_minus_diag(a);
        JointDistribution mu{3, 4, dirichlet_flat(rng, 81)};
        auto direct = solve_x_direct(a, mu);
        auto closed = solve_x_rank_one(dec, mu);
        CHECK(linf_diff(direct, closed) <= 1e-10);
    }
}

TEST_CASE("criterion verdict matches solver verdict") {
    int agreements = 0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        auto rng = make_stream(47, i);
        std::uniform_real_distribution<double> yu(0.3, 0.95);
        std::vector<double> y(3);
        for (auto& x : y) x = yu(rng);
        auto a = rank_one_matrix({1, 1, 1}, y);
        auto dec = decompose_rank_one_minus_diag(a);
        JointDistribution mu{3, 4, dirichlet_flat(rng, 81)};
        bool criterion = iid_criterion(dec, mu).holds;
        auto solved = solve_product(a, mu);
        CHECK(criterion == solved.found);
        if (criterion == solved.found) ++agreements;
        if (solved.found) CHECK(solved.f_residual <= 1e-9);
    }
    CHECK(agreements == 100);
}

TEST_CASE("iid inputs are fixed points of the solver") {
    auto a = InteractionMatrix::potts(3, 0.7);
    std::vector<double> p{0.2, 0.3, 0.5};
    auto solved = solve_product(a, product_to_joint(ProductMeasure::iid(p, 3)));
    REQUIRE(solved.found);
    CHECK(linf_diff(solved.nu.marginals[0], p) <= 1e-10);
}

TEST_CASE("gamma_star formula") {
    CHECK(gamma_star(1.0, 0.0) == doctest::Approx(0.0));
    CHECK(gamma_star(0.81, 0.01) == doctest::Approx(0.1));
    CHECK(gamma_star(0.99, 0.01) == doctest::Approx(1.0 - std::sqrt(0.99) + 0.01));
}

TEST_CASE("tail bound check") {
    CHECK(tail_bound_check(JointDistribution::uniform(3, 6), 0.6, 0.2));
    CHECK(!tail_bound_check(JointDistribution::monochromatic(3, 6, 1), 0.6, 0.2));
}

TEST_CASE("bulk experiment confirms solvability at a desk-scale instance") {
    auto report = bulk_experiment(2, 4, 0.7, 0.2, 40, 5);
    CHECK(report.successes == 40);
    CHECK(report.failures == 0);
    CHECK(report.max_f_residual <= 1e-9);
    CHECK_THROWS_AS(bulk_experiment(3, 4, 0.6, 0.2, 10, 1), ValidationError);  // d < 2q
}

TEST_CASE("closed-form inequality grids") {
    auto weird = check_claim_weird({2}, {0.25});
    CHECK(weird.pass);
    // ((2-1)/log 4) * log(1/(1-0.75)) = 1, sqrt(beta) = 0.5
    CHECK(weird.min_slack == doctest::Approx(0.5).epsilon(1e-12));

    auto insane = check_claim_insane(6, 3, 0.2);
    CHECK(insane.pass);
    CHECK(insane.endpoint_value <= 0.2 + 1e-12);

    auto collapsed = check_claim_insane(8, 4, 0.0);
    CHECK(collapsed.pass);
    CHECK(std::fabs(collapsed.endpoint_value) <= 1e-12);
}
