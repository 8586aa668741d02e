#include <doctest.h>

#include <cmath>

#include "spinimage/errors.hpp"
#include "spinimage/influence.hpp"
#include "spinimage/numeric.hpp"
#include "spinimage/rng.hpp"

using namespace spinimage;

TEST_CASE("self-influence block is I minus the rank-one marginal projector") {
    Graph k2{2, {{0, 1}}};
    InteractionMatrix a{2, {2, 1, 1, 2}};
    auto block = influence_submatrix(k2, a, Pinning{}, 0, 0);
    // marginal is uniform by symmetry
    CHECK(block[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(block[1] == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(block[2] == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(block[3] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("edge influence from direct conditional computation") {
    Graph k2{2, {{0, 1}}};
    InteractionMatrix a{2, {2, 1, 1, 2}};
    auto block = influence_submatrix(k2, a, Pinning{}, 0, 1);
    // conditioning vertex 0 on color 0 moves the neighbor marginal from 1/2
    // to 2/3 on color 0
    CHECK(block[0] == doctest::Approx(1.0 / 6).epsilon(1e-12));
    CHECK(block[1] == doctest::Approx(-1.0 / 6).epsilon(1e-12));
    CHECK(block[2] == doctest::Approx(-1.0 / 6).epsilon(1e-12));
    CHECK(block[3] == doctest::Approx(1.0 / 6).epsilon(1e-12));
}

TEST_CASE("disconnected vertices have zero influence") {
    Graph g{3, {{0, 1}}};
    auto block = influence_submatrix(g, InteractionMatrix::potts(2, 2.0), Pinning{}, 0, 2);
    for (double x : block) CHECK(std::fabs(x) <= 1e-14);
}

TEST_CASE("pinning restricts the conditioning") {
    Graph path{3, {{0, 1}, {1, 2}}};
    Pinning pin;
    pin.assignments[2] = 0;
    auto report = influence_matrix(path, InteractionMatrix::potts(2, 2.0), pin);
    CHECK(report.vertices == std::vector<int>{0, 1});
    CHECK(report.spectrum_real);
    CHECK_THROWS_AS(influence_submatrix(path, InteractionMatrix::potts(2, 2.0), pin, 2, 0),
                    ValidationError);
}

TEST_CASE("influence rows sum to zero and lambda_max is below the infinity norm") {
    Graph path{3, {{0, 1}, {1, 2}}};
    auto a = InteractionMatrix::potts(3, 0.5);
    auto report = influence_matrix(path, a, Pinning{});
    std::size_t dim = report.vertices.size() * 3;
    double inf_norm = 0.0;
    for (std::size_t r = 0; r < dim; ++r) {
        double row_sum = 0.0, row_abs = 0.0;
        // row sums vanish blockwise: each block row is a difference of two
        // probability vectors
        for (std::size_t v = 0; v < report.vertices.size(); ++v) {
            double block_sum = 0.0;
            for (int c = 0; c < 3; ++c) {
                block_sum += report.psi[r * dim + v * 3 + c];
                row_abs += std::fabs(report.psi[r * dim + v * 3 + c]);
            }
            CHECK(std::fabs(block_sum) <= 1e-12);
            row_sum += block_sum;
        }
        (void)row_sum;
        inf_norm = std::max(inf_norm, row_abs);
    }
    CHECK(report.spectrum_real);
    CHECK(report.lambda_max <= inf_norm + 1e-12);
}

TEST_CASE("potential bookkeeping") {
    auto log_pot = make_potential("log", 1e-2);
    CHECK(log_pot.phi(1.0) == 0.0);
    CHECK(log_pot.phi_inv(log_pot.phi(0.3)) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(log_pot.sup_abs() == doctest::Approx(std::log(100.0)).epsilon(1e-12));
    CHECK(make_potential("sqrt", 1e-3).inf_abs_deriv() == 0.5);
    CHECK_THROWS_AS(make_potential("cube", 1e-3), ValidationError);
    CHECK_THROWS_AS(make_potential("log", 0.0), ValidationError);
}

TEST_CASE("all-ones interactions give a constant map and zero contraction estimate") {
    auto report = contraction_estimate(InteractionMatrix::all_ones(3), 4,
                                       make_potential("identity", 1e-3), NormKind::linf, 20, 1);
    CHECK(report.estimate == 0.0);
}

TEST_CASE("weak Ising interactions contract in the infinity norm") {
    InteractionMatrix ising{2, {1.2, 1.0, 1.0, 1.2}};
    auto report = contraction_estimate(ising, 3, make_potential("identity", 1e-3),
                                       NormKind::linf, 50, 2);
    CHECK(report.estimate > 0.0);
    CHECK(report.estimate < 1.0);
}

TEST_CASE("induced block norms on a hand-built Jacobian") {
    // two 2x2 blocks: [[1, -1], [0, 2]] and [[0.5, 0], [0, -0.5]]
    std::vector<std::vector<double>> blocks{{1, -1, 0, 2}, {0.5, 0, 0, -0.5}};
    CHECK(induced_block_norm(blocks, 2, NormKind::linf) == doctest::Approx(2.5).epsilon(1e-12));
    // per-block max column 1-norms: 3 and 0.5
    CHECK(induced_block_norm(blocks, 2, NormKind::l1) == doctest::Approx(3.5).epsilon(1e-12));
    double l2 = induced_block_norm(blocks, 2, NormKind::l2);
    CHECK(l2 >= 2.0);   // at least the spectral norm of the first block alone
    CHECK(l2 <= 3.0);   // and no more than the sum of the two spectral norms
}

TEST_CASE("finite-difference Jacobian is consistent under Richardson extrapolation") {
    auto a = InteractionMatrix::potts(3, 0.8);
    auto pot = make_potential("log", 1e-2);
    for (std::uint64_t s = 0; s < 10; ++s) {
        auto rng = make_stream(61, s);
        std::vector<std::vector<double>> x(3);
        for (auto& xi : x) {
            auto m = dirichlet_flat(rng, 3);
            for (double& mc : m) mc = 0.01 + (1.0 - 3 * 0.01) * mc;
            xi.resize(3);
            for (int c = 0; c < 3; ++c) xi[c] = pot.phi(m[c]);
        }
        auto coarse = fd_jacobian(a, pot, x, 1e-4);
        auto fine = fd_jacobian(a, pot, x, 5e-5);
        for (std::size_t i = 0; i < coarse.size(); ++i)
            for (std::size_t j = 0; j < coarse[i].size(); ++j) {
                double richardson = (4.0 * fine[i][j] - coarse[i][j]) / 3.0;
                double scale = std::max(1.0, std::fabs(richardson));
                CHECK(std::fabs(fine[i][j] - richardson) / scale <= 1e-6);
            }
    }
}
