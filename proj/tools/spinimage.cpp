#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "spinimage/antiferro.hpp"
#include "spinimage/bp.hpp"
#include "spinimage/counterexample.hpp"
#include "spinimage/errors.hpp"
#include "spinimage/image.hpp"
#include "spinimage/influence.hpp"
#include "spinimage/numeric.hpp"
#include "spinimage/signature.hpp"
#include "spinimage/weitz.hpp"

namespace {

using spinimage::json;

struct GlobalOpts {
    std::uint64_t seed = 0;
    std::int64_t budget = spinimage::kDefaultStateBudget;
    double tol = 1e-9;
    std::string out;
};

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw spinimage::ValidationError("cannot open file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw spinimage::ValidationError(path + ": " + e.what());
    }
}

void emit(const GlobalOpts& opts, const json& result, const std::string& summary) {
    std::string text = result.dump(2);
    std::cout << text << "\n";
    if (!opts.out.empty()) {
        std::ofstream f(opts.out);
        if (!f) throw spinimage::ValidationError("cannot write file: " + opts.out);
        f << text << "\n";
    }
    if (!summary.empty()) std::cerr << summary << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact small-instance toolkit for pairwise spin systems"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts opts;
    app.add_option("--seed", opts.seed, "base RNG seed");
    app.add_option("--budget", opts.budget, "max enumerated states")->check(CLI::PositiveNumber);
    app.add_option("--tol", opts.tol, "tolerance override")->check(CLI::PositiveNumber);
    app.add_option("--out", opts.out, "write the JSON result to this path as well");

    std::function<int()> action;

    // ---- bp ----
    auto* bp_cmd = app.add_subcommand("bp", "belief propagation functional and Gibbs oracles");
    bp_cmd->require_subcommand(1);
    bp_cmd->fallthrough();
    {
        static std::string matrix_path, dist_path;
        auto* eval = bp_cmd->add_subcommand("eval", "evaluate F_A(mu)");
        eval->fallthrough();
        eval->add_option("--matrix", matrix_path, "interaction matrix JSON")->required();
        eval->add_option("--dist", dist_path, "joint distribution JSON")->required();
        eval->callback([&] {
            action = [&]() {
                auto a = spinimage::interaction_from_json(read_json_file(matrix_path));
                auto mu = spinimage::joint_from_json(read_json_file(dist_path));
                auto f = spinimage::bp(a, mu);
                emit(opts, json{{"F", f}}, "F evaluated over " + std::to_string(a.q) + " spins");
                return 0;
            };
        });
    }
    {
        static std::string graph_path, matrix_path, fields_path;
        auto* gb = bp_cmd->add_subcommand("gibbs", "exhaustive Gibbs distribution");
        gb->fallthrough();
        gb->add_option("--graph", graph_path, "graph JSON")->required();
        gb->add_option("--matrix", matrix_path, "interaction matrix JSON")->required();
        gb->add_option("--fields", fields_path, "external fields JSON");
        gb->callback([&] {
            action = [&]() {
                auto g = spinimage::graph_from_json(read_json_file(graph_path));
                auto a = spinimage::interaction_from_json(read_json_file(matrix_path));
                std::optional<spinimage::ExternalField> fields;
                if (!fields_path.empty())
                    fields = spinimage::field_from_json(read_json_file(fields_path));
                auto result = spinimage::gibbs(g, a, fields, opts.budget);
                emit(opts,
                     json{{"dist", spinimage::to_json(result.dist)},
                          {"log_z", result.log_z},
                          {"z", result.z}},
                     "Z = " + std::to_string(result.z));
                return 0;
            };
        });
    }
    {
        static std::string graph_path, matrix_path, fields_path;
        static int vertex = 0;
        auto* cr = bp_cmd->add_subcommand("check-recursion",
                                          "vertex marginal vs F of the neighborhood marginal");
        cr->fallthrough();
        cr->add_option("--graph", graph_path, "graph JSON")->required();
        cr->add_option("--matrix", matrix_path, "interaction matrix JSON")->required();
        cr->add_option("--v", vertex, "vertex to check")->required();
        cr->add_option("--fields", fields_path, "external fields JSON");
        cr->callback([&] {
            action = [&]() {
                auto g = spinimage::graph_from_json(read_json_file(graph_path));
                auto a = spinimage::interaction_from_json(read_json_file(matrix_path));
                std::optional<spinimage::ExternalField> fields;
                if (!fields_path.empty())
                    fields = spinimage::field_from_json(read_json_file(fields_path));
                double residual = spinimage::check_vertex_recursion(g, a, vertex, fields,
                                                                    opts.budget);
                bool ok = residual <= opts.tol;
                emit(opts, json{{"residual", residual}, {"pass", ok}},
                     "recursion residual " + std::to_string(residual));
                return ok ? 0 : 1;
            };
        });
    }

    // ---- weitz ----
    auto* weitz_cmd = app.add_subcommand("weitz", "two-spin universal-field identity");
    weitz_cmd->require_subcommand(1);
    weitz_cmd->fallthrough();
    {
        static std::string matrix_path, dist_path;
        auto* wc = weitz_cmd->add_subcommand("check", "residual of the product reduction");
        wc->fallthrough();
        wc->add_option("--matrix", matrix_path, "2x2 interaction matrix JSON")->required();
        wc->add_option("--dist", dist_path, "joint distribution JSON")->required();
        wc->callback([&] {
            action = [&]() {
                auto a = spinimage::interaction_from_json(read_json_file(matrix_path));
                auto mu = spinimage::joint_from_json(read_json_file(dist_path));
                double residual = spinimage::weitz_check(a, mu);
                bool ok = residual <= opts.tol;
                emit(opts, json{{"residual", residual}, {"pass", ok}},
                     "identity residual " + std::to_string(residual));
                return ok ? 0 : 1;
            };
        });
    }

    // ---- image ----
    auto* image_cmd = app.add_subcommand("image", "geometry of the BP image");
    image_cmd->require_subcommand(1);
    image_cmd->fallthrough();
    {
        static std::string matrix_path;
        static int d = 2;
        auto* vx = image_cmd->add_subcommand("vertices", "images of all point masses");
        vx->fallthrough();
        vx->add_option("--matrix", matrix_path, "interaction matrix JSON")->required();
        vx->add_option("--d", d, "number of sites")->required();
        vx->callback([&] {
            action = [&]() {
                auto a = spinimage::interaction_from_json(read_json_file(matrix_path));
                auto v = spinimage::vertex_images(a, d, opts.budget);
                emit(opts,
                     json{{"indices", v.indices},
                          {"images", v.images},
                          {"infeasible", v.infeasible}},
                     std::to_string(v.images.size()) + " vertex images");
                return 0;
            };
        });
    }
    {
        static std::string matrix_path, point_path;
        static int d = 2;
        auto* mb = image_cmd->add_subcommand("member", "convex-hull membership by LP");
        mb->fallthrough();
        mb->add_option("--matrix", matrix_path, "interaction matrix JSON")->required();
        mb->add_option("--d", d, "number of sites")->required();
        mb->add_option("--point", point_path, "JSON array: candidate point")->required();
        mb->callback([&] {
            action = [&]() {
                auto a = spinimage::interaction_from_json(read_json_file(matrix_path));
                auto point = read_json_file(point_path).get<std::vector<double>>();
                auto report = spinimage::hull_membership(point, a, d, opts.tol);
                emit(opts,
                     json{{"is_member", report.is_member},
                          {"max_violation", report.max_violation},
                          {"weights", report.weights}},
                     report.is_member ? "member" : "not a member");
                return 0;
            };
        });
    }
    {
        static std::string matrix_path, objective_path;
        static int d = 2, restarts = 32;
        static bool maximize = false;
        auto* ex = image_cmd->add_subcommand("extremize",
                                             "multistart optimization over product measures");
        ex->fallthrough();
        ex->add_option("--matrix", matrix_path, "interaction matrix JSON")->required();
        ex->add_option("--d", d, "number of sites")->required();
        ex->add_option("--objective", objective_path, "JSON array: linear objective")->required();
        ex->add_option("--restarts", restarts, "number of restarts");
        ex->add_flag("--maximize", maximize, "maximize instead of minimize");
        ex->callback([&] {
            action = [&]() {
                auto a = spinimage::interaction_from_json(read_json_file(matrix_path));
                auto objective = read_json_file(objective_path).get<std::vector<double>>();
                auto report = spinimage::product_image_extremum(a, d, objective, restarts,
                                                                opts.seed, maximize);
                emit(opts,
                     json{{"value", report.value},
                          {"argopt", spinimage::to_json(report.argopt)},
                          {"maximize", report.maximize},
                          {"restarts", report.restarts},
                          {"seed", report.seed}},
                     "extremum " + std::to_string(report.value));
                return 0;
            };
        });
    }

    // ---- counterexample ----
    auto* cx_cmd = app.add_subcommand("counterexample", "nonconvexity certificates");
    cx_cmd->require_subcommand(1);
    cx_cmd->fallthrough();
    {
        static std::string matrix_path;
        static double beta = 2.0;
        static int d = 2, restarts = 64;
        auto* cert = cx_cmd->add_subcommand("certify", "build and check a nonconvexity witness");
        cert->fallthrough();
        cert->add_option("--beta", beta, "special-spin self-interaction")->required();
        cert->add_option("--matrix", matrix_path, "interaction matrix JSON")->required();
        cert->add_option("--d", d, "number of sites")->required();
        cert->add_option("--restarts", restarts, "optimizer restarts");
        cert->callback([&] {
            action = [&]() {
                auto a = spinimage::interaction_from_json(read_json_file(matrix_path));
                auto witness = spinimage::certify_nonconvexity(beta, a, d, restarts, opts.seed);
                emit(opts, spinimage::witness_to_json(witness),
                     "witness certified; extremal value " +
                         std::to_string(witness.extremal_value));
                return 0;
            };
        });
    }
    {
        static std::string witness_path;
        auto* verify = cx_cmd->add_subcommand("verify", "recompute a stored witness from scratch");
        verify->fallthrough();
        verify->add_option("--witness", witness_path, "witness JSON")->required();
        verify->callback([&] {
            action = [&]() {
                auto issues = spinimage::verify_witness(read_json_file(witness_path));
                emit(opts, json{{"verified", issues.empty()}, {"discrepancies", issues}},
                     issues.empty() ? "witness verified"
                                    : std::to_string(issues.size()) + " discrepancies");
                return issues.empty() ? 0 : 1;
            };
        });
    }

    // ---- signature ----
    auto* sig_cmd = app.add_subcommand("signature", "prescribed eigenvalue signatures");
    sig_cmd->require_subcommand(1);
    sig_cmd->fallthrough();
    {
        static int q = 3, d = 2;
        static double beta = 2.0, gamma = 0.999;
        auto* scan = sig_cmd->add_subcommand("scan", "verify the signature for every k");
        scan->fallthrough();
        scan->add_option("--q", q, "number of spins")->required();
        scan->add_option("--d", d, "power")->required();
        scan->add_option("--beta", beta, "top-block diagonal")->required();
        scan->add_option("--gamma", gamma, "bottom-block parameter");
        scan->callback([&] {
            action = [&]() {
                json reports = json::array();
                bool all_pass = true;
                for (int k = 0; k < q; ++k) {
                    auto report = spinimage::verify_prop_signature(q, d, beta, k, gamma);
                    all_pass = all_pass && report.pass;
                    reports.push_back(spinimage::to_json(report));
                }
                emit(opts, json{{"reports", reports}, {"pass", all_pass}},
                     all_pass ? "all k pass" : "signature mismatch");
                return all_pass ? 0 : 1;
            };
        });
    }
    {
        static int q = 3, d = 2, k = 1;
        static double beta = 2.0, gamma = 0.999;
        auto* build = sig_cmd->add_subcommand("build", "emit one constructed instance");
        build->fallthrough();
        build->add_option("--q", q, "number of spins")->required();
        build->add_option("--d", d, "power")->required();
        build->add_option("--beta", beta, "top-block diagonal")->required();
        build->add_option("--k", k, "top-block size")->required();
        build->add_option("--gamma", gamma, "bottom-block parameter");
        build->callback([&] {
            action = [&]() {
                auto inst = spinimage::construct_signature_instance(q, d, beta, k, gamma);
                emit(opts,
                     json{{"A", spinimage::to_json(inst.a)},
                          {"t", inst.t},
                          {"gamma", inst.gamma}},
                     "t = " + std::to_string(inst.t));
                return 0;
            };
        });
    }

    // ---- potts ----
    auto* potts_cmd = app.add_subcommand("potts", "rank-one-minus-diagonal solvability");
    potts_cmd->require_subcommand(1);
    potts_cmd->fallthrough();
    {
        static std::string matrix_path, dist_path;
        auto* sp = potts_cmd->add_subcommand("solve-product",
                                             "product measure with the same image, if any");
        sp->fallthrough();
        sp->add_option("--matrix", matrix_path, "interaction matrix JSON")->required();
        sp->add_option("--dist", dist_path, "joint distribution JSON")->required();
        sp->callback([&] {
            action = [&]() {
                auto a = spinimage::interaction_from_json(read_json_file(matrix_path));
                auto mu = spinimage::joint_from_json(read_json_file(dist_path));
                auto result = spinimage::solve_product(a, mu);
                json out{{"found", result.found}, {"x", result.x}};
                if (result.found) {
                    out["nu"] = spinimage::to_json(result.nu);
                    out["F_residual"] = result.f_residual;
                }
                emit(opts, out, result.found ? "product measure found" : "none");
                return 0;
            };
        });
    }
    {
        static std::string matrix_path, dist_path;
        auto* cr = potts_cmd->add_subcommand("criterion", "solvability criterion");
        cr->fallthrough();
        cr->add_option("--matrix", matrix_path, "interaction matrix JSON")->required();
        cr->add_option("--dist", dist_path, "joint distribution JSON")->required();
        cr->callback([&] {
            action = [&]() {
                auto a = spinimage::interaction_from_json(read_json_file(matrix_path));
                auto mu = spinimage::joint_from_json(read_json_file(dist_path));
                auto dec = spinimage::decompose_rank_one_minus_diag(a);
                auto result = spinimage::iid_criterion(dec, mu);
                emit(opts,
                     json{{"holds", result.holds}, {"slack", result.slack}, {"m", result.m}},
                     result.holds ? "criterion holds" : "criterion fails");
                return 0;
            };
        });
    }
    {
        static int q = 3, d = 6, n = 200;
        static double beta = 0.6, eps = 0.2;
        static bool force = false;
        auto* bulk = potts_cmd->add_subcommand("bulk", "sampled solvability experiment");
        bulk->fallthrough();
        bulk->add_option("--q", q, "number of colors")->required();
        bulk->add_option("--d", d, "neighborhood size")->required();
        bulk->add_option("--beta", beta, "edge weight")->required();
        bulk->add_option("--eps", eps, "tail bound level")->required();
        bulk->add_option("--n", n, "tail-passing sample target");
        bulk->add_flag("--force", force,
                       "run outside the supported (q, d, beta) range; unsupported by theory");
        bulk->callback([&] {
            action = [&]() {
                auto report = spinimage::bulk_experiment(q, d, beta, eps, n, opts.seed, force);
                emit(opts, spinimage::to_json(report),
                     std::to_string(report.successes) + " successes, " +
                         std::to_string(report.failures) + " failures");
                return report.failures == 0 ? 0 : 1;
            };
        });
    }

    // ---- inequalities ----
    auto* ineq_cmd = app.add_subcommand("inequalities", "closed-form inequality grids");
    ineq_cmd->require_subcommand(1);
    ineq_cmd->fallthrough();
    {
        static std::string claim;
        static int d = 6, q = 3;
        static double eps = 0.2;
        auto* check = ineq_cmd->add_subcommand("check", "evaluate one claim on its grid");
        check->fallthrough();
        check->add_option("--claim", claim, "weird | insane")->required();
        check->add_option("--d", d, "degree parameter (insane)");
        check->add_option("--q", q, "colors (insane)");
        check->add_option("--eps", eps, "tail level (insane)");
        check->callback([&] {
            action = [&]() {
                spinimage::InequalityReport report;
                json out;
                if (claim == "weird") {
                    std::vector<int> qs;
                    for (int qq = 2; qq <= 10; ++qq) qs.push_back(qq);
                    std::vector<double> betas;
                    for (int j = 1; j <= 99; ++j) betas.push_back(j / 100.0);
                    report = spinimage::check_claim_weird(qs, betas);
                    out = json{{"claim", "weird"},
                               {"min_slack", report.min_slack},
                               {"points", report.points},
                               {"pass", report.pass}};
                } else if (claim == "insane") {
                    report = spinimage::check_claim_insane(d, q, eps);
                    out = json{{"claim", "insane"},
                               {"endpoint_value", report.endpoint_value},
                               {"max_increase", report.max_increase},
                               {"points", report.points},
                               {"pass", report.pass}};
                } else {
                    throw spinimage::ValidationError("unknown claim '" + claim + "'");
                }
                emit(opts, out, report.pass ? "inequality holds on the grid" : "violated");
                return report.pass ? 0 : 1;
            };
        });
    }

    // ---- influence ----
    auto* infl_cmd = app.add_subcommand("influence", "influence matrices and contraction");
    infl_cmd->require_subcommand(1);
    infl_cmd->fallthrough();
    {
        static std::string graph_path, matrix_path, pinning_path;
        auto* cp = infl_cmd->add_subcommand("compute", "assemble the influence matrix");
        cp->fallthrough();
        cp->add_option("--graph", graph_path, "graph JSON")->required();
        cp->add_option("--matrix", matrix_path, "interaction matrix JSON")->required();
        cp->add_option("--pinning", pinning_path, "pinning JSON");
        cp->callback([&] {
            action = [&]() {
                auto g = spinimage::graph_from_json(read_json_file(graph_path));
                auto a = spinimage::interaction_from_json(read_json_file(matrix_path));
                spinimage::Pinning pinning;
                if (!pinning_path.empty())
                    pinning = spinimage::pinning_from_json(read_json_file(pinning_path));
                auto report = spinimage::influence_matrix(g, a, pinning, opts.budget);
                emit(opts, spinimage::to_json(report),
                     "lambda_max = " + std::to_string(report.lambda_max));
                return report.spectrum_real ? 0 : 1;
            };
        });
    }
    {
        static std::string matrix_path, potential = "identity", norm = "linf";
        static int delta = 4, n = 100;
        static double floor = 1e-3;
        auto* ct = infl_cmd->add_subcommand("contraction",
                                            "sampled induced-norm bound for the Jacobian");
        ct->fallthrough();
        ct->add_option("--matrix", matrix_path, "interaction matrix JSON")->required();
        ct->add_option("--delta", delta, "exclusive degree bound")->required();
        ct->add_option("--potential", potential, "identity | log | sqrt");
        ct->add_option("--floor", floor, "potential domain floor");
        ct->add_option("--norm", norm, "l1 | l2 | linf");
        ct->add_option("--n", n, "samples per degree");
        ct->callback([&] {
            action = [&]() {
                auto a = spinimage::interaction_from_json(read_json_file(matrix_path));
                auto pot = spinimage::make_potential(potential, floor);
                auto report = spinimage::contraction_estimate(
                    a, delta, pot, spinimage::parse_norm(norm), n, opts.seed);
                emit(opts, spinimage::to_json(report),
                     "estimate " + std::to_string(report.estimate));
                return 0;
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        return action ? action() : 2;
    } catch (const spinimage::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const spinimage::ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const spinimage::InfeasibleError& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
