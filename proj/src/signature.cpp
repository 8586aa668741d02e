#include "spinimage/signature.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "spinimage/counterexample.hpp"
#include "spinimage/errors.hpp"

namespace spinimage {

SignatureInstance construct_signature_instance(int q, int d, double beta, int k, double gamma) {
    if (q < 2 || d < 2) throw ValidationError("construct_signature_instance: need q, d >= 2");
    if (beta <= 1.0) throw ValidationError("construct_signature_instance: need beta > 1");
    if (k < 0 || k > q - 1) throw ValidationError("construct_signature_instance: k outside {0,...,q-1}");
    if (gamma <= 0.0 || gamma >= 1.0)
        throw ValidationError("construct_signature_instance: need 0 < gamma < 1");

    int m = q - k;  // bottom block size
    double t = 0.0;
    for (int attempt = 0;; ++attempt) {
        t = std::pow((std::pow(beta, d) + (m - 1)) / (std::pow(gamma, d) + (m - 1)),
                     1.0 / static_cast<double>(d));
        if (t * gamma > 1.0) break;
        if (attempt >= 20)
            throw InfeasibleError(
                "construct_signature_instance: gamma too small for this (beta, d); increase "
                "gamma toward 1");
        gamma = 0.5 * (1.0 + gamma);
    }

    InteractionMatrix a = InteractionMatrix::all_ones(q);
    for (int i = 0; i < k; ++i) a.at(i, i) = beta;
    for (int i = k; i < q; ++i)
        for (int j = k; j < q; ++j) a.at(i, j) = i == j ? t * gamma : t;

    bool strict = false;
    for (double x : a.entries) {
        if (x < 1.0)
            throw InfeasibleError("construct_signature_instance: entry below 1 (t*gamma <= 1?)");
        if (x > 1.0) strict = true;
    }
    if (!strict) throw InfeasibleError("construct_signature_instance: matrix degenerated to all-ones");

    return SignatureInstance{a, t, gamma, beta, d, k};
}

EigenSignature eigen_signature(const InteractionMatrix& m, double tol) {
    validate(m);  // includes the symmetry check
    Eigen::MatrixXd mat(m.q, m.q);
    for (int i = 0; i < m.q; ++i)
        for (int j = 0; j < m.q; ++j) mat(i, j) = m.at(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(mat);
    if (solver.info() != Eigen::Success)
        throw InfeasibleError("eigen_signature: eigensolver did not converge");

    EigenSignature sig;
    sig.tol = tol;
    sig.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + m.q);
    double radius = 0.0;
    for (double l : sig.eigenvalues) radius = std::max(radius, std::fabs(l));
    double threshold = tol * radius;
    for (double l : sig.eigenvalues) {
        if (l > threshold)
            ++sig.n_pos;
        else if (l < -threshold)
            ++sig.n_neg;
        else
            ++sig.n_zero;
    }
    return sig;
}

PropSignatureReport verify_prop_signature(int q, int d, double beta, int k, double gamma) {
    PropSignatureReport report;
    report.instance = construct_signature_instance(q, d, beta, k, gamma);
    report.b = build_B(beta, report.instance.a);
    report.signature = eigen_signature(report.b);
    report.signature_ok = report.signature.n_pos == k + 2 && report.signature.n_zero == 0 &&
                          report.signature.n_neg == q - k - 1;
    double t = report.instance.t;
    double g = report.instance.gamma;
    report.constant_term = (q - k) * (k + 1) * (beta - 1.0) -
                           t * (beta - 1.0) * (beta + k) * (q - k - 1 + g);
    report.constant_term_ok = report.constant_term < 0.0;
    report.pass = report.signature_ok && report.constant_term_ok;
    return report;
}

TwoPositiveReport check_two_positive(const InteractionMatrix& b) {
    validate(b);
    if (b.q < 2) throw ValidationError("check_two_positive: matrix too small");
    bool strict = false;
    for (double x : b.entries) {
        if (x < 1.0) throw ValidationError("check_two_positive: entry below 1");
        if (x > 1.0) strict = true;
    }
    if (!strict) throw ValidationError("check_two_positive: all-ones matrix is excluded");

    TwoPositiveReport report;
    report.signature = eigen_signature(b);
    report.eigen_ok = report.signature.n_pos >= 2;

    // Gram matrix of the quadratic form on span{e_0, 1_{1..q}}: entries
    // beta, q (row of ones), and the total mass of the embedded matrix.
    int q = b.q - 1;
    double beta = b.at(0, 0);
    double mass = 0.0;
    for (int i = 1; i < b.q; ++i)
        for (int j = 1; j < b.q; ++j) mass += b.at(i, j);
    report.gram_det = beta * mass - static_cast<double>(q) * q;
    report.gram_ok = beta > 0.0 && report.gram_det > 0.0;
    report.pass = report.eigen_ok && report.gram_ok;
    return report;
}

json to_json(const EigenSignature& sig) {
    return json{{"n_pos", sig.n_pos},
                {"n_zero", sig.n_zero},
                {"n_neg", sig.n_neg},
                {"eigenvalues", sig.eigenvalues},
                {"tol", sig.tol}};
}

json to_json(const PropSignatureReport& report) {
    return json{{"q", report.instance.a.q},
                {"d", report.instance.d},
                {"beta", report.instance.beta},
                {"k", report.instance.k},
                {"gamma", report.instance.gamma},
                {"t", report.instance.t},
                {"A", to_json(report.instance.a)},
                {"B", to_json(report.b)},
                {"signature", to_json(report.signature)},
                {"signature_ok", report.signature_ok},
                {"constant_term", report.constant_term},
                {"constant_term_ok", report.constant_term_ok},
                {"pass", report.pass}};
}

}  // namespace spinimage
