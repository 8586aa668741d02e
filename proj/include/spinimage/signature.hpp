#pragma once

#include <vector>

#include "spinimage/core.hpp"

namespace spinimage {

struct EigenSignature {
    int n_pos = 0, n_zero = 0, n_neg = 0;
    std::vector<double> eigenvalues;  // ascending
    double tol = 0.0;                 // classification threshold = tol * spectral radius
};

struct SignatureInstance {
    InteractionMatrix a;
    double t = 0.0;
    double gamma = 0.0;  // effective gamma after any retries
    double beta = 0.0;
    int d = 0;
    int k = 0;
};

/// Block interaction matrix with a prescribed eigenvalue signature after the
/// special-spin extension: top-left k x k block 1*1^T + (beta-1)I, off-blocks
/// all ones, bottom-right (q-k) x (q-k) block t(1*1^T + (gamma-1)I), with
/// t^d = (beta^d + q-k-1)/(gamma^d + q-k-1). Column power sums are equal by
/// construction. If t*gamma <= 1, gamma is pushed toward 1 (gamma <- (1+gamma)/2)
/// up to 20 times before erroring.
SignatureInstance construct_signature_instance(int q, int d, double beta, int k, double gamma);

EigenSignature eigen_signature(const InteractionMatrix& m, double tol = 1e-8);

struct PropSignatureReport {
    SignatureInstance instance;
    InteractionMatrix b;
    EigenSignature signature;
    bool signature_ok = false;     // exactly (k+2, 0, q-k-1)
    double constant_term = 0.0;    // (q-k)(k+1)(beta-1) - t(beta-1)(beta+k)(q-k-1+gamma)
    bool constant_term_ok = false; // strictly negative
    bool pass = false;
};

PropSignatureReport verify_prop_signature(int q, int d, double beta, int k, double gamma);

struct TwoPositiveReport {
    EigenSignature signature;
    bool eigen_ok = false;   // n_pos >= 2
    double gram_det = 0.0;   // det of the 2x2 Gram matrix on span{e_special, 1}
    bool gram_ok = false;    // Gram matrix positive definite
    bool pass = false;
};

/// At least two positive eigenvalues for B built from beta >= 1 and
/// A >= 1*1^T, A != 1*1^T; cross-checked by the quadratic-form witness
/// [[beta, q], [q, 1^T A 1]] being positive definite.
TwoPositiveReport check_two_positive(const InteractionMatrix& b);

json to_json(const EigenSignature& sig);
json to_json(const PropSignatureReport& report);

}  // namespace spinimage
