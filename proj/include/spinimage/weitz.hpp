#pragma once

#include <vector>

#include "spinimage/core.hpp"

namespace spinimage {

/// Universal external fields for a 2-spin interaction matrix: field i pins the
/// prefix j < i with row (A00, A01), leaves site i free, and pins the suffix
/// j > i with row (A10, A11). Independent of any input distribution.
std::vector<ExternalField> weitz_fields(const InteractionMatrix& a, int d);

/// || F(mu) - F(tensor_i (lambda^(i) * mu)_i) ||_inf. Exact identity for
/// 2-spin systems; a residual above tol on a nondegenerate input indicates a
/// transcription bug, not an approximation error.
double weitz_check(const InteractionMatrix& a, const JointDistribution& mu);

}  // namespace spinimage
