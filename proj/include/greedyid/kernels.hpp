#pragma once

#include <vector>

#include "greedyid/lti.hpp"

namespace greedyid {

// Data-parallel kernels behind the sweep-heavy code paths. Each has a serial
// reference twin under kernels::serial used by the consistency tests and the
// kernel benchmark; results are bitwise identical because every slot is
// computed independently and reductions stay serial.

namespace kernels {

/// Evaluates `ev` at every point.
std::vector<cplx> frequency_response(const TfEvaluator& ev, const std::vector<cplx>& pts);

/// Loewner and shifted-Loewner fill for row points mu (values v) and column
/// points lambda (values w):
///   L(i,j)  = (w_j - v_i) / (lambda_j - mu_i)
///   Ls(i,j) = (lambda_j w_j - mu_i v_i) / (lambda_j - mu_i)
void loewner_fill(const Vector& mu, const Vector& v, const Vector& lambda,
                  const RowVector& w, Matrix& L, Matrix& Ls);

/// Notch-masked selection objective per candidate:
///   obj_i = prod_a mask(omega_i, anchor_a) * disc_i,
/// with excluded slots forced to -1 so they can never win the argmax.
std::vector<double> masked_objective(const std::vector<double>& omega,
                                     const std::vector<double>& disc,
                                     const std::vector<double>& anchors,
                                     double beta, double epsilon,
                                     const std::vector<char>& exclude);

namespace serial {

std::vector<cplx> frequency_response(const TfEvaluator& ev, const std::vector<cplx>& pts);
void loewner_fill(const Vector& mu, const Vector& v, const Vector& lambda,
                  const RowVector& w, Matrix& L, Matrix& Ls);
std::vector<double> masked_objective(const std::vector<double>& omega,
                                     const std::vector<double>& disc,
                                     const std::vector<double>& anchors,
                                     double beta, double epsilon,
                                     const std::vector<char>& exclude);

}  // namespace serial
}  // namespace kernels
}  // namespace greedyid
