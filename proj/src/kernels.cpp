#include "greedyid/kernels.hpp"

#include "greedyid/greedy.hpp"

namespace greedyid {
namespace kernels {

std::vector<cplx> frequency_response(const TfEvaluator& ev, const std::vector<cplx>& pts) {
    std::vector<cplx> out(pts.size());
    const std::int64_t n = static_cast<std::int64_t>(pts.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = ev(pts[static_cast<std::size_t>(i)]);
    return out;
}

void loewner_fill(const Vector& mu, const Vector& v, const Vector& lambda,
                  const RowVector& w, Matrix& L, Matrix& Ls) {
    const Eigen::Index rows = mu.size();
    const Eigen::Index cols = lambda.size();
    L.resize(rows, cols);
    Ls.resize(rows, cols);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            const cplx den = lambda(j) - mu(i);
            L(i, j) = (w(j) - v(i)) / den;
            Ls(i, j) = (lambda(j) * w(j) - mu(i) * v(i)) / den;
        }
    }
}

std::vector<double> masked_objective(const std::vector<double>& omega,
                                     const std::vector<double>& disc,
                                     const std::vector<double>& anchors,
                                     double beta, double epsilon,
                                     const std::vector<char>& exclude) {
    std::vector<double> obj(omega.size(), -1.0);
    std::vector<cplx> anchor_pts(anchors.size());
    for (std::size_t a = 0; a < anchors.size(); ++a) anchor_pts[a] = cplx(0.0, anchors[a]);
    const std::int64_t n = static_cast<std::int64_t>(omega.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        if (!exclude.empty() && exclude[k]) continue;
        obj[k] = mask_product(cplx(0.0, omega[k]), anchor_pts, beta, epsilon) * disc[k];
    }
    return obj;
}

namespace serial {

std::vector<cplx> frequency_response(const TfEvaluator& ev, const std::vector<cplx>& pts) {
    std::vector<cplx> out(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) out[i] = ev(pts[i]);
    return out;
}

void loewner_fill(const Vector& mu, const Vector& v, const Vector& lambda,
                  const RowVector& w, Matrix& L, Matrix& Ls) {
    const Eigen::Index rows = mu.size();
    const Eigen::Index cols = lambda.size();
    L.resize(rows, cols);
    Ls.resize(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            const cplx den = lambda(j) - mu(i);
            L(i, j) = (w(j) - v(i)) / den;
            Ls(i, j) = (lambda(j) * w(j) - mu(i) * v(i)) / den;
        }
    }
}

std::vector<double> masked_objective(const std::vector<double>& omega,
                                     const std::vector<double>& disc,
                                     const std::vector<double>& anchors,
                                     double beta, double epsilon,
                                     const std::vector<char>& exclude) {
    std::vector<double> obj(omega.size(), -1.0);
    std::vector<cplx> anchor_pts(anchors.size());
    for (std::size_t a = 0; a < anchors.size(); ++a) anchor_pts[a] = cplx(0.0, anchors[a]);
    for (std::size_t k = 0; k < omega.size(); ++k) {
        if (!exclude.empty() && exclude[k]) continue;
        obj[k] = mask_product(cplx(0.0, omega[k]), anchor_pts, beta, epsilon) * disc[k];
    }
    return obj;
}

}  // namespace serial
}  // namespace kernels
}  // namespace greedyid
