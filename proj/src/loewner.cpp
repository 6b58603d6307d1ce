#include "greedyid/loewner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "greedyid/kernels.hpp"

namespace greedyid {

void split_points(MeasurementSet& ms) {
    if (ms.size() == 0) throw EmptyData("split_points: no measurements");
    if (ms.size() % 2 != 0) throw OddCount("split_points: measurement count must be even");
    std::vector<std::size_t> order(ms.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (ms.points[a].imag() != ms.points[b].imag())
            return ms.points[a].imag() < ms.points[b].imag();
        return ms.points[a].real() < ms.points[b].real();
    });
    ms.left_idx.clear();
    ms.right_idx.clear();
    for (std::size_t r = 0; r < order.size(); ++r)
        (r % 2 == 0 ? ms.left_idx : ms.right_idx).push_back(order[r]);
}

MeasurementSet paired_split(const std::vector<cplx>& points,
                            const std::vector<cplx>& values,
                            const std::vector<double>& keys) {
    if (points.empty()) throw EmptyData("paired_split: no measurements");
    if (points.size() != values.size() || points.size() != keys.size())
        throw DimensionMismatch("paired_split: points, values and keys must align");
    if (points.size() % 2 != 0) throw OddCount("paired_split: measurement count must be even");
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    MeasurementSet ms;
    for (std::size_t r = 0; r < order.size(); ++r) {
        const cplx p = points[order[r]];
        const cplx h = values[order[r]];
        const std::size_t base = ms.size();
        ms.add(p, h);
        ms.add(std::conj(p), std::conj(h));
        auto& side = (r % 2 == 0) ? ms.left_idx : ms.right_idx;
        side.push_back(base);
        side.push_back(base + 1);
    }
    return ms;
}

LoewnerPencil build_pencil(const MeasurementSet& ms, cplx feedthrough) {
    if (ms.left_idx.empty() || ms.right_idx.empty())
        throw EmptyData("build_pencil: both sides of the partition must be nonempty");
    if (ms.left_idx.size() + ms.right_idx.size() != ms.size())
        throw ConfigError("build_pencil: partition must cover every measurement exactly once");
    LoewnerPencil p;
    const Eigen::Index rows = static_cast<Eigen::Index>(ms.right_idx.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(ms.left_idx.size());
    p.mu.resize(rows);
    p.V.resize(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        p.mu(i) = ms.points[ms.right_idx[static_cast<std::size_t>(i)]];
        p.V(i) = ms.values[ms.right_idx[static_cast<std::size_t>(i)]];
    }
    p.lambda.resize(cols);
    p.W.resize(cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        p.lambda(j) = ms.points[ms.left_idx[static_cast<std::size_t>(j)]];
        p.W(j) = ms.values[ms.left_idx[static_cast<std::size_t>(j)]];
    }
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            if (p.lambda(j) == p.mu(i))
                throw CoincidentPoints("build_pencil: coincident row and column points");
    kernels::loewner_fill(p.mu, p.V, p.lambda, p.W, p.L, p.Ls);
    p.ones_row = Vector::Ones(rows);
    p.ones_col = RowVector::Ones(cols);
    p.D = feedthrough;
    return p;
}

namespace {

double pencil_data_scale(const Matrix& lsd, const Vector& vd, const RowVector& wd, cplx d) {
    double s = std::abs(d);
    if (lsd.size() > 0) s = std::max(s, lsd.cwiseAbs().maxCoeff());
    if (vd.size() > 0) s = std::max(s, vd.cwiseAbs().maxCoeff());
    if (wd.size() > 0) s = std::max(s, wd.cwiseAbs().maxCoeff());
    return s;
}

StateSpace gain_model(cplx d) {
    StateSpace m;
    m.E = Matrix(0, 0);
    m.A = Matrix(0, 0);
    m.B = Vector(0);
    m.C = RowVector(0);
    m.D = d;
    m.refresh_real_flag();
    return m;
}

}  // namespace

StateSpace realize(const LoewnerPencil& p) {
    if (p.rows() == 0 || p.cols() == 0) throw EmptyData("realize: empty pencil");
    if (p.rows() != p.cols())
        throw ConfigError("realize: direct realization needs a square pencil");
    const Matrix lsd = p.Ls - p.ones_row * p.D * p.ones_col;
    const Vector vd = p.V - p.ones_row * p.D;
    const RowVector wd = p.W - p.D * p.ones_col;
    const double scale = pencil_data_scale(lsd, vd, wd, p.D) + 1.0;
    const double lmax = p.L.cwiseAbs().maxCoeff();
    if (lmax <= 1e-15 * scale) {
        const double vmax = vd.size() ? vd.cwiseAbs().maxCoeff() : 0.0;
        const double wmax = wd.size() ? wd.cwiseAbs().maxCoeff() : 0.0;
        if (vmax <= 1e-12 * scale && wmax <= 1e-12 * scale) return gain_model(p.D);
        throw SingularLoewner("realize: Loewner matrix is numerically singular");
    }
    Eigen::PartialPivLU<Matrix> lu(p.L);
    if (lu.rcond() < 1e-14)
        throw SingularLoewner("realize: Loewner matrix is numerically singular");
    StateSpace m;
    m.E = -p.L;
    m.A = -lsd;
    m.B = vd;
    m.C = wd;
    m.D = p.D;
    m.refresh_real_flag();
    return m;
}

namespace {

// Mean of the D-corrected values, computed basis-independently through the
// rotated ones vectors: ones^H vd equals the plain sum in the data basis.
cplx corrected_mean(const LoewnerPencil& p, const Vector& vd, const RowVector& wd) {
    cplx acc(0.0, 0.0);
    double weight = 0.0;
    if (p.ones_row.size() > 0) {
        acc += (p.ones_row.adjoint() * vd)(0);
        weight += p.ones_row.squaredNorm();
    }
    if (p.ones_col.size() > 0) {
        acc += (wd * p.ones_col.adjoint())(0);
        weight += p.ones_col.squaredNorm();
    }
    return weight > 0.0 ? acc / weight : cplx(0.0, 0.0);
}

template <typename Mat>
Eigen::Index rank_above(const Mat& m, double rank_tol, double* sigma_max = nullptr) {
    if (m.rows() == 0 || m.cols() == 0) {
        if (sigma_max) *sigma_max = 0.0;
        return 0;
    }
    Eigen::JacobiSVD<Mat> svd(m);
    const auto& sv = svd.singularValues();
    if (sigma_max) *sigma_max = sv(0);
    if (sv(0) == 0.0) return 0;
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > rank_tol * sv(0)) ++r;
    return r;
}

template <typename Scalar>
StateSpace project_realization(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& l,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& lsd,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& vd,
    const Eigen::Matrix<Scalar, 1, Eigen::Dynamic>& wd,
    cplx d, double rank_tol) {
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const Eigen::Index rows = l.rows();
    const Eigen::Index cols = l.cols();
    Mat fat(rows, 2 * cols);
    fat << l, lsd;
    Mat tall(2 * rows, cols);
    tall << l, lsd;
    Eigen::JacobiSVD<Mat> svd_fat(fat, Eigen::ComputeThinU);
    Eigen::JacobiSVD<Mat> svd_tall(tall, Eigen::ComputeThinV);
    auto count = [&](const Eigen::VectorXd& sv) {
        if (sv.size() == 0 || sv(0) == 0.0) return Eigen::Index(0);
        Eigen::Index r = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) > rank_tol * sv(0)) ++r;
        return r;
    };
    const Eigen::Index r = std::min(count(svd_fat.singularValues()), count(svd_tall.singularValues()));
    if (r == 0) return gain_model(d);
    const Mat y = svd_fat.matrixU().leftCols(r);
    const Mat x = svd_tall.matrixV().leftCols(r);
    StateSpace m;
    m.E = (-(y.adjoint() * l * x)).template cast<cplx>();
    m.A = (-(y.adjoint() * lsd * x)).template cast<cplx>();
    m.B = (y.adjoint() * vd).template cast<cplx>();
    m.C = (wd * x).template cast<cplx>();
    m.D = d;
    m.refresh_real_flag();
    return m;
}

}  // namespace

StateSpace compress_realize(const LoewnerPencil& p, double rank_tol) {
    if (p.rows() == 0 || p.cols() == 0) throw EmptyData("compress_realize: empty pencil");
    if (rank_tol < 0.0) throw ConfigError("compress_realize: rank_tol must be >= 0");
    const Matrix lsd = p.Ls - p.ones_row * p.D * p.ones_col;
    const Vector vd = p.V - p.ones_row * p.D;
    const RowVector wd = p.W - p.D * p.ones_col;

    // Constant data: the Loewner matrix itself carries no dynamics.
    double l_sigma_max = 0.0;
    const Eigen::Index l_rank = rank_above(p.L, std::max(rank_tol, 1e-15), &l_sigma_max);
    const double data_scale = pencil_data_scale(lsd, vd, wd, p.D);
    if (l_rank == 0 || l_sigma_max <= 1e-15 * (data_scale + 1.0)) {
        if (data_scale == 0.0) return gain_model(p.D);
        return gain_model(p.D + corrected_mean(p, vd, wd));
    }

    const bool is_real = p.L.imag().cwiseAbs().maxCoeff() == 0.0 &&
                         lsd.imag().cwiseAbs().maxCoeff() == 0.0 &&
                         (vd.size() == 0 || vd.imag().cwiseAbs().maxCoeff() == 0.0) &&
                         (wd.size() == 0 || wd.imag().cwiseAbs().maxCoeff() == 0.0) &&
                         p.D.imag() == 0.0;
    if (is_real)
        return project_realization<double>(p.L.real(), lsd.real(), vd.real(), wd.real(),
                                           p.D, rank_tol);
    return project_realization<cplx>(p.L, lsd, vd, wd, p.D, rank_tol);
}

namespace {

// In-place rotation of consecutive conjugate pairs: rows get
// (1/sqrt 2) [[1, 1], [-j, j]] from the left, columns the adjoint block from
// the right. An odd trailing coordinate is left untouched (it must already
// be real for the residual check to pass).
void rotate_rows(Matrix& m) {
    const double inv = 1.0 / std::sqrt(2.0);
    const cplx j(0.0, 1.0);
    for (Eigen::Index r = 0; r + 1 < m.rows(); r += 2) {
        const RowVector a = m.row(r);
        const RowVector b = m.row(r + 1);
        m.row(r) = (a + b) * inv;
        m.row(r + 1) = (b - a) * j * inv;
    }
}

void rotate_cols(Matrix& m) {
    const double inv = 1.0 / std::sqrt(2.0);
    const cplx j(0.0, 1.0);
    for (Eigen::Index c = 0; c + 1 < m.cols(); c += 2) {
        const Vector a = m.col(c);
        const Vector b = m.col(c + 1);
        m.col(c) = (a + b) * inv;
        m.col(c + 1) = (a - b) * j * inv;
    }
}

double matrix_scale(std::initializer_list<const Matrix*> ms) {
    double s = 0.0;
    for (const Matrix* m : ms)
        if (m->size() > 0) s = std::max(s, m->cwiseAbs().maxCoeff());
    return s;
}

double max_imag_of(std::initializer_list<const Matrix*> ms) {
    double s = 0.0;
    for (const Matrix* m : ms)
        if (m->size() > 0) s = std::max(s, m->imag().cwiseAbs().maxCoeff());
    return s;
}

void truncate_imag(Matrix& m) { m = m.real().cast<cplx>(); }

}  // namespace

LoewnerPencil realify_pencil(const LoewnerPencil& p) {
    if (p.rows() == 0 || p.cols() == 0) throw EmptyData("realify_pencil: empty pencil");
    if (p.rows() % 2 != 0 || p.cols() % 2 != 0)
        throw NotConjugateClosed("realify_pencil: sides must pair points with their conjugates");
    if (p.D.imag() != 0.0)
        throw NotConjugateClosed("realify_pencil: feed-through must be real");
    for (Eigen::Index i = 0; i + 1 < p.mu.size(); i += 2)
        if (std::abs(p.mu(i + 1) - std::conj(p.mu(i))) >
            1e-12 * (1.0 + std::abs(p.mu(i))))
            throw NotConjugateClosed("realify_pencil: row points are not conjugate-paired");
    for (Eigen::Index i = 0; i + 1 < p.lambda.size(); i += 2)
        if (std::abs(p.lambda(i + 1) - std::conj(p.lambda(i))) >
            1e-12 * (1.0 + std::abs(p.lambda(i))))
            throw NotConjugateClosed("realify_pencil: column points are not conjugate-paired");

    LoewnerPencil q = p;
    Matrix v = q.V;
    Matrix w = q.W;
    Matrix ones_r = q.ones_row;
    Matrix ones_c = q.ones_col;
    rotate_rows(q.L);
    rotate_rows(q.Ls);
    rotate_rows(v);
    rotate_rows(ones_r);
    rotate_cols(q.L);
    rotate_cols(q.Ls);
    rotate_cols(w);
    rotate_cols(ones_c);

    const double scale = matrix_scale({&q.L, &q.Ls, &v, &w}) + std::abs(q.D);
    const double resid = std::max(max_imag_of({&q.L, &q.Ls, &v, &w}),
                                  max_imag_of({&ones_r, &ones_c}));
    if (resid > 1e-6 * (scale + 1.0))
        throw NotConjugateClosed("realify_pencil: residual imaginary mass too large");
    truncate_imag(q.L);
    truncate_imag(q.Ls);
    truncate_imag(v);
    truncate_imag(w);
    truncate_imag(ones_r);
    truncate_imag(ones_c);
    q.V = v.col(0);
    q.W = w.row(0);
    q.ones_row = ones_r.col(0);
    q.ones_col = ones_c.row(0);
    q.rotated_basis = true;
    return q;
}

StateSpace realify(const StateSpace& m) {
    m.validate();
    const double data_scale =
        matrix_scale({&m.E, &m.A}) +
        (m.B.size() ? m.B.cwiseAbs().maxCoeff() : 0.0) +
        (m.C.size() ? m.C.cwiseAbs().maxCoeff() : 0.0) + std::abs(m.D);
    if (m.max_imag() <= 1e-10 * (data_scale + 1.0)) {
        // Already real up to roundoff dust: truncate in place, no basis change.
        StateSpace r = m;
        truncate_imag(r.E);
        truncate_imag(r.A);
        Matrix b = r.B;
        Matrix c = r.C;
        truncate_imag(b);
        truncate_imag(c);
        r.B = b.col(0);
        r.C = c.row(0);
        r.D = cplx(r.D.real(), 0.0);
        r.real = true;
        return r;
    }
    if (std::abs(m.D.imag()) > 1e-6 * (std::abs(m.D) + 1.0))
        throw NotConjugateClosed("realify: feed-through must be real");
    StateSpace r = m;
    Matrix b = r.B;
    Matrix c = r.C;
    rotate_rows(r.E);
    rotate_rows(r.A);
    rotate_rows(b);
    rotate_cols(r.E);
    rotate_cols(r.A);
    rotate_cols(c);
    const double scale = matrix_scale({&r.E, &r.A, &b, &c}) + std::abs(r.D);
    const double resid = max_imag_of({&r.E, &r.A, &b, &c});
    if (resid > 1e-6 * (scale + 1.0))
        throw NotConjugateClosed("realify: state coordinates are not conjugate-paired");
    truncate_imag(r.E);
    truncate_imag(r.A);
    truncate_imag(b);
    truncate_imag(c);
    r.B = b.col(0);
    r.C = c.row(0);
    r.D = cplx(r.D.real(), 0.0);
    r.real = true;
    return r;
}

}  // namespace greedyid
