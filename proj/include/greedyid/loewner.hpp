#pragma once

#include <cstddef>
#include <vector>

#include "greedyid/lti.hpp"

namespace greedyid {

/// Interpolation data with a row/column partition for the pencil:
/// left_idx lists the column points lambda_j (their values form the row W),
/// right_idx lists the row points mu_i (their values form the column V).
struct MeasurementSet {
    std::vector<cplx> points;
    std::vector<cplx> values;
    std::vector<std::size_t> left_idx;
    std::vector<std::size_t> right_idx;

    std::size_t size() const { return points.size(); }
    void add(cplx point, cplx value) {
        points.push_back(point);
        values.push_back(value);
    }
};

/// Partitions by sorting on the imaginary part (ties on the real part) and
/// alternating: odd ranks to left_idx, even ranks to right_idx.
/// Throws EmptyData on empty sets, OddCount on odd sizes.
void split_points(MeasurementSet& ms);

/// Interlaces measurements by a caller-supplied frequency key and augments
/// each side with conjugates: odd-ranked keys become column points, even
/// ranks row points, and every (sigma, h) is immediately followed by
/// (conj sigma, conj h) so realify_pencil can pair coordinates in order.
MeasurementSet paired_split(const std::vector<cplx>& points,
                            const std::vector<cplx>& values,
                            const std::vector<double>& keys);

/// Loewner pencil data. ones_row/ones_col start as all-ones vectors and are
/// rotated alongside the matrices by realify_pencil, which keeps the
/// feed-through correction Ls - ones_row * D * ones_col valid in any basis.
struct LoewnerPencil {
    Matrix L;
    Matrix Ls;
    Vector V;        // values at the row points mu
    RowVector W;     // values at the column points lambda
    Vector mu;       // row points (original data, even in a rotated basis)
    Vector lambda;   // column points
    Vector ones_row;
    RowVector ones_col;
    cplx D{0.0, 0.0};
    bool rotated_basis{false};

    Eigen::Index rows() const { return L.rows(); }
    Eigen::Index cols() const { return L.cols(); }
};

/// Builds the pencil from a partitioned measurement set. Throws EmptyData if
/// either side is empty, ConfigError for an incomplete partition, and
/// CoincidentPoints when some lambda_j equals some mu_i.
LoewnerPencil build_pencil(const MeasurementSet& ms, cplx feedthrough = cplx(0.0, 0.0));

/// Direct full-order realization
///   E = -L, A = -(Ls - ones D ones^T), B = V - ones D, C = W - D ones^T,
/// which interpolates the data whenever L is numerically nonsingular
/// (SingularLoewner otherwise). Pure feed-through data, where L and the
/// D-corrected values all vanish, yields the order-0 model instead.
StateSpace realize(const LoewnerPencil& p);

/// Rank-revealing compression: SVDs of [L, Ls] and [L; Ls], numerical rank
/// r = min count of singular values above rank_tol times each largest one,
/// projection of the D-corrected matrices onto the dominant left/right
/// subspaces. Data whose Loewner matrix has rank 0 collapses to an order-0
/// model whose feed-through absorbs the mean measured value. A pencil that
/// is entirely real (e.g. after realify_pencil) is compressed in real
/// arithmetic, so the returned model is real.
StateSpace compress_realize(const LoewnerPencil& p, double rank_tol = 1e-12);

/// Rotates a pencil whose row and column points are ordered in conjugate
/// pairs (sigma, conj sigma) to a real basis with the unitary blocks
/// (1/sqrt 2) [[1, j], [1, -j]]. Residual imaginary parts are verified and
/// truncated; throws NotConjugateClosed beyond 1e-6 relative.
LoewnerPencil realify_pencil(const LoewnerPencil& p);

/// Equivalence transform of a realization whose state coordinates are
/// conjugate-paired in order (as produced by realize() on paired data) to a
/// real model; the transfer function is unchanged. Models that are already
/// real are returned as they are. Throws NotConjugateClosed when residual
/// imaginary parts exceed 1e-6 relative.
StateSpace realify(const StateSpace& m);

}  // namespace greedyid
