#pragma once

#include <vector>

#include "tgx/tensor.hpp"

namespace tgx {

/// Mode-(N+1) stack of m same-shape tensor slices.
class BlockTensor {
public:
    explicit BlockTensor(std::vector<Tensor> slices);

    int width() const { return static_cast<int>(slices_.size()); }
    const Shape& column_shape() const { return slices_.front().shape(); }
    const Tensor& slice(int j) const { return slices_[static_cast<std::size_t>(j)]; }
    const std::vector<Tensor>& slices() const { return slices_; }

private:
    std::vector<Tensor> slices_;
};

inline BlockTensor stack(std::vector<Tensor> tensors) { return BlockTensor(std::move(tensors)); }

/// Linear combination of slices: sum_j x_j * slice_j.
Tensor block_apply(const BlockTensor& b, const Eigen::VectorXd& x);

/// Matrix of pairwise Frobenius inner products.
Eigen::MatrixXd block_gram(const BlockTensor& b);

/// Vector of inner products of each slice with c.
Eigen::VectorXd block_dot_rhs(const BlockTensor& b, const Tensor& c);

struct GlobalQR {
    BlockTensor q;
    Eigen::MatrixXd r;  // upper triangular, nonnegative diagonal
};

/// Modified Gram-Schmidt over the tensor inner product, with one
/// reorthogonalization pass when a column's norm collapses past 1/sqrt(2).
/// Throws RankDeficientError when r_ii <= rank_tol * ||slice_i||.
GlobalQR global_qr(const BlockTensor& a, double rank_tol = 1e-12);

/// Solves min_x ||a x_bar x - sign*c||_F via the normal equations
/// R^T R x = sign * (a . c), using two triangular solves.
Eigen::VectorXd lsq_normal_eq(const BlockTensor& a, const Tensor& c, int sign,
                              double rank_tol = 1e-12);

}  // namespace tgx
