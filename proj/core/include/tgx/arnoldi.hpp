#pragma once

#include <optional>
#include <vector>

#include "tgx/block.hpp"
#include "tgx/extrapolation.hpp"

namespace tgx {

struct ArnoldiData {
    std::vector<Tensor> v;   // k+1 orthonormal slices
    Eigen::MatrixXd h_hat;   // (k+1) x k upper Hessenberg
    double beta = 0.0;       // ||D_n||_F
    int k = 0;               // achieved width (<= requested on breakdown)
    bool happy_breakdown = false;
};

/// Arnoldi process over the difference sequence. Each basis slice is a known
/// combination of differences, so the image of the underlying fixed-point map
/// is available as the index-shifted combination; orthogonalizing it by
/// modified Gram-Schmidt yields the classical Hessenberg matrix without ever
/// forming the operator. A subdiagonal entry below breakdown_tol * beta
/// truncates the basis (happy breakdown).
ArnoldiData arnoldi_build(const std::vector<Tensor>& d, double breakdown_tol = 1e-12);

/// Solves H_k mu = beta e1 (square Hessenberg part) by elimination.
Eigen::VectorXd mpe_from_hessenberg(const ArnoldiData& data);

/// Least-squares solve of the (k+1) x k Hessenberg system by Givens rotations.
Eigen::VectorXd rre_from_hessenberg(const ArnoldiData& data);

/// Algorithm-3-style extrapolation: combine in the orthonormal basis, then
/// recover the difference-basis mu and delta by a triangular basis change.
ExtrapResult extrapolate_arnoldi(const Window& w, Method method);

}  // namespace tgx
