#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "tgx/tensor.hpp"

namespace tgx {

/// X_{n+1} = M *_N X_n + B.
struct LinearProcess {
    EinsteinOp m;
    Tensor b;
};

Tensor linear_step(const LinearProcess& p, const Tensor& x);

/// Seeded random operator rescaled so its spectral radius lands in
/// [0.9 * rho_target, rho_target].
EinsteinOp make_contractive_op(const Shape& modes, double rho_target, std::uint64_t seed);

struct MinpolyInstance {
    EinsteinOp m;
    Tensor b;
    Tensor x0;
    Tensor limit;
    int degree = 0;
};

/// Constructs a convergent linear process whose minimal polynomial of M with
/// respect to the first difference has degree exactly `degree`.
MinpolyInstance make_finite_minpoly_op(const Shape& modes, int degree, std::uint64_t seed);

/// Steepest-descent iteration for A *_M X *_N B = C.
struct SylvesterLikeProblem {
    Tensor a;            // left factor
    Tensor bt;           // right factor
    Tensor c;
    int left_contract;   // M: modes contracted between a and x
    int right_contract;  // N: modes contracted between x and bt
    double step_size;    // omega
};

/// Builds the problem and estimates omega = 1 / sigma_max^2 by power
/// iteration on the normal operator X -> A^T * (A * X * B) * B^T.
SylvesterLikeProblem make_sylvester_problem(Tensor a, Tensor bt, Tensor c, int left_contract,
                                            int right_contract);

Tensor gradient_iteration_step(const SylvesterLikeProblem& p, const Tensor& x);
Tensor sylvester_residual(const SylvesterLikeProblem& p, const Tensor& x);

/// Elementwise sin((1 + 1/(n+1)^2) * x).
Tensor sin_step(const Tensor& x, int n);

/// Symmetric rank-r completion instance over {0..n-1}^3.
struct CompletionProblem {
    int n = 0;
    int rank = 0;
    std::vector<std::array<Index, 3>> omega;
    std::vector<std::uint8_t> mask;  // n^3 membership flags, row-major
    Tensor v_obs;                    // observed entries (noisy), zero off omega
    double eta = 0.0;                // gradient step size
    Eigen::MatrixXd truth;           // ground-truth factor matrix, n x rank
    Tensor truth_tensor;             // cp_sym_eval(truth)
};

/// Seeded instance: omega sampled entrywise with probability p_obs then
/// closed under index permutation; uniform noise scaled by noise_level.
CompletionProblem make_completion_problem(int n, int rank, double p_obs, double noise_level,
                                          std::uint64_t seed);

Tensor project_omega(const CompletionProblem& p, const Tensor& t);

/// sum_k v_k (x) v_k (x) v_k; permutation-symmetric by construction.
Tensor cp_sym_eval(const Eigen::MatrixXd& v);

double completion_loss(const CompletionProblem& p, const Eigen::MatrixXd& v);
Eigen::MatrixXd completion_gradient(const CompletionProblem& p, const Eigen::MatrixXd& v);
Eigen::MatrixXd completion_gd_step(const CompletionProblem& p, const Eigen::MatrixXd& v);

/// Factor-matrix iterates as order-2 tensors so the extrapolation machinery
/// applies unchanged.
Tensor factor_to_tensor(const Eigen::MatrixXd& v);
Eigen::MatrixXd tensor_to_factor(const Tensor& t);

/// Seeded uniform(-1,1) tensor.
Tensor random_tensor(const Shape& shape, std::uint64_t seed);

}  // namespace tgx
