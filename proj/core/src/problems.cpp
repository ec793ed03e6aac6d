#include "tgx/problems.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace tgx {

namespace {

std::mt19937_64 seeded_rng(std::uint64_t seed) { return std::mt19937_64(seed ^ 0x9e3779b97f4a7c15ULL); }

Eigen::MatrixXd random_orthogonal(Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd g(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) g(i, j) = gauss(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    // Fix the sign convention so the factor is deterministic.
    Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j) {
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    }
    return q;
}

}  // namespace

Tensor random_tensor(const Shape& shape, std::uint64_t seed) {
    auto rng = seeded_rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> data(static_cast<std::size_t>(shape.size()));
    for (double& v : data) v = uni(rng);
    return Tensor(shape, std::move(data));
}

Tensor linear_step(const LinearProcess& p, const Tensor& x) { return apply(p.m, x) + p.b; }

EinsteinOp make_contractive_op(const Shape& modes, double rho_target, std::uint64_t seed) {
    if (rho_target <= 0.0 || rho_target >= 1.0) throw Error("rho_target must lie in (0,1)");
    Tensor raw = random_tensor(modes.cat(modes), seed);
    EinsteinOp op(modes, modes, std::move(raw));
    const double rho = spectral_radius(op, 1e-10, 20000).value;
    if (rho == 0.0) throw Error("degenerate random operator");
    op.data *= 0.95 * rho_target / rho;
    return op;
}

MinpolyInstance make_finite_minpoly_op(const Shape& modes, int degree, std::uint64_t seed) {
    const Index n = modes.size();
    if (degree < 1 || degree > n) throw Error("minimal-polynomial degree too large for shape");
    auto rng = seeded_rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    // d distinct eigenvalues in (0,1); the repeated tail stays inactive
    // because the initial error has no component there.
    Eigen::VectorXd lambda(n);
    for (int i = 0; i < degree; ++i) {
        lambda(i) = 0.1 + 0.8 * (static_cast<double>(i) + 0.25 * uni(rng)) / degree;
    }
    for (Index i = degree; i < n; ++i) lambda(i) = lambda(0);

    Eigen::MatrixXd q = random_orthogonal(n, rng);
    Eigen::MatrixXd m = q * lambda.asDiagonal() * q.transpose();

    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < degree; ++i) u(i) = 0.5 + uni(rng);
    Eigen::VectorXd e0 = q * u;  // initial error with exactly d active modes

    Eigen::VectorXd limit(n);
    for (Index i = 0; i < n; ++i) limit(i) = 2.0 * uni(rng) - 1.0;
    Eigen::VectorXd b = (Eigen::MatrixXd::Identity(n, n) - m) * limit;

    MinpolyInstance inst;
    inst.m = unflatten_op(m, modes);
    inst.b = unflatten_vec(b, modes);
    inst.x0 = unflatten_vec(limit + e0, modes);
    inst.limit = unflatten_vec(limit, modes);
    inst.degree = degree;
    return inst;
}

Tensor sylvester_residual(const SylvesterLikeProblem& p, const Tensor& x) {
    Tensor ax = einstein_product(p.a, x, p.left_contract);
    return einstein_product(ax, p.bt, p.right_contract) - p.c;
}

namespace {

Tensor sylvester_adjoint(const SylvesterLikeProblem& p, const Tensor& r) {
    const int p_order = p.a.order() - p.left_contract;   // leading modes of a
    const int t_order = p.bt.order() - p.right_contract;  // trailing modes of bt
    Tensor at = transpose(p.a, p_order);
    Tensor btt = transpose(p.bt, p.right_contract);
    Tensor tmp = einstein_product(at, r, p_order);
    return einstein_product(tmp, btt, t_order);
}

}  // namespace

SylvesterLikeProblem make_sylvester_problem(Tensor a, Tensor bt, Tensor c, int left_contract,
                                            int right_contract) {
    SylvesterLikeProblem p{std::move(a), std::move(bt), std::move(c), left_contract,
                           right_contract, 0.0};
    const Shape x_shape = p.a.shape()
                              .suffix(left_contract)
                              .cat(p.bt.shape().prefix(right_contract));

    // Largest curvature of the normal operator by power iteration.
    Tensor v = random_tensor(x_shape, 42);
    v *= 1.0 / fro_norm(v);
    double lam = 1.0;
    for (int it = 0; it < 60; ++it) {
        Tensor av = einstein_product(p.a, v, left_contract);
        Tensor w = sylvester_adjoint(p, einstein_product(av, p.bt, right_contract));
        lam = fro_norm(w);
        if (lam == 0.0) break;
        w *= 1.0 / lam;
        v = std::move(w);
    }
    if (lam == 0.0) throw Error("zero operator in sylvester problem");
    p.step_size = 1.0 / (1.05 * lam);
    return p;
}

Tensor gradient_iteration_step(const SylvesterLikeProblem& p, const Tensor& x) {
    Tensor g = sylvester_adjoint(p, sylvester_residual(p, x));
    g *= p.step_size;
    return x - g;
}

Tensor sin_step(const Tensor& x, int n) {
    const double factor = 1.0 + 1.0 / ((n + 1.0) * (n + 1.0));
    Tensor out = x;
    for (double& v : out.data_mut()) v = std::sin(factor * v);
    return out;
}

Tensor factor_to_tensor(const Eigen::MatrixXd& v) {
    Tensor t(Shape{v.rows(), v.cols()});
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        t.data_mut().data(), v.rows(), v.cols()) = v;
    return t;
}

Eigen::MatrixXd tensor_to_factor(const Tensor& t) {
    if (t.order() != 2) throw ShapeError("factor tensor must have order 2");
    return flatten(t, 1);
}

Tensor cp_sym_eval(const Eigen::MatrixXd& v) {
    const Index n = v.rows();
    Tensor out(Shape{n, n, n});
    auto data = out.data_mut();
    // Loop over i <= j <= l and write every index permutation so the result
    // is symmetric bitwise, not just up to rounding.
    for (Eigen::Index k = 0; k < v.cols(); ++k) {
        const auto col = v.col(k);
        for (Index i = 0; i < n; ++i) {
            for (Index j = i; j < n; ++j) {
                const double ij = col(i) * col(j);
                for (Index l = j; l < n; ++l) {
                    const double val = ij * col(l);
                    const Index perms[6][3] = {{i, j, l}, {i, l, j}, {j, i, l},
                                               {j, l, i}, {l, i, j}, {l, j, i}};
                    for (int q = 0; q < 6; ++q) {
                        bool dup = false;
                        for (int r = 0; r < q && !dup; ++r) {
                            dup = perms[q][0] == perms[r][0] && perms[q][1] == perms[r][1] &&
                                  perms[q][2] == perms[r][2];
                        }
                        if (dup) continue;
                        data[static_cast<std::size_t>((perms[q][0] * n + perms[q][1]) * n +
                                                      perms[q][2])] += val;
                    }
                }
            }
        }
    }
    return out;
}

CompletionProblem make_completion_problem(int n, int rank, double p_obs, double noise_level,
                                          std::uint64_t seed) {
    if (n < 1 || rank < 1) throw Error("completion problem needs n >= 1 and rank >= 1");
    if (p_obs <= 0.0 || p_obs > 1.0) throw Error("p_obs must lie in (0,1]");
    auto rng = seeded_rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::uniform_real_distribution<double> uni01(0.0, 1.0);

    CompletionProblem p;
    p.n = n;
    p.rank = rank;

    p.truth.resize(n, rank);
    for (int k = 0; k < rank; ++k) {
        for (int i = 0; i < n; ++i) p.truth(i, k) = uni(rng);
        p.truth.col(k).normalize();
    }
    p.truth_tensor = cp_sym_eval(p.truth);

    const std::size_t total = static_cast<std::size_t>(n) * n * n;
    p.mask.assign(total, 0);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            for (Index k = 0; k < n; ++k) {
                if (uni01(rng) >= p_obs) continue;
                // closure under index permutation
                const Index idx[3] = {i, j, k};
                Index s[3] = {idx[0], idx[1], idx[2]};
                std::sort(s, s + 3);
                const Index perms[6][3] = {{s[0], s[1], s[2]}, {s[0], s[2], s[1]},
                                           {s[1], s[0], s[2]}, {s[1], s[2], s[0]},
                                           {s[2], s[0], s[1]}, {s[2], s[1], s[0]}};
                for (const auto& q : perms) {
                    p.mask[static_cast<std::size_t>((q[0] * n + q[1]) * n + q[2])] = 1;
                }
            }
        }
    }
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            for (Index k = 0; k < n; ++k) {
                if (p.mask[static_cast<std::size_t>((i * n + j) * n + k)]) {
                    p.omega.push_back({i, j, k});
                }
            }
        }
    }
    if (p.omega.empty()) throw Error("empty observation set; raise p_obs");

    p.v_obs = Tensor(Shape{n, n, n});
    auto obs = p.v_obs.data_mut();
    auto truth = p.truth_tensor.data();
    for (std::size_t q = 0; q < total; ++q) {
        if (p.mask[q]) obs[q] = truth[q] + noise_level * uni(rng);
    }

    // Curvature estimate by differencing gradients at the truth point.
    Eigen::MatrixXd dir(n, rank);
    for (int k = 0; k < rank; ++k)
        for (int i = 0; i < n; ++i) dir(i, k) = uni(rng);
    dir /= dir.norm();
    const double eps = 1e-4;
    double curvature = 1.0;
    Eigen::MatrixXd g0 = completion_gradient(p, p.truth);
    for (int it = 0; it < 12; ++it) {
        Eigen::MatrixXd g1 = completion_gradient(p, p.truth + eps * dir);
        Eigen::MatrixXd hv = (g1 - g0) / eps;
        curvature = hv.norm();
        if (curvature == 0.0) break;
        dir = hv / curvature;
    }
    // Conservative default step: keeps gradient descent in its smooth,
    // near-linear regime even from random initial factors, which is the
    // regime where sequence extrapolation is effective.
    p.eta = curvature > 0.0 ? 1.0 / (100.0 * curvature) : 1e-3;
    return p;
}

Tensor project_omega(const CompletionProblem& p, const Tensor& t) {
    if (t.shape() != Shape{p.n, p.n, p.n}) throw ShapeError("projection shape mismatch");
    Tensor out = t;
    auto data = out.data_mut();
    for (std::size_t q = 0; q < data.size(); ++q) {
        if (!p.mask[q]) data[q] = 0.0;
    }
    return out;
}

double completion_loss(const CompletionProblem& p, const Eigen::MatrixXd& v) {
    if (v.rows() != p.n || v.cols() != p.rank) throw ShapeError("factor dimensions mismatch");
    Tensor e = project_omega(p, cp_sym_eval(v) - p.v_obs);
    const double nrm = fro_norm(e);
    return nrm * nrm;
}

Eigen::MatrixXd completion_gradient(const CompletionProblem& p, const Eigen::MatrixXd& v) {
    if (v.rows() != p.n || v.cols() != p.rank) throw ShapeError("factor dimensions mismatch");
    Tensor e = project_omega(p, cp_sym_eval(v) - p.v_obs);
    Eigen::MatrixXd grad(p.n, p.rank);
    for (int k = 0; k < p.rank; ++k) {
        const Eigen::VectorXd col = v.col(k);
        // contract the residual against the column on each pair of modes
        Tensor t23 = mode_n_vector_product(mode_n_vector_product(e, col, 2), col, 1);
        Tensor t13 = mode_n_vector_product(mode_n_vector_product(e, col, 2), col, 0);
        Tensor t12 = mode_n_vector_product(mode_n_vector_product(e, col, 1), col, 0);
        for (int a = 0; a < p.n; ++a) {
            grad(a, k) = 2.0 * (t23.data()[static_cast<std::size_t>(a)] +
                                t13.data()[static_cast<std::size_t>(a)] +
                                t12.data()[static_cast<std::size_t>(a)]);
        }
    }
    return grad;
}

Eigen::MatrixXd completion_gd_step(const CompletionProblem& p, const Eigen::MatrixXd& v) {
    return v - p.eta * completion_gradient(p, v);
}

}  // namespace tgx
