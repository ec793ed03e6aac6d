#include "tgx/arnoldi.hpp"

#include <cmath>

namespace tgx {

ArnoldiData arnoldi_build(const std::vector<Tensor>& d, double breakdown_tol) {
    if (d.size() < 2) throw Error("need at least two differences");
    ArnoldiData out;
    out.beta = fro_norm(d[0]);
    if (out.beta == 0.0) throw RankDeficientError("zero first difference", 0);

    const int width = static_cast<int>(d.size()) - 1;
    out.h_hat = Eigen::MatrixXd::Zero(width + 1, width);
    out.v.push_back((1.0 / out.beta) * d[0]);

    // coeff.col(j) expresses slice j in the difference basis; shifting those
    // indices by one applies the fixed-point map without forming it.
    Eigen::MatrixXd coeff = Eigen::MatrixXd::Zero(width + 1, width + 1);
    coeff(0, 0) = 1.0 / out.beta;

    for (int k = 1; k <= width; ++k) {
        Tensor y(d[0].shape());
        Eigen::VectorXd cy = Eigen::VectorXd::Zero(width + 1);
        for (int i = 0; i < k; ++i) {
            const double ci = coeff(i, k - 1);
            if (ci == 0.0) continue;
            y += ci * d[static_cast<std::size_t>(i + 1)];
            cy(i + 1) += ci;
        }
        double norm_before = fro_norm(y);
        for (int pass = 0; pass < 2; ++pass) {
            for (int j = 0; j < k; ++j) {
                const double h = inner(out.v[static_cast<std::size_t>(j)], y);
                out.h_hat(j, k - 1) += h;
                y -= h * out.v[static_cast<std::size_t>(j)];
                cy -= h * coeff.col(j);
            }
            const double norm_after = fro_norm(y);
            if (pass == 0 && norm_after > norm_before / std::sqrt(2.0)) break;
            norm_before = norm_after;
        }
        const double sub = fro_norm(y);
        if (sub <= breakdown_tol * out.beta) {
            // D_{n+k} already lies in the current span: keep the column,
            // zero subdiagonal, and stop.
            out.k = k;
            out.happy_breakdown = true;
            out.h_hat.conservativeResize(k + 1, k);
            out.h_hat.row(k).setZero();
            return out;
        }
        out.h_hat(k, k - 1) = sub;
        out.v.push_back((1.0 / sub) * y);
        coeff.col(k) = cy / sub;
    }
    out.k = width;
    return out;
}

Eigen::VectorXd mpe_from_hessenberg(const ArnoldiData& data) {
    const int k = data.k;
    Eigen::MatrixXd h = data.h_hat.topRows(k);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
    rhs(0) = data.beta;
    const double scale = std::max(h.cwiseAbs().maxCoeff(), 1.0);

    // Hessenberg elimination: one subdiagonal to annihilate per column.
    for (int j = 0; j < k - 1; ++j) {
        if (std::abs(h(j + 1, j)) > std::abs(h(j, j))) {
            h.row(j).swap(h.row(j + 1));
            std::swap(rhs(j), rhs(j + 1));
        }
        if (h(j, j) == 0.0) continue;
        const double f = h(j + 1, j) / h(j, j);
        h.row(j + 1).tail(k - j) -= f * h.row(j).tail(k - j);
        rhs(j + 1) -= f * rhs(j);
    }
    Eigen::VectorXd mu(k);
    for (int i = k - 1; i >= 0; --i) {
        double s = rhs(i);
        for (int j = i + 1; j < k; ++j) s -= h(i, j) * mu(j);
        if (std::abs(h(i, i)) <= 1e-14 * scale) {
            throw SingularError("Hessenberg matrix singular; MPE coefficients undefined");
        }
        mu(i) = s / h(i, i);
    }
    return mu;
}

Eigen::VectorXd rre_from_hessenberg(const ArnoldiData& data) {
    const int k = data.k;
    Eigen::MatrixXd h = data.h_hat;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
    rhs(0) = data.beta;
    const double scale = std::max(h.cwiseAbs().maxCoeff(), 1.0);

    for (int j = 0; j < k; ++j) {
        const double a = h(j, j);
        const double b = h(j + 1, j);
        const double r = std::hypot(a, b);
        if (r == 0.0) continue;
        const double c = a / r;
        const double s = b / r;
        for (int col = j; col < k; ++col) {
            const double t1 = h(j, col);
            const double t2 = h(j + 1, col);
            h(j, col) = c * t1 + s * t2;
            h(j + 1, col) = -s * t1 + c * t2;
        }
        const double t1 = rhs(j);
        const double t2 = rhs(j + 1);
        rhs(j) = c * t1 + s * t2;
        rhs(j + 1) = -s * t1 + c * t2;
    }
    Eigen::VectorXd mu(k);
    for (int i = k - 1; i >= 0; --i) {
        double s = rhs(i);
        for (int j = i + 1; j < k; ++j) s -= h(i, j) * mu(j);
        if (std::abs(h(i, i)) <= 1e-14 * scale) {
            throw RankDeficientError("Hessenberg system rank deficient", i);
        }
        mu(i) = s / h(i, i);
    }
    return mu;
}

ExtrapResult extrapolate_arnoldi(const Window& w, Method method) {
    std::vector<Tensor> d = differences(w);
    ArnoldiData data = arnoldi_build(d);
    const int k = data.k;

    // The extrapolation solves act on the fixed-point residual map, whose
    // Hessenberg representation is the identity-shifted h_hat.
    ArnoldiData sys = data;
    sys.h_hat = -data.h_hat;
    for (int j = 0; j < k; ++j) sys.h_hat(j, j) += 1.0;

    Eigen::VectorXd mu_v;
    switch (method) {
        case Method::Mpe: mu_v = mpe_from_hessenberg(sys); break;
        case Method::Rre: mu_v = rre_from_hessenberg(sys); break;
        default: throw Error("extrapolate_arnoldi takes Mpe or Rre");
    }

    ExtrapResult res;
    res.t = w.terms[0];
    for (int j = 0; j < k; ++j) {
        res.t += mu_v(j) * data.v[static_cast<std::size_t>(j)];
    }

    // Upper-triangular change of basis between the first k differences and
    // the orthonormal slices, recovered by projection: s(i, j) = <V_i, D_j>.
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(k, k);
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i <= j; ++i) {
            s(i, j) = inner(data.v[static_cast<std::size_t>(i)],
                            d[static_cast<std::size_t>(j)]);
        }
    }
    Eigen::VectorXd mu_d = s.triangularView<Eigen::Upper>().solve(mu_v);

    res.delta = mu_to_delta(mu_d);
    res.mu = std::move(mu_d);
    if (method == Method::Mpe && res.delta(res.delta.size() - 1) != 0.0) {
        res.theta = res.delta / res.delta(res.delta.size() - 1);
    }
    std::vector<Tensor> d_used(d.begin(), d.begin() + k + 1);
    res.gen_residual_norm = fro_norm(block_apply(BlockTensor(std::move(d_used)), res.delta));
    return res;
}

}  // namespace tgx
