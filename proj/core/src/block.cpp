#include "tgx/block.hpp"

#include <cmath>

namespace tgx {

BlockTensor::BlockTensor(std::vector<Tensor> slices) : slices_(std::move(slices)) {
    if (slices_.empty()) throw ShapeError("block must contain at least one slice");
    for (const Tensor& t : slices_) {
        if (t.shape() != slices_.front().shape()) {
            throw ShapeError("block slices must share one shape");
        }
    }
}

Tensor block_apply(const BlockTensor& b, const Eigen::VectorXd& x) {
    if (x.size() != b.width()) throw ShapeError("coefficient length must match block width");
    Tensor out(b.column_shape());
    auto dst = out.data_mut();
    for (int j = 0; j < b.width(); ++j) {
        const double c = x(j);
        if (c == 0.0) continue;
        auto src = b.slice(j).data();
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += c * src[i];
    }
    return out;
}

Eigen::MatrixXd block_gram(const BlockTensor& b) {
    const int m = b.width();
    Eigen::MatrixXd g(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            g(i, j) = inner(b.slice(i), b.slice(j));
            g(j, i) = g(i, j);
        }
    }
    return g;
}

Eigen::VectorXd block_dot_rhs(const BlockTensor& b, const Tensor& c) {
    if (c.shape() != b.column_shape()) throw ShapeError("rhs shape must match block slices");
    Eigen::VectorXd v(b.width());
    for (int j = 0; j < b.width(); ++j) v(j) = inner(b.slice(j), c);
    return v;
}

GlobalQR global_qr(const BlockTensor& a, double rank_tol) {
    const int m = a.width();
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(m, m);
    std::vector<Tensor> q;
    q.reserve(static_cast<std::size_t>(m));

    for (int i = 0; i < m; ++i) {
        Tensor u = a.slice(i);
        const double in_norm = fro_norm(u);
        double norm_before = in_norm;
        for (int pass = 0; pass < 2; ++pass) {
            for (int j = 0; j < i; ++j) {
                const double proj = inner(q[static_cast<std::size_t>(j)], u);
                r(j, i) += proj;
                u -= proj * q[static_cast<std::size_t>(j)];
            }
            const double norm_after = fro_norm(u);
            // "twice is enough": reorthogonalize once on a sharp norm drop
            if (pass == 0 && norm_after > norm_before / std::sqrt(2.0)) break;
            norm_before = norm_after;
        }
        const double rii = fro_norm(u);
        if (rii <= rank_tol * in_norm || rii == 0.0) {
            throw RankDeficientError("block is numerically rank deficient at column " +
                                         std::to_string(i),
                                     i);
        }
        r(i, i) = rii;
        u *= 1.0 / rii;
        q.push_back(std::move(u));
    }
    return GlobalQR{BlockTensor(std::move(q)), std::move(r)};
}

Eigen::VectorXd lsq_normal_eq(const BlockTensor& a, const Tensor& c, int sign, double rank_tol) {
    GlobalQR qr = global_qr(a, rank_tol);
    Eigen::VectorXd b = static_cast<double>(sign) * block_dot_rhs(a, c);
    for (int i = 0; i < qr.r.rows(); ++i) {
        if (qr.r(i, i) == 0.0) throw SingularError("singular triangular factor");
    }
    Eigen::VectorXd y = qr.r.transpose().triangularView<Eigen::Lower>().solve(b);
    return qr.r.triangularView<Eigen::Upper>().solve(y);
}

}  // namespace tgx
