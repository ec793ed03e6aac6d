#include "tgx/tensor.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <sstream>

namespace tgx {

namespace {

using RowMajorMap = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                    Eigen::RowMajor>>;
using RowMajorMutMap =
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

void check_finite(const std::vector<double>& data) {
    for (double v : data) {
        if (!std::isfinite(v)) throw Error("tensor entry is not finite");
    }
}

}  // namespace

Shape::Shape(std::vector<Index> dims) : dims_(std::move(dims)) {
    for (Index d : dims_) {
        if (d < 1) throw ShapeError("mode extent must be >= 1");
    }
}

Index Shape::size() const {
    Index n = 1;
    for (Index d : dims_) n *= d;
    return n;
}

Shape Shape::prefix(int n) const {
    return Shape(std::vector<Index>(dims_.begin(), dims_.begin() + n));
}

Shape Shape::suffix(int n) const {
    return Shape(std::vector<Index>(dims_.end() - n, dims_.end()));
}

Shape Shape::cat(const Shape& other) const {
    std::vector<Index> d = dims_;
    d.insert(d.end(), other.dims_.begin(), other.dims_.end());
    return Shape(std::move(d));
}

std::string Shape::str() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        if (i) os << ',';
        os << dims_[i];
    }
    os << ')';
    return os.str();
}

Tensor::Tensor(Shape shape)
    : shape_(std::move(shape)), data_(static_cast<std::size_t>(shape_.size()), 0.0) {}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    if (static_cast<Index>(data_.size()) != shape_.size()) {
        throw ShapeError("data length " + std::to_string(data_.size()) +
                         " does not match shape " + shape_.str());
    }
    check_finite(data_);
}

namespace {
std::size_t linear_index(const Shape& shape, std::span<const Index> idx) {
    if (static_cast<int>(idx.size()) != shape.order()) throw ShapeError("index arity mismatch");
    std::size_t p = 0;
    for (int k = 0; k < shape.order(); ++k) {
        if (idx[static_cast<std::size_t>(k)] < 0 || idx[static_cast<std::size_t>(k)] >= shape.extent(k)) {
            throw ShapeError("index out of range");
        }
        p = p * static_cast<std::size_t>(shape.extent(k)) +
            static_cast<std::size_t>(idx[static_cast<std::size_t>(k)]);
    }
    return p;
}
}  // namespace

double Tensor::at(std::span<const Index> idx) const { return data_[linear_index(shape_, idx)]; }
double& Tensor::at_mut(std::span<const Index> idx) { return data_[linear_index(shape_, idx)]; }

Tensor& Tensor::operator+=(const Tensor& other) {
    if (shape_ != other.shape_) throw ShapeError("shape mismatch in tensor sum");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

Tensor& Tensor::operator-=(const Tensor& other) {
    if (shape_ != other.shape_) throw ShapeError("shape mismatch in tensor difference");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

Tensor& Tensor::operator*=(double c) {
    for (double& v : data_) v *= c;
    return *this;
}

Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
Tensor operator*(double c, Tensor a) { return a *= c; }

EinsteinOp::EinsteinOp(Shape rows, Shape cols, Tensor values)
    : row_shape(std::move(rows)), col_shape(std::move(cols)), data(std::move(values)) {
    if (data.shape() != row_shape.cat(col_shape)) {
        throw ShapeError("operator data shape does not match row_shape x col_shape");
    }
}

EinsteinOp EinsteinOp::identity(const Shape& modes) {
    const Index n = modes.size();
    std::vector<double> data(static_cast<std::size_t>(n * n), 0.0);
    for (Index i = 0; i < n; ++i) data[static_cast<std::size_t>(i * n + i)] = 1.0;
    return EinsteinOp(modes, modes, unflatten(RowMajorMap(data.data(), n, n), modes, modes));
}

Tensor einstein_product(const Tensor& a, const Tensor& b, int contracted) {
    if (contracted < 1 || contracted > a.order() || contracted > b.order()) {
        throw ShapeError("invalid contraction mode count");
    }
    const Shape shared_a = a.shape().suffix(contracted);
    const Shape shared_b = b.shape().prefix(contracted);
    if (shared_a != shared_b) {
        throw ShapeError("contracted modes mismatch: " + shared_a.str() + " vs " + shared_b.str());
    }
    const Shape lead = a.shape().prefix(a.order() - contracted);
    const Shape trail = b.shape().suffix(b.order() - contracted);
    const Index rows = lead.size();
    const Index mid = shared_a.size();
    const Index cols = trail.size();

    // Row-major storage makes the flattened views reinterpretations.
    RowMajorMap ma(a.data().data(), rows, mid);
    RowMajorMap mb(b.data().data(), mid, cols);
    Tensor out(lead.cat(trail));
    RowMajorMutMap mo(out.data_mut().data(), rows, cols);
    mo.noalias() = ma * mb;
    return out;
}

Tensor apply(const EinsteinOp& op, const Tensor& x) {
    if (x.shape() != op.col_shape) {
        throw ShapeError("operand shape " + x.shape().str() + " does not match operator columns " +
                         op.col_shape.str());
    }
    return einstein_product(op.data, x, op.col_shape.order());
}

EinsteinOp compose(const EinsteinOp& a, const EinsteinOp& b) {
    if (a.col_shape != b.row_shape) throw ShapeError("operator composition shape mismatch");
    Tensor prod = einstein_product(a.data, b.data, a.col_shape.order());
    return EinsteinOp(a.row_shape, b.col_shape, std::move(prod));
}

Tensor transpose(const Tensor& a, int split) {
    if (split <= 0 || split >= a.order()) throw ShapeError("invalid transpose split");
    const Shape lead = a.shape().prefix(split);
    const Shape trail = a.shape().suffix(a.order() - split);
    RowMajorMap m(a.data().data(), lead.size(), trail.size());
    Tensor out(trail.cat(lead));
    RowMajorMutMap mo(out.data_mut().data(), trail.size(), lead.size());
    mo = m.transpose();
    return out;
}

EinsteinOp transpose(const EinsteinOp& op) {
    Tensor t = transpose(op.data, op.row_shape.order());
    return EinsteinOp(op.col_shape, op.row_shape, std::move(t));
}

double trace(const EinsteinOp& op) {
    if (!op.square()) throw ShapeError("trace requires a square operator");
    const Index n = op.row_shape.size();
    RowMajorMap m(op.data.data().data(), n, n);
    return m.trace();
}

double inner(const Tensor& a, const Tensor& b) {
    if (a.shape() != b.shape()) throw ShapeError("inner product shape mismatch");
    double s = 0.0;
    auto da = a.data();
    auto db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) s += da[i] * db[i];
    return s;
}

double fro_norm(const Tensor& a) { return std::sqrt(inner(a, a)); }

Tensor mode_n_matrix_product(const Tensor& a, const Eigen::MatrixXd& m, int mode) {
    if (mode < 0 || mode >= a.order()) throw ShapeError("mode index out of range");
    if (m.cols() != a.shape().extent(mode)) throw ShapeError("matrix columns must match mode extent");

    std::vector<Index> out_dims = a.shape().dims();
    out_dims[static_cast<std::size_t>(mode)] = m.rows();
    Tensor out{Shape(out_dims)};

    const Index outer = a.shape().prefix(mode).size();
    const Index in_extent = a.shape().extent(mode);
    const Index out_extent = m.rows();
    const Index inner_sz = a.shape().suffix(a.order() - mode - 1).size();

    auto src = a.data();
    auto dst = out.data_mut();
    for (Index o = 0; o < outer; ++o) {
        for (Index jn = 0; jn < out_extent; ++jn) {
            for (Index in = 0; in < in_extent; ++in) {
                const double w = m(jn, in);
                if (w == 0.0) continue;
                const double* s = src.data() + (o * in_extent + in) * inner_sz;
                double* d = dst.data() + (o * out_extent + jn) * inner_sz;
                for (Index q = 0; q < inner_sz; ++q) d[q] += w * s[q];
            }
        }
    }
    return out;
}

Tensor mode_n_vector_product(const Tensor& a, const Eigen::VectorXd& w, int mode) {
    if (mode < 0 || mode >= a.order()) throw ShapeError("mode index out of range");
    if (w.size() != a.shape().extent(mode)) throw ShapeError("vector length must match mode extent");

    std::vector<Index> out_dims = a.shape().dims();
    out_dims.erase(out_dims.begin() + mode);
    Tensor out{Shape(out_dims)};

    const Index outer = a.shape().prefix(mode).size();
    const Index extent = a.shape().extent(mode);
    const Index inner_sz = a.shape().suffix(a.order() - mode - 1).size();

    auto src = a.data();
    auto dst = out.data_mut();
    for (Index o = 0; o < outer; ++o) {
        for (Index in = 0; in < extent; ++in) {
            const double c = w(in);
            if (c == 0.0) continue;
            const double* s = src.data() + (o * extent + in) * inner_sz;
            double* d = dst.data() + o * inner_sz;
            for (Index q = 0; q < inner_sz; ++q) d[q] += c * s[q];
        }
    }
    return out;
}

Eigen::MatrixXd flatten(const Tensor& a, int split) {
    if (split < 0 || split > a.order()) throw ShapeError("invalid flatten split");
    const Index rows = a.shape().prefix(split).size();
    const Index cols = a.shape().suffix(a.order() - split).size();
    return RowMajorMap(a.data().data(), rows, cols);
}

Eigen::VectorXd flatten_vec(const Tensor& a) {
    return Eigen::Map<const Eigen::VectorXd>(a.data().data(), a.size());
}

Eigen::MatrixXd flatten(const EinsteinOp& op) {
    return flatten(op.data, op.row_shape.order());
}

Tensor unflatten(const Eigen::MatrixXd& m, const Shape& row_shape, const Shape& col_shape) {
    if (m.rows() != row_shape.size() || m.cols() != col_shape.size()) {
        throw ShapeError("matrix dimensions do not match target shapes");
    }
    Tensor out(row_shape.cat(col_shape));
    RowMajorMutMap mo(out.data_mut().data(), m.rows(), m.cols());
    mo = m;
    return out;
}

Tensor unflatten_vec(const Eigen::VectorXd& v, const Shape& shape) {
    if (v.size() != shape.size()) throw ShapeError("vector length does not match target shape");
    std::vector<double> data(v.data(), v.data() + v.size());
    return Tensor(shape, std::move(data));
}

EinsteinOp unflatten_op(const Eigen::MatrixXd& m, const Shape& modes) {
    return EinsteinOp(modes, modes, unflatten(m, modes, modes));
}

SpectralRadiusResult spectral_radius(const EinsteinOp& op, double tol, int max_iters) {
    if (!op.square()) throw ShapeError("spectral radius requires a square operator");
    const Index n = op.row_shape.size();
    RowMajorMap m(op.data.data().data(), n, n);

    // Fixed seed keeps repeated estimates identical.
    std::mt19937_64 rng(0x7a3f19c5u);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd v(n);
    for (Index i = 0; i < n; ++i) v(i) = gauss(rng);
    v.normalize();

    SpectralRadiusResult res;
    double prev = -1.0;
    for (int it = 0; it < max_iters; ++it) {
        const Eigen::VectorXd w1 = m * v;
        res.iterations = it + 1;
        if (w1.norm() == 0.0) {
            res.value = 0.0;
            res.converged = true;
            return res;
        }
        const Eigen::VectorXd w2 = m * w1;

        // Two-step growth: fit w2 ~ alpha*w1 + beta*v and take the dominant
        // root of x^2 - alpha x - beta, so a conjugate dominant pair still
        // yields |lambda|.
        double g;
        const Eigen::VectorXd w1_perp = w1 - v.dot(w1) * v;
        if (w1_perp.norm() <= 1e-14 * w1.norm()) {
            g = w1.norm();  // v is (numerically) an eigenvector
        } else {
            Eigen::Matrix2d a;
            a << w1.squaredNorm(), w1.dot(v), w1.dot(v), 1.0;
            Eigen::Vector2d rhs(w1.dot(w2), v.dot(w2));
            const Eigen::Vector2d coef = a.ldlt().solve(rhs);
            const std::complex<double> disc =
                std::sqrt(std::complex<double>(coef(0) * coef(0) + 4.0 * coef(1), 0.0));
            g = std::max(std::abs((coef(0) + disc) / 2.0), std::abs((coef(0) - disc) / 2.0));
        }
        res.value = g;
        if (prev >= 0.0 && std::abs(g - prev) <= tol * std::max(1.0, g)) {
            res.converged = true;
            return res;
        }
        prev = g;
        v = w2.norm() > 0.0 ? Eigen::VectorXd(w2 / w2.norm()) : Eigen::VectorXd(w1 / w1.norm());
    }
    return res;
}

Tensor solve_flattened_oracle(const EinsteinOp& op, const Tensor& rhs) {
    if (!op.square()) throw ShapeError("flattened solve requires a square operator");
    if (rhs.shape() != op.col_shape) throw ShapeError("rhs shape mismatch");
    const Eigen::MatrixXd m = flatten(op);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) throw SingularError("operator is singular to working tolerance");
    Eigen::VectorXd x = lu.solve(flatten_vec(rhs));
    return unflatten_vec(x, op.col_shape);
}

}  // namespace tgx
