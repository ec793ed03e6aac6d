#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tgx/error.hpp"

namespace tgx {

using Index = std::int64_t;

/// Ordered list of mode extents I_1,...,I_N.
class Shape {
public:
    Shape() = default;
    Shape(std::initializer_list<Index> dims) : Shape(std::vector<Index>(dims)) {}
    explicit Shape(std::vector<Index> dims);

    int order() const { return static_cast<int>(dims_.size()); }
    Index extent(int k) const { return dims_[static_cast<std::size_t>(k)]; }
    Index size() const;  // product of extents; 1 for the empty shape
    const std::vector<Index>& dims() const { return dims_; }

    Shape prefix(int n) const;  // first n modes
    Shape suffix(int n) const;  // last n modes
    Shape cat(const Shape& other) const;

    bool operator==(const Shape& other) const { return dims_ == other.dims_; }
    bool operator!=(const Shape& other) const { return !(*this == other); }

    std::string str() const;

private:
    std::vector<Index> dims_;
};

/// Dense real tensor, row-major storage (last index varies fastest).
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(Shape shape);  // zero tensor
    Tensor(Shape shape, std::vector<double> data);

    const Shape& shape() const { return shape_; }
    int order() const { return shape_.order(); }
    Index size() const { return shape_.size(); }
    std::span<const double> data() const { return data_; }
    std::span<double> data_mut() { return data_; }

    double at(std::span<const Index> idx) const;
    double at(std::initializer_list<Index> idx) const {
        return at(std::span<const Index>(idx.begin(), idx.size()));
    }
    double& at_mut(std::span<const Index> idx);
    double& at_mut(std::initializer_list<Index> idx) {
        return at_mut(std::span<const Index>(idx.begin(), idx.size()));
    }

    Tensor& operator+=(const Tensor& other);
    Tensor& operator-=(const Tensor& other);
    Tensor& operator*=(double c);

private:
    Shape shape_;
    std::vector<double> data_;
};

Tensor operator+(Tensor a, const Tensor& b);
Tensor operator-(Tensor a, const Tensor& b);
Tensor operator*(double c, Tensor a);

/// Square (or rectangular) tensor acting as a linear operator under the
/// Einstein product: data has shape row_shape x col_shape.
struct EinsteinOp {
    Shape row_shape;
    Shape col_shape;
    Tensor data;

    EinsteinOp() = default;
    EinsteinOp(Shape rows, Shape cols, Tensor values);

    bool square() const { return row_shape == col_shape; }
    static EinsteinOp identity(const Shape& modes);
};

/// Contraction of the trailing `contracted` modes of a with the leading
/// `contracted` modes of b.
Tensor einstein_product(const Tensor& a, const Tensor& b, int contracted);

/// op *_N x where N = op.col_shape.order().
Tensor apply(const EinsteinOp& op, const Tensor& x);

/// Composition of operators (op1 *_N op2).
EinsteinOp compose(const EinsteinOp& a, const EinsteinOp& b);

/// Swap the leading `split` modes with the trailing ones.
Tensor transpose(const Tensor& a, int split);
EinsteinOp transpose(const EinsteinOp& op);

double trace(const EinsteinOp& op);
double inner(const Tensor& a, const Tensor& b);
double fro_norm(const Tensor& a);

/// Mode-n product with a matrix (rows of m index the new extent of mode n).
Tensor mode_n_matrix_product(const Tensor& a, const Eigen::MatrixXd& m, int mode);

/// Mode-n contraction with a vector; the mode is eliminated.
Tensor mode_n_vector_product(const Tensor& a, const Eigen::VectorXd& w, int mode);

/// The flattening isomorphism: leading `split` modes become matrix rows,
/// the rest become columns. split == order() yields a column vector.
Eigen::MatrixXd flatten(const Tensor& a, int split);
Eigen::VectorXd flatten_vec(const Tensor& a);
Eigen::MatrixXd flatten(const EinsteinOp& op);

Tensor unflatten(const Eigen::MatrixXd& m, const Shape& row_shape, const Shape& col_shape);
Tensor unflatten_vec(const Eigen::VectorXd& v, const Shape& shape);
EinsteinOp unflatten_op(const Eigen::MatrixXd& m, const Shape& modes);

struct SpectralRadiusResult {
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Power iteration on the flattened action, started from a seeded unit
/// vector. Tracks the two-step growth ratio so conjugate dominant pairs
/// still yield |lambda|.
SpectralRadiusResult spectral_radius(const EinsteinOp& op, double tol = 1e-8,
                                     int max_iters = 5000);

/// Dense-factorization solve of op *_N x = rhs through the flattened matrix.
/// Intended as a correctness oracle, not a scalable solver.
Tensor solve_flattened_oracle(const EinsteinOp& op, const Tensor& rhs);

}  // namespace tgx
