#include <doctest.h>

#include "oracles.hpp"
#include "tgx/tensor.hpp"

using namespace tgx;

TEST_CASE("make_tensor row-major layout and validation") {
    Tensor t(Shape{2, 2}, {1, 2, 3, 4});
    CHECK(t.at({0, 1}) == 2.0);
    CHECK(t.at({1, 0}) == 3.0);

    Tensor z(Shape{2}, {0, 0});
    CHECK(fro_norm(z) == 0.0);

    CHECK_THROWS_AS(Tensor(Shape{2, 2}, {1, 2, 3}), ShapeError);
    CHECK_THROWS_AS(Tensor(Shape{2}, {1.0, std::nan("")}), Error);
    CHECK_THROWS_AS(Shape({2, 0}), ShapeError);
}

TEST_CASE("identity operator") {
    EinsteinOp id2 = EinsteinOp::identity(Shape{2});
    CHECK(id2.data.at({0, 0}) == 1.0);
    CHECK(id2.data.at({0, 1}) == 0.0);

    EinsteinOp id22 = EinsteinOp::identity(Shape{2, 2});
    CHECK(id22.data.at({0, 1, 0, 1}) == 1.0);
    CHECK(id22.data.at({0, 1, 1, 0}) == 0.0);

    Tensor x = oracle::random_tensor(Shape{2, 2}, 3);
    Tensor y = apply(id22, x);
    for (std::size_t i = 0; i < x.data().size(); ++i) CHECK(y.data()[i] == x.data()[i]);
}

TEST_CASE("einstein product basics") {
    Tensor a(Shape{2, 2}, {1, 2, 3, 4});
    Tensor b(Shape{2}, {1, 1});
    Tensor c = einstein_product(a, b, 1);
    CHECK(c.shape() == Shape{2});
    CHECK(c.at({0}) == 3.0);
    CHECK(c.at({1}) == 7.0);

    CHECK_THROWS_AS(einstein_product(a, Tensor(Shape{3}), 1), ShapeError);
}

TEST_CASE("einstein product associativity matches flattened algebra") {
    Tensor a = oracle::random_tensor(Shape{2, 3, 2, 2}, 11);  // (2,3) x (2,2)
    Tensor b = oracle::random_tensor(Shape{2, 2, 3, 2}, 12);  // (2,2) x (3,2)
    Tensor c = oracle::random_tensor(Shape{3, 2, 4}, 13);     // (3,2) x (4)

    Tensor left = einstein_product(einstein_product(a, b, 2), c, 2);
    Tensor right = einstein_product(a, einstein_product(b, c, 2), 2);
    CHECK(fro_norm(left - right) <= 1e-12 * fro_norm(left));

    Eigen::MatrixXd fa = flatten(a, 2);
    Eigen::MatrixXd fb = flatten(b, 2);
    Eigen::MatrixXd fc = flatten(c, 2);
    Eigen::MatrixXd ref = fa * fb * fc;
    CHECK((flatten(left, 2) - ref).norm() <= 1e-12 * ref.norm());
}

TEST_CASE("transpose") {
    Tensor a(Shape{2, 3}, {1, 2, 3, 4, 5, 6});
    Tensor at = transpose(a, 1);
    CHECK(at.shape() == Shape{3, 2});
    CHECK(at.at({0, 1}) == 4.0);
    CHECK(at.at({2, 0}) == 3.0);

    Tensor a4 = oracle::random_tensor(Shape{2, 3, 4, 2}, 5);
    Tensor back = transpose(transpose(a4, 2), 2);
    CHECK(fro_norm(back - a4) == 0.0);

    // flatten of the transpose is the transposed flatten
    Eigen::MatrixXd f = flatten(a4, 2);
    Eigen::MatrixXd ft = flatten(transpose(a4, 2), 2);
    CHECK((ft - f.transpose()).norm() == 0.0);

    CHECK_THROWS_AS(transpose(a, 0), ShapeError);
    CHECK_THROWS_AS(transpose(a, 2), ShapeError);
}

TEST_CASE("trace") {
    CHECK(trace(EinsteinOp::identity(Shape{2, 3})) == doctest::Approx(6.0));
    EinsteinOp a(Shape{2}, Shape{2}, Tensor(Shape{2, 2}, {1, 2, 3, 4}));
    CHECK(trace(a) == doctest::Approx(5.0));

    Tensor rect(Shape{2, 3}, {1, 2, 3, 4, 5, 6});
    CHECK_THROWS_AS(trace(EinsteinOp(Shape{2}, Shape{3}, rect)), ShapeError);

    EinsteinOp m(Shape{2, 2}, Shape{2, 2}, oracle::random_tensor(Shape{2, 2, 2, 2}, 9));
    CHECK(trace(m) == doctest::Approx(flatten(m).trace()));
}

TEST_CASE("inner product and norm") {
    Tensor a(Shape{2, 2}, {1, 2, 3, 4});
    CHECK(inner(a, a) == doctest::Approx(30.0));
    CHECK(fro_norm(a) == doctest::Approx(std::sqrt(30.0)));
    CHECK(inner(a, Tensor(Shape{2, 2})) == 0.0);

    Tensor b = oracle::random_tensor(Shape{2, 2}, 17);
    CHECK(inner(a, b) == doctest::Approx(inner(b, a)));
    CHECK(fro_norm(-2.5 * a) == doctest::Approx(2.5 * fro_norm(a)));
    CHECK(fro_norm(a + b) <= fro_norm(a) + fro_norm(b) + 1e-14);

    // <A,B> = trace(A^T * B) for matching square splits
    EinsteinOp prod(Shape{2}, Shape{2}, einstein_product(transpose(a, 1), b, 1));
    CHECK(inner(a, b) == doctest::Approx(trace(prod)));
    CHECK_THROWS_AS(inner(a, Tensor(Shape{3})), ShapeError);
}

TEST_CASE("mode-n matrix product") {
    Tensor a = oracle::random_tensor(Shape{2, 3, 4}, 21);
    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(3, 3);
    Tensor same = mode_n_matrix_product(a, id, 1);
    CHECK(fro_norm(same - a) == 0.0);

    // order-1 tensor reduces to matvec
    Tensor v(Shape{3}, {1, 2, 3});
    Eigen::MatrixXd m(2, 3);
    m << 1, 0, 1, 0, 1, 0;
    Tensor mv = mode_n_matrix_product(v, m, 0);
    CHECK(mv.at({0}) == doctest::Approx(4.0));
    CHECK(mv.at({1}) == doctest::Approx(2.0));

    // products over distinct modes commute
    Eigen::MatrixXd m1 = Eigen::MatrixXd::Random(5, 2);
    Eigen::MatrixXd m3 = Eigen::MatrixXd::Random(2, 4);
    Tensor ab = mode_n_matrix_product(mode_n_matrix_product(a, m1, 0), m3, 2);
    Tensor ba = mode_n_matrix_product(mode_n_matrix_product(a, m3, 2), m1, 0);
    CHECK(fro_norm(ab - ba) <= 1e-12 * fro_norm(ab));

    CHECK_THROWS_AS(mode_n_matrix_product(a, m1, 1), ShapeError);
}

TEST_CASE("mode-n vector product") {
    Tensor a(Shape{2, 2}, {1, 2, 3, 4});
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(2);
    Tensor rows = mode_n_vector_product(a, ones, 1);
    CHECK(rows.at({0}) == doctest::Approx(3.0));
    CHECK(rows.at({1}) == doctest::Approx(7.0));

    Eigen::VectorXd e1 = Eigen::VectorXd::Unit(2, 1);
    Tensor slice = mode_n_vector_product(a, e1, 0);
    CHECK(slice.at({0}) == doctest::Approx(3.0));
    CHECK(slice.at({1}) == doctest::Approx(4.0));

    Tensor zero = mode_n_vector_product(a, Eigen::VectorXd::Zero(2), 0);
    CHECK(fro_norm(zero) == 0.0);
}

TEST_CASE("flatten index formula") {
    // shape (2,2,2,2), split 2: 1-based entry (2,1,1,2) -> (3,2)
    Tensor a(Shape{2, 2, 2, 2});
    a.at_mut({1, 0, 0, 1}) = 42.0;
    Eigen::MatrixXd f = flatten(a, 2);
    CHECK(f(2, 1) == 42.0);

    Tensor m2(Shape{2, 3}, {1, 2, 3, 4, 5, 6});
    Eigen::MatrixXd f2 = flatten(m2, 1);
    CHECK(f2(1, 2) == 6.0);

    // split = order gives a column vector
    CHECK(flatten(m2, 2).cols() == 1);
    CHECK_THROWS_AS(flatten(m2, 3), ShapeError);
}

TEST_CASE("flatten is a product homomorphism") {
    for (std::uint64_t s = 0; s < 5; ++s) {
        Tensor a = oracle::random_tensor(Shape{2, 3, 2, 2}, 100 + s);
        Tensor b = oracle::random_tensor(Shape{2, 2, 3}, 200 + s);
        Eigen::MatrixXd lhs = flatten(einstein_product(a, b, 2), 2);
        Eigen::MatrixXd rhs = flatten(a, 2) * flatten(b, 2);
        CHECK((lhs - rhs).norm() <= 1e-12 * rhs.norm());
    }
}

TEST_CASE("unflatten round trip") {
    Tensor a = oracle::random_tensor(Shape{2, 3, 4}, 31);
    Tensor back = unflatten(flatten(a, 1), Shape{2}, Shape{3, 4});
    CHECK(back.shape() == a.shape());
    for (std::size_t i = 0; i < a.data().size(); ++i) CHECK(back.data()[i] == a.data()[i]);

    Eigen::MatrixXd one(1, 1);
    one << 7.0;
    Tensor scalar = unflatten(one, Shape{1}, Shape{1});
    CHECK(scalar.at({0, 0}) == 7.0);

    EinsteinOp id = EinsteinOp::identity(Shape{2, 2});
    Tensor id_back = unflatten(flatten(id), Shape{2, 2}, Shape{2, 2});
    CHECK(fro_norm(id_back - id.data) == 0.0);

    CHECK_THROWS_AS(unflatten(one, Shape{2}, Shape{1}), ShapeError);
}

TEST_CASE("spectral radius") {
    EinsteinOp id = EinsteinOp::identity(Shape{2, 2});
    EinsteinOp half(Shape{2, 2}, Shape{2, 2}, 0.5 * id.data);
    auto res = spectral_radius(half);
    CHECK(res.converged);
    CHECK(res.value == doctest::Approx(0.5).epsilon(1e-8));

    Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(4, 4);
    diag(0, 0) = 0.9;
    diag(1, 1) = 0.1;
    auto res2 = spectral_radius(unflatten_op(diag, Shape{2, 2}));
    CHECK(res2.value == doctest::Approx(0.9).epsilon(1e-8));

    auto zero = spectral_radius(EinsteinOp(Shape{2}, Shape{2}, Tensor(Shape{2, 2})));
    CHECK(zero.value == 0.0);
    CHECK(zero.converged);
}

TEST_CASE("spectral radius agrees with brute-force spectrum") {
    for (std::uint64_t s = 0; s < 6; ++s) {
        Shape modes = (s % 2 == 0) ? Shape{2, 3} : Shape{5};
        Tensor data = oracle::random_tensor(modes.cat(modes), 400 + s);
        EinsteinOp m(modes, modes, std::move(data));
        const double ref = oracle::dominant_abs_eigenvalue(flatten(m));
        auto est = spectral_radius(m, 1e-12, 50000);
        CHECK(est.value == doctest::Approx(ref).epsilon(1e-8));
    }
}

TEST_CASE("flattened oracle solve") {
    Shape modes{2, 2};
    EinsteinOp id = EinsteinOp::identity(modes);
    Tensor rhs = oracle::random_tensor(modes, 55);

    Tensor x = solve_flattened_oracle(id, rhs);
    CHECK(fro_norm(x - rhs) == 0.0);

    EinsteinOp twice(modes, modes, 2.0 * id.data);
    Tensor y = solve_flattened_oracle(twice, rhs);
    CHECK(fro_norm(y - 0.5 * rhs) <= 1e-14 * fro_norm(rhs));

    EinsteinOp m(modes, modes, id.data + 0.3 * oracle::random_tensor(modes.cat(modes), 56));
    Tensor z = solve_flattened_oracle(m, rhs);
    CHECK(fro_norm(apply(m, z) - rhs) <= 1e-10 * fro_norm(rhs));

    CHECK_THROWS_AS(solve_flattened_oracle(EinsteinOp(modes, modes, Tensor(modes.cat(modes))), rhs),
                    SingularError);
}
