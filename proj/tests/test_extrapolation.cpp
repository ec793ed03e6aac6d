#include <doctest.h>

#include "oracles.hpp"
#include "tgx/extrapolation.hpp"
#include "tgx/problems.hpp"

using namespace tgx;

namespace {

Window scalar_geometric_window() {
    // X_{k+1} = 0.5 X_k + 1 from X_0 = 0: terms 0, 1, 1.5; limit 2.
    return Window(0, 1, {Tensor(Shape{1}, {0.0}), Tensor(Shape{1}, {1.0}),
                         Tensor(Shape{1}, {1.5})});
}

Window linear_process_window(const LinearProcess& p, const Tensor& x0, int skip, int width) {
    std::vector<Tensor> terms;
    Tensor x = x0;
    for (int i = 0; i < skip; ++i) x = linear_step(p, x);
    terms.push_back(x);
    for (int i = 0; i < width + 1; ++i) terms.push_back(linear_step(p, terms.back()));
    return Window(skip, width, std::move(terms));
}

void check_result_invariants(const ExtrapResult& res, const Window& w) {
    CHECK(std::abs(res.delta.sum() - 1.0) <= 1e-12);
    // Eq-48/51 round trip between the coefficient systems
    CHECK((delta_to_mu(res.delta) - res.mu).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((mu_to_delta(res.mu) - res.delta).cwiseAbs().maxCoeff() <= 1e-12);
    // combination equivalence: sum d_i X_{n+i} == X_n + sum mu_j D_{n+j}
    if (res.delta.size() == w.width + 1) {
        Tensor via_delta(w.terms[0].shape());
        for (Eigen::Index i = 0; i < res.delta.size(); ++i) {
            via_delta += res.delta(i) * w.terms[static_cast<std::size_t>(i)];
        }
        CHECK(fro_norm(via_delta - res.t) <= 1e-12 * (1.0 + fro_norm(res.t)));
    }
}

}  // namespace

TEST_CASE("differences") {
    Window w = scalar_geometric_window();
    auto d = differences(w);
    REQUIRE(d.size() == 2);
    CHECK(d[0].at({0}) == doctest::Approx(1.0));
    CHECK(d[1].at({0}) == doctest::Approx(0.5));

    Window constant(0, 1, {Tensor(Shape{2}), Tensor(Shape{2}), Tensor(Shape{2})});
    for (const Tensor& t : differences(constant)) CHECK(fro_norm(t) == 0.0);
}

TEST_CASE("differences satisfy the linear-process law") {
    Shape modes{2, 2};
    LinearProcess p{make_contractive_op(modes, 0.8, 17), oracle::random_tensor(modes, 18)};
    Window w = linear_process_window(p, oracle::random_tensor(modes, 19), 0, 3);
    auto d = differences(w);
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
        CHECK(fro_norm(d[i + 1] - apply(p.m, d[i])) <= 1e-12 * fro_norm(d[i]));
    }
}

TEST_CASE("second differences") {
    auto d = differences(scalar_geometric_window());
    auto w = second_differences(d);
    REQUIRE(w.size() == 1);
    CHECK(w[0].at({0}) == doctest::Approx(-0.5));

    std::vector<Tensor> constant{Tensor(Shape{2}, {1, 1}), Tensor(Shape{2}, {1, 1})};
    CHECK(fro_norm(second_differences(constant)[0]) == 0.0);
    CHECK_THROWS_AS(second_differences({Tensor(Shape{1})}), Error);
}

TEST_CASE("theta_to_delta") {
    Eigen::VectorXd theta(1);
    theta << -0.5;
    Eigen::VectorXd delta = theta_to_delta(theta);
    CHECK(delta(0) == doctest::Approx(-1.0));
    CHECK(delta(1) == doctest::Approx(2.0));

    Eigen::VectorXd zeros = Eigen::VectorXd::Zero(3);
    Eigen::VectorXd d2 = theta_to_delta(zeros);
    CHECK(d2.head(3).cwiseAbs().maxCoeff() == 0.0);
    CHECK(d2(3) == doctest::Approx(1.0));

    Eigen::VectorXd bad(1);
    bad << -1.0;
    CHECK_THROWS_AS(theta_to_delta(bad), VanishingSumError);
}

TEST_CASE("mu/delta conversions") {
    Eigen::VectorXd mu(1);
    mu << 2.0;
    Eigen::VectorXd delta = mu_to_delta(mu);
    CHECK(delta(0) == doctest::Approx(-1.0));
    CHECK(delta(1) == doctest::Approx(2.0));
    CHECK((delta_to_mu(delta) - mu).cwiseAbs().maxCoeff() <= 1e-15);

    Eigen::VectorXd zero_mu = Eigen::VectorXd::Zero(4);
    Eigen::VectorXd d = mu_to_delta(zero_mu);
    CHECK(d(0) == doctest::Approx(1.0));
    CHECK(d.tail(4).cwiseAbs().maxCoeff() == 0.0);

    // random delta summing to one round-trips
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Eigen::VectorXd rd(5);
    for (int i = 0; i < 4; ++i) rd(i) = uni(rng);
    rd(4) = 1.0 - rd.head(4).sum();
    CHECK((mu_to_delta(delta_to_mu(rd)) - rd).cwiseAbs().maxCoeff() <= 1e-12);

    Eigen::VectorXd not_normalized(2);
    not_normalized << 1.0, 1.0;
    CHECK_THROWS_AS(delta_to_mu(not_normalized), Error);
}

TEST_CASE("tg_mpe geometric hand case") {
    ExtrapResult res = tg_mpe(scalar_geometric_window());
    REQUIRE(res.theta.has_value());
    CHECK((*res.theta)(0) == doctest::Approx(-0.5));
    CHECK(res.delta(0) == doctest::Approx(-1.0));
    CHECK(res.delta(1) == doctest::Approx(2.0));
    CHECK(res.t.at({0}) == doctest::Approx(2.0));
    CHECK(res.gen_residual_norm <= 1e-14);
    check_result_invariants(res, scalar_geometric_window());
}

TEST_CASE("tg_rre geometric hand case") {
    ExtrapResult res = tg_rre(scalar_geometric_window());
    CHECK_FALSE(res.theta.has_value());
    CHECK(res.mu(0) == doctest::Approx(2.0));
    CHECK(res.delta(0) == doctest::Approx(-1.0));
    CHECK(res.t.at({0}) == doctest::Approx(2.0));
    check_result_invariants(res, scalar_geometric_window());
}

TEST_CASE("degenerate window errors") {
    Tensor c = oracle::random_tensor(Shape{2}, 5);
    Window w(0, 1, {c, c, c});
    CHECK_THROWS_AS(tg_mpe(w), RankDeficientError);
    CHECK_THROWS_AS(tg_rre(w), RankDeficientError);
}

TEST_CASE("exact recovery at the minimal-polynomial degree") {
    for (int d : {1, 2, 3}) {
        MinpolyInstance inst = make_finite_minpoly_op(Shape{2, 2}, d, 1000 + d);
        LinearProcess p{inst.m, inst.b};
        Window w = linear_process_window(p, inst.x0, 0, d);
        for (auto* method : {&tg_mpe, &tg_rre}) {
            ExtrapResult res = (*method)(w);
            CHECK(fro_norm(res.t - inst.limit) <= 1e-10 * fro_norm(inst.limit));
            CHECK(res.gen_residual_norm <= 1e-10);
            check_result_invariants(res, w);
        }
    }
}

TEST_CASE("extrapolation from errors matches extrapolation from terms") {
    // the minimal polynomials w.r.t. E_n and D_n coincide, so running the
    // method on the shifted sequence X_n - limit recovers zero
    MinpolyInstance inst = make_finite_minpoly_op(Shape{2, 2}, 3, 77);
    LinearProcess p{inst.m, inst.b};
    Window w = linear_process_window(p, inst.x0, 0, 3);
    std::vector<Tensor> shifted;
    for (const Tensor& t : w.terms) shifted.push_back(t - inst.limit);
    Window we(0, 3, std::move(shifted));

    ExtrapResult from_terms = tg_mpe(w);
    ExtrapResult from_errors = tg_mpe(we);
    CHECK((from_terms.delta - from_errors.delta).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(fro_norm(from_errors.t) <= 1e-10 * fro_norm(inst.limit));
}

TEST_CASE("generalized residual") {
    MinpolyInstance inst = make_finite_minpoly_op(Shape{2, 2}, 2, 31);
    LinearProcess p{inst.m, inst.b};
    Window w = linear_process_window(p, inst.x0, 0, 2);

    // delta = e1 gives D_n
    Eigen::VectorXd e1 = Eigen::VectorXd::Unit(3, 0);
    Tensor r = generalized_residual(w, e1);
    CHECK(fro_norm(r - (w.terms[1] - w.terms[0])) <= 1e-14);

    // on a linear process, ||R|| = ||B - (I - M) * T||
    ExtrapResult res = tg_rre(w);
    Tensor rbar = generalized_residual(w, res.delta);
    EinsteinOp i_minus_m(p.m.row_shape, p.m.col_shape,
                         EinsteinOp::identity(p.m.row_shape).data - p.m.data);
    Tensor check = p.b - apply(i_minus_m, res.t);
    CHECK(fro_norm(rbar - check) <= 1e-10 * (1.0 + fro_norm(rbar)));

    Eigen::VectorXd bad = Eigen::VectorXd::Zero(3);
    CHECK_THROWS_AS(generalized_residual(w, bad), Error);
}

TEST_CASE("rre residual never exceeds mpe residual") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        Shape modes{2, 2};
        LinearProcess p{make_contractive_op(modes, 0.9, 500 + s),
                        oracle::random_tensor(modes, 600 + s)};
        Window w = linear_process_window(p, oracle::random_tensor(modes, 700 + s), 0,
                                         static_cast<int>(s % 3) + 1);
        ExtrapResult rre = tg_rre(w);
        ExtrapResult mpe = tg_mpe(w);
        CHECK(rre.gen_residual_norm <= mpe.gen_residual_norm + 1e-12);
        check_result_invariants(rre, w);
        check_result_invariants(mpe, w);
    }
}

TEST_CASE("run_cycles on the geometric example") {
    CycleConfig cfg;
    cfg.width = 1;
    cfg.max_cycles = 3;
    cfg.tol = 1e-12;
    cfg.method = Method::Mpe;
    Tensor limit(Shape{1}, {2.0});
    auto step = [](const Tensor& x, int) {
        Tensor y = x;
        y.data_mut()[0] = 0.5 * x.data()[0] + 1.0;
        return y;
    };
    SequenceTrace trace = run_cycles(step, Tensor(Shape{1}), cfg, &limit);
    CHECK(trace.converged);
    CHECK(trace.records.size() == 1);
    CHECK(fro_norm(trace.final - limit) <= 1e-12);
}

TEST_CASE("run_cycles identity map reaches the fixed point branch") {
    CycleConfig cfg;
    cfg.width = 2;
    cfg.max_cycles = 2;
    cfg.method = Method::Rre;
    auto step = [](const Tensor& x, int) { return x; };
    Tensor x0 = oracle::random_tensor(Shape{2}, 1);
    SequenceTrace trace = run_cycles(step, x0, cfg);
    CHECK(trace.converged);
    REQUIRE(trace.records.size() == 1);
    CHECK(trace.records[0].note == "fixed point reached");
    CHECK(fro_norm(trace.final - x0) == 0.0);
}

TEST_CASE("run_cycles decreases the residual on contractive processes") {
    Shape modes{2, 2};
    LinearProcess p{make_contractive_op(modes, 0.99, 41), oracle::random_tensor(modes, 42)};
    CycleConfig cfg;
    cfg.width = 3;
    cfg.max_cycles = 6;
    cfg.tol = 1e-13;
    cfg.method = Method::Rre;
    auto step = [&p](const Tensor& x, int) { return linear_step(p, x); };
    SequenceTrace trace = run_cycles(step, oracle::random_tensor(modes, 43), cfg);
    REQUIRE(trace.records.size() >= 2);
    for (std::size_t i = 1; i < trace.records.size(); ++i) {
        CHECK(trace.records[i].residual_norm < trace.records[i - 1].residual_norm);
    }
}
