#include "tgx/extrapolation.hpp"

#include <chrono>
#include <cmath>

#include "tgx/arnoldi.hpp"

namespace tgx {

Method parse_method(const std::string& name) {
    if (name == "mpe") return Method::Mpe;
    if (name == "rre") return Method::Rre;
    if (name == "arnoldi-mpe") return Method::ArnoldiMpe;
    if (name == "arnoldi-rre") return Method::ArnoldiRre;
    throw Error("unknown method: " + name);
}

std::string method_name(Method m) {
    switch (m) {
        case Method::Mpe: return "mpe";
        case Method::Rre: return "rre";
        case Method::ArnoldiMpe: return "arnoldi-mpe";
        case Method::ArnoldiRre: return "arnoldi-rre";
    }
    return "?";
}

Window::Window(int skip_, int width_, std::vector<Tensor> terms_)
    : skip(skip_), width(width_), terms(std::move(terms_)) {
    if (skip < 0) throw Error("window skip must be >= 0");
    if (width < 1) throw Error("window width must be >= 1");
    if (static_cast<int>(terms.size()) != width + 2) {
        throw Error("window needs width+2 terms, got " + std::to_string(terms.size()));
    }
    for (const Tensor& t : terms) {
        if (t.shape() != terms.front().shape()) throw ShapeError("window terms shape mismatch");
    }
}

std::vector<Tensor> differences(const Window& w) {
    std::vector<Tensor> d;
    d.reserve(w.terms.size() - 1);
    for (std::size_t i = 0; i + 1 < w.terms.size(); ++i) {
        d.push_back(w.terms[i + 1] - w.terms[i]);
    }
    return d;
}

std::vector<Tensor> second_differences(const std::vector<Tensor>& d) {
    if (d.size() < 2) throw Error("need at least two differences");
    std::vector<Tensor> w;
    w.reserve(d.size() - 1);
    for (std::size_t i = 0; i + 1 < d.size(); ++i) w.push_back(d[i + 1] - d[i]);
    return w;
}

Eigen::VectorXd theta_to_delta(const Eigen::VectorXd& theta_partial) {
    const Eigen::Index d = theta_partial.size();
    Eigen::VectorXd theta(d + 1);
    theta.head(d) = theta_partial;
    theta(d) = 1.0;
    const double sum = theta.sum();
    const double scale = 1.0 + theta.cwiseAbs().sum();
    if (std::abs(sum) <= 1e-13 * scale) {
        throw VanishingSumError("coefficient sum vanishes; extrapolation undefined");
    }
    return theta / sum;
}

Eigen::VectorXd mu_to_delta(const Eigen::VectorXd& mu) {
    const Eigen::Index d = mu.size();
    Eigen::VectorXd delta(d + 1);
    delta(0) = 1.0 - mu(0);
    for (Eigen::Index i = 1; i < d; ++i) delta(i) = mu(i - 1) - mu(i);
    delta(d) = mu(d - 1);
    return delta;
}

Eigen::VectorXd delta_to_mu(const Eigen::VectorXd& delta) {
    // consistency check scaled by the coefficient magnitude: large entries
    // summing to 1 cannot do better than eps * sum|delta|
    if (std::abs(delta.sum() - 1.0) > 1e-10 * (1.0 + delta.cwiseAbs().sum())) {
        throw Error("delta coefficients must sum to 1");
    }
    const Eigen::Index d = delta.size() - 1;
    Eigen::VectorXd mu(d);
    double tail = 0.0;
    for (Eigen::Index j = d - 1; j >= 0; --j) {
        tail += delta(j + 1);
        mu(j) = tail;
    }
    return mu;
}

namespace {

Tensor combine_terms(const Window& w, const Eigen::VectorXd& delta) {
    Tensor t = delta(0) * w.terms[0];
    for (Eigen::Index i = 1; i < delta.size(); ++i) {
        t += delta(i) * w.terms[static_cast<std::size_t>(i)];
    }
    return t;
}

double residual_norm_of(const std::vector<Tensor>& d, const Eigen::VectorXd& delta) {
    return fro_norm(block_apply(BlockTensor(d), delta));
}

}  // namespace

ExtrapResult tg_mpe(const Window& w) {
    std::vector<Tensor> d = differences(w);
    std::vector<Tensor> d_head(d.begin(), d.end() - 1);
    BlockTensor block(std::move(d_head));
    Eigen::VectorXd theta_partial = lsq_normal_eq(block, d.back(), -1);
    Eigen::VectorXd delta = theta_to_delta(theta_partial);

    ExtrapResult res;
    res.t = combine_terms(w, delta);
    res.mu = delta_to_mu(delta);
    res.delta = std::move(delta);
    Eigen::VectorXd theta(theta_partial.size() + 1);
    theta.head(theta_partial.size()) = theta_partial;
    theta(theta_partial.size()) = 1.0;
    res.theta = std::move(theta);
    res.gen_residual_norm = residual_norm_of(d, res.delta);
    return res;
}

ExtrapResult tg_rre(const Window& w) {
    std::vector<Tensor> d = differences(w);
    std::vector<Tensor> sec = second_differences(d);
    BlockTensor block(std::move(sec));
    Eigen::VectorXd mu = lsq_normal_eq(block, d.front(), -1);

    ExtrapResult res;
    res.t = w.terms[0];
    for (Eigen::Index j = 0; j < mu.size(); ++j) {
        res.t += mu(j) * d[static_cast<std::size_t>(j)];
    }
    res.delta = mu_to_delta(mu);
    res.mu = std::move(mu);
    res.gen_residual_norm = residual_norm_of(d, res.delta);
    return res;
}

Tensor generalized_residual(const Window& w, const Eigen::VectorXd& delta) {
    if (std::abs(delta.sum() - 1.0) > 1e-10 * (1.0 + delta.cwiseAbs().sum())) {
        throw Error("delta coefficients must sum to 1");
    }
    return block_apply(BlockTensor(differences(w)), delta);
}

namespace {

ExtrapResult dispatch(Method m, const Window& w) {
    switch (m) {
        case Method::Mpe: return tg_mpe(w);
        case Method::Rre: return tg_rre(w);
        case Method::ArnoldiMpe: return extrapolate_arnoldi(w, Method::Mpe);
        case Method::ArnoldiRre: return extrapolate_arnoldi(w, Method::Rre);
    }
    throw Error("unreachable method");
}

}  // namespace

SequenceTrace run_cycles(const StepFn& step, const Tensor& x0, const CycleConfig& cfg,
                         const Tensor* reference) {
    if (!reference) return run_cycles(step, x0, cfg, ErrorFn());
    const Tensor limit = *reference;
    const double ref_norm = fro_norm(limit);
    return run_cycles(step, x0, cfg, [limit, ref_norm](const Tensor& t) {
        const double err = fro_norm(t - limit);
        return ref_norm > 0.0 ? err / ref_norm : err;
    });
}

SequenceTrace run_cycles(const StepFn& step, const Tensor& x0, const CycleConfig& cfg,
                         const ErrorFn& error_fn) {
    if (cfg.width < 1 || cfg.max_cycles < 1 || cfg.tol <= 0.0) {
        throw Error("invalid cycle configuration");
    }
    SequenceTrace trace;
    trace.final = x0;
    Tensor seed = x0;
    long steps = 0;
    double first_diff_norm = -1.0;
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    for (int cycle = 0; cycle < cfg.max_cycles; ++cycle) {
        Tensor x = seed;
        for (int i = 0; i < cfg.skip; ++i) {
            x = step(x, static_cast<int>(steps));
            ++steps;
        }
        std::vector<Tensor> terms;
        terms.reserve(static_cast<std::size_t>(cfg.width) + 2);
        terms.push_back(x);
        bool fixed_point = false;
        for (int i = 0; i < cfg.width + 1; ++i) {
            Tensor next = step(terms.back(), static_cast<int>(steps));
            ++steps;
            if (fro_norm(next - terms.back()) == 0.0) {
                trace.final = next;
                trace.converged = true;
                TraceRecord rec;
                rec.steps = steps;
                rec.seconds = elapsed();
                rec.rel_error = error_fn ? error_fn(next) : -1.0;
                rec.note = "fixed point reached";
                trace.records.push_back(std::move(rec));
                fixed_point = true;
                break;
            }
            terms.push_back(std::move(next));
        }
        if (fixed_point) return trace;

        Window w(cfg.skip, cfg.width, std::move(terms));
        ExtrapResult res;
        try {
            res = dispatch(cfg.method, w);
        } catch (const Error& e) {
            TraceRecord rec;
            rec.steps = steps;
            rec.seconds = elapsed();
            rec.note = std::string("method error: ") + e.what();
            trace.records.push_back(std::move(rec));
            trace.diagnostic = e.what();
            return trace;
        }

        if (first_diff_norm < 0.0) {
            first_diff_norm = fro_norm(w.terms[1] - w.terms[0]);
            if (first_diff_norm == 0.0) first_diff_norm = 1.0;
        }

        TraceRecord rec;
        rec.steps = steps;
        rec.extrapolated = true;
        rec.residual_norm = res.gen_residual_norm;
        rec.rel_residual = res.gen_residual_norm / first_diff_norm;
        rec.rel_error = error_fn ? error_fn(res.t) : -1.0;
        rec.seconds = elapsed();
        rec.delta_sum_err = std::abs(res.delta.sum() - 1.0) / (1.0 + res.delta.cwiseAbs().sum());
        rec.conversion_err = (mu_to_delta(delta_to_mu(res.delta)) - res.delta).cwiseAbs().maxCoeff() /
                             (1.0 + res.delta.cwiseAbs().maxCoeff());
        trace.records.push_back(rec);
        trace.final = res.t;
        seed = std::move(res.t);

        const double metric = error_fn ? rec.rel_error : rec.rel_residual;
        if (metric <= cfg.tol) {
            trace.converged = true;
            return trace;
        }
    }
    return trace;
}

}  // namespace tgx
