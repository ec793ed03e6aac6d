#include "harness.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "tgx/problems.hpp"

namespace tgx::harness {

namespace {

struct Experiment {
    StepFn step;
    Tensor x0;
    ErrorFn rel_error;                          // vs. the oracle limit
    std::function<double(const Tensor&)> rel_residual;  // plain-run residual metric
};

Experiment build_linear1(int dims, std::uint64_t seed) {
    const Shape modes{dims, dims};
    EinsteinOp a = make_contractive_op(modes, 0.5, seed);
    // shift by the identity: sigma(A) in the disk around 1, so the normal
    // operator is well conditioned
    a.data += EinsteinOp::identity(modes).data;

    Tensor x_exact(modes, std::vector<double>(static_cast<std::size_t>(modes.size()), 1.0));
    Tensor c = apply(a, x_exact);
    SylvesterLikeProblem sp =
        make_sylvester_problem(a.data, EinsteinOp::identity(modes).data, c, 2, 2);

    Experiment e;
    e.step = [sp](const Tensor& x, int) { return gradient_iteration_step(sp, x); };
    e.x0 = Tensor(modes);
    const double exact_norm = fro_norm(x_exact);
    e.rel_error = [x_exact, exact_norm](const Tensor& x) {
        return fro_norm(x - x_exact) / exact_norm;
    };
    const double c_norm = fro_norm(c);
    e.rel_residual = [sp, c_norm](const Tensor& x) {
        return fro_norm(sylvester_residual(sp, x)) / c_norm;
    };
    return e;
}

Experiment build_linear2(int dims, std::uint64_t seed) {
    if (dims < 3) throw Error("linear2 needs dims >= 3");
    const Index d = dims;
    const Shape a_shape{d, d, d - 1, d - 2};
    const Shape b_shape{d - 2, d - 2, d, d};
    const Shape x_shape{d - 1, d - 2, d - 2, d - 2};
    Tensor a = random_tensor(a_shape, seed);
    Tensor b = random_tensor(b_shape, seed + 7);
    Tensor x_exact(x_shape, std::vector<double>(static_cast<std::size_t>(x_shape.size()), 1.0));
    Tensor c = einstein_product(einstein_product(a, x_exact, 2), b, 2);
    SylvesterLikeProblem sp = make_sylvester_problem(std::move(a), std::move(b), c, 2, 2);

    Experiment e;
    e.step = [sp](const Tensor& x, int) { return gradient_iteration_step(sp, x); };
    e.x0 = Tensor(x_shape);
    const double exact_norm = fro_norm(x_exact);
    e.rel_error = [x_exact, exact_norm](const Tensor& x) {
        return fro_norm(x - x_exact) / exact_norm;
    };
    const double c_norm = fro_norm(c);
    e.rel_residual = [sp, c_norm](const Tensor& x) {
        return fro_norm(sylvester_residual(sp, x)) / c_norm;
    };
    return e;
}

Experiment build_completion(const RunConfig& cfg) {
    CompletionProblem p =
        make_completion_problem(cfg.dims, cfg.rank, cfg.p_obs, cfg.noise, cfg.seed);

    // random unit-column start, independent stream from the instance
    std::mt19937_64 rng(cfg.seed * 2654435761ULL + 1);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Eigen::MatrixXd v0(cfg.dims, cfg.rank);
    for (int k = 0; k < cfg.rank; ++k) {
        for (int i = 0; i < cfg.dims; ++i) v0(i, k) = uni(rng);
        v0.col(k).normalize();
    }

    Experiment e;
    e.step = [p](const Tensor& x, int) {
        return factor_to_tensor(completion_gd_step(p, tensor_to_factor(x)));
    };
    e.x0 = factor_to_tensor(v0);
    const Tensor truth = p.truth_tensor;
    const double truth_norm = fro_norm(truth);
    e.rel_error = [p, truth, truth_norm](const Tensor& x) {
        return fro_norm(cp_sym_eval(tensor_to_factor(x)) - truth) / truth_norm;
    };
    const double obs_norm = fro_norm(p.v_obs);
    e.rel_residual = [p, obs_norm](const Tensor& x) {
        return std::sqrt(completion_loss(p, tensor_to_factor(x))) / obs_norm;
    };
    return e;
}

Experiment build_nonlinear(int dims, std::uint64_t seed) {
    const Shape shape{dims, dims, dims};
    Tensor x0 = random_tensor(shape, seed);
    const double x0_norm = fro_norm(x0);

    Experiment e;
    e.step = [](const Tensor& x, int n) { return sin_step(x, n); };
    e.x0 = std::move(x0);
    e.rel_error = [x0_norm](const Tensor& x) { return fro_norm(x) / x0_norm; };
    e.rel_residual = e.rel_error;
    return e;
}

Experiment build_experiment(const RunConfig& cfg) {
    if (cfg.experiment == "linear1") return build_linear1(cfg.dims, cfg.seed);
    if (cfg.experiment == "linear2") return build_linear2(cfg.dims, cfg.seed);
    if (cfg.experiment == "completion") return build_completion(cfg);
    if (cfg.experiment == "nonlinear") return build_nonlinear(cfg.dims, cfg.seed);
    throw Error("unknown experiment: " + cfg.experiment);
}

struct CsvRow {
    long iter;
    double rel_error;
    double rel_residual;
    double seconds;
    std::string method;
};

void write_csv(std::ostream& os, const std::vector<CsvRow>& rows) {
    os << "iter,rel_error,rel_residual,cpu_seconds,method\n";
    os << std::setprecision(17);
    for (const CsvRow& r : rows) {
        os << r.iter << ',' << r.rel_error << ',' << r.rel_residual << ','
           << std::setprecision(6) << r.seconds << std::setprecision(17) << ',' << r.method
           << '\n';
    }
}

int run_plain(const RunConfig& cfg, const Experiment& e, std::vector<CsvRow>& rows) {
    Tensor x = e.x0;
    const auto t0 = std::chrono::steady_clock::now();
    for (int it = 0; it <= cfg.max_iters; ++it) {
        const double sec =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const double err = e.rel_error(x);
        rows.push_back({it, err, e.rel_residual(x), sec, "none"});
        if (err <= cfg.tol) return kExitOk;
        if (it == cfg.max_iters) break;
        x = e.step(x, it);
    }
    return kExitIterationCap;
}

int run_accelerated(const RunConfig& cfg, const Experiment& e, std::vector<CsvRow>& rows) {
    CycleConfig cc;
    cc.width = cfg.width;
    cc.skip = cfg.skip;
    cc.max_cycles = cfg.max_cycles;
    cc.tol = cfg.tol;
    cc.method = parse_method(cfg.method);
    SequenceTrace trace = run_cycles(e.step, e.x0, cc, e.rel_error);
    for (const TraceRecord& rec : trace.records) {
        rows.push_back({rec.steps, rec.rel_error, rec.rel_residual, rec.seconds, cfg.method});
    }
    if (!trace.diagnostic.empty()) {
        std::cerr << "method error: " << trace.diagnostic << '\n';
        return kExitMethodError;
    }
    return trace.converged ? kExitOk : kExitIterationCap;
}

template <typename T>
std::string fmt(T v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

}  // namespace

Manifest to_manifest(const RunConfig& cfg) {
    Manifest m;
    m["experiment"] = cfg.experiment;
    m["method"] = cfg.method;
    m["width"] = fmt(cfg.width);
    m["skip"] = fmt(cfg.skip);
    m["max_cycles"] = fmt(cfg.max_cycles);
    m["max_iters"] = fmt(cfg.max_iters);
    m["tol"] = fmt(cfg.tol);
    m["seed"] = fmt(cfg.seed);
    m["dims"] = fmt(cfg.dims);
    m["rank"] = fmt(cfg.rank);
    m["p_obs"] = fmt(cfg.p_obs);
    m["noise"] = fmt(cfg.noise);
    return m;
}

RunConfig from_manifest(const Manifest& m) {
    RunConfig cfg;
    auto get = [&m](const std::string& key, const std::string& fallback) {
        auto it = m.find(key);
        return it == m.end() ? fallback : it->second;
    };
    cfg.experiment = get("experiment", "");
    cfg.method = get("method", "none");
    cfg.width = std::stoi(get("width", "4"));
    cfg.skip = std::stoi(get("skip", "0"));
    cfg.max_cycles = std::stoi(get("max_cycles", "100"));
    cfg.max_iters = std::stoi(get("max_iters", "400"));
    cfg.tol = std::stod(get("tol", "1e-14"));
    cfg.seed = std::stoull(get("seed", "1"));
    cfg.dims = std::stoi(get("dims", "7"));
    cfg.rank = std::stoi(get("rank", "3"));
    cfg.p_obs = std::stod(get("p_obs", "0.3"));
    cfg.noise = std::stod(get("noise", "1e-3"));
    return cfg;
}

void emit_manifest(const RunConfig& cfg, const std::string& path) {
    write_manifest(path, to_manifest(cfg));
}

int run(const RunConfig& cfg) {
    if (cfg.width < 1 || cfg.tol <= 0.0 || cfg.dims < 1) return kExitUsage;

    Experiment e;
    try {
        e = build_experiment(cfg);
    } catch (const Error& err) {
        std::cerr << err.what() << '\n';
        return kExitUsage;
    }

    if (!cfg.manifest_out.empty()) {
        try {
            emit_manifest(cfg, cfg.manifest_out);
        } catch (const Error& err) {
            std::cerr << err.what() << '\n';
            return kExitIo;
        }
    }

    std::vector<CsvRow> rows;
    int code;
    try {
        code = cfg.method == "none" ? run_plain(cfg, e, rows) : run_accelerated(cfg, e, rows);
    } catch (const Error& err) {
        std::cerr << "method error: " << err.what() << '\n';
        return kExitMethodError;
    }

    if (cfg.out_path.empty()) {
        write_csv(std::cout, rows);
    } else {
        std::ofstream os(cfg.out_path);
        if (!os) {
            std::cerr << "cannot open " << cfg.out_path << '\n';
            return kExitIo;
        }
        write_csv(os, rows);
        if (!os) return kExitIo;
    }
    return code;
}

}  // namespace tgx::harness
