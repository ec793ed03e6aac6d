#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tgx/block.hpp"
#include "tgx/tensor.hpp"

namespace tgx {

enum class Method { Mpe, Rre, ArnoldiMpe, ArnoldiRre };

Method parse_method(const std::string& name);
std::string method_name(Method m);

/// width+2 consecutive sequence terms X_n ... X_{n+width+1}.
struct Window {
    int skip = 0;   // n
    int width = 1;  // d-bar
    std::vector<Tensor> terms;

    Window(int skip_, int width_, std::vector<Tensor> terms_);
};

struct ExtrapResult {
    Tensor t;
    Eigen::VectorXd delta;                 // length width+1, sums to 1
    Eigen::VectorXd mu;                    // length width
    std::optional<Eigen::VectorXd> theta;  // MPE only, length width+1, theta back = 1
    double gen_residual_norm = 0.0;
};

/// Forward differences D_{n+i} = X_{n+i+1} - X_{n+i}, i = 0..width.
std::vector<Tensor> differences(const Window& w);

/// W_j = D_{j+1} - D_j.
std::vector<Tensor> second_differences(const std::vector<Tensor>& d);

/// Appends theta_back = 1 and normalizes so the deltas sum to 1.
Eigen::VectorXd theta_to_delta(const Eigen::VectorXd& theta_partial);

Eigen::VectorXd mu_to_delta(const Eigen::VectorXd& mu);
Eigen::VectorXd delta_to_mu(const Eigen::VectorXd& delta);

ExtrapResult tg_mpe(const Window& w);
ExtrapResult tg_rre(const Window& w);

/// R_bar = sum_i delta_i D_{n+i}.
Tensor generalized_residual(const Window& w, const Eigen::VectorXd& delta);

struct CycleConfig {
    int width = 1;
    int skip = 0;
    int max_cycles = 50;
    double tol = 1e-10;
    Method method = Method::Rre;
};

struct TraceRecord {
    long steps = 0;  // cumulative base-iteration count
    double residual_norm = 0.0;
    double rel_residual = 0.0;  // residual_norm / ||D_n|| of the first cycle
    double rel_error = -1.0;    // vs. reference limit when supplied, else -1
    double seconds = 0.0;       // cumulative wall time
    double delta_sum_err = 0.0;   // |sum(delta) - 1| / (1 + sum|delta|)
    double conversion_err = 0.0;  // mu<->delta round-trip error, coefficient-relative
    bool extrapolated = false;
    std::string note;
};

struct SequenceTrace {
    std::vector<TraceRecord> records;
    Tensor final;
    bool converged = false;
    std::string diagnostic;
};

/// Step function: (current iterate, global base-iteration index) -> next iterate.
using StepFn = std::function<Tensor(const Tensor&, int)>;

/// Optional error metric evaluated on each cycle's extrapolated tensor;
/// when present it also becomes the stopping metric.
using ErrorFn = std::function<double(const Tensor&)>;

/// Restarted extrapolation driver: each cycle generates skip+width+1 fresh
/// terms from the current seed, extrapolates, and reseeds with the result.
/// A vanishing difference inside a window means the sequence hit a fixed
/// point; the driver returns that term as converged instead of erroring.
SequenceTrace run_cycles(const StepFn& step, const Tensor& x0, const CycleConfig& cfg,
                         const ErrorFn& error_fn = nullptr);

/// Convenience overload: stop on relative error against a known limit.
SequenceTrace run_cycles(const StepFn& step, const Tensor& x0, const CycleConfig& cfg,
                         const Tensor* reference);

}  // namespace tgx
