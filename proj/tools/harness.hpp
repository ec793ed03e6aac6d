#pragma once

#include <cstdint>
#include <string>

#include "tgx/extrapolation.hpp"
#include "tgx/io.hpp"

namespace tgx::harness {

// Exit codes follow sysexits where applicable.
inline constexpr int kExitOk = 0;
inline constexpr int kExitMethodError = 1;
inline constexpr int kExitIterationCap = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitIo = 74;

struct RunConfig {
    std::string experiment;  // linear1 | linear2 | completion | nonlinear
    std::string method = "none";  // none | mpe | rre | arnoldi-mpe | arnoldi-rre
    int width = 4;
    int skip = 0;
    int max_cycles = 100;
    double tol = 1e-14;
    std::uint64_t seed = 1;
    int dims = 7;
    int rank = 3;          // completion only
    double p_obs = 0.3;    // completion only
    double noise = 1e-3;   // completion only
    int max_iters = 400;   // plain-iteration cap
    std::string out_path;  // CSV destination; empty = stdout
    std::string manifest_out;
    std::string dump_iterates;  // optional directory for tensor text dumps
};

Manifest to_manifest(const RunConfig& cfg);
RunConfig from_manifest(const Manifest& m);

void emit_manifest(const RunConfig& cfg, const std::string& path);

/// Builds the configured problem, runs it, writes the CSV trace.
/// Returns one of the exit codes above.
int run(const RunConfig& cfg);

}  // namespace tgx::harness
