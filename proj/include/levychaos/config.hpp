#pragma once

// Verification/expansion run configuration and its JSON schema (version 1).
// See docs/config.md for the field reference.

#include "levychaos/kernelspace.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace levychaos {

inline constexpr int kConfigSchemaVersion = 1;

/// Entries i.i.d. uniform on [-scale, scale] from Rng(derive_stream_seed(seed, 0)),
/// drawn in flat row-major order, then symmetrized.
struct RandomKernelSource {
    std::uint64_t seed = 0;
    double scale = 1.0;
};

/// Flat row-major values over points^degree.
struct InlineKernelSource {
    std::vector<double> values;
};

/// Path to a kernel JSON document (relative paths resolve against the config file).
struct FileKernelSource {
    std::string path;
};

using KernelSource = std::variant<RandomKernelSource, InlineKernelSource, FileKernelSource>;

SymmetricKernel random_kernel(SpacePtr space, int degree, std::uint64_t seed, double scale);
/// `pointer` locates the source in the config for error messages.
SymmetricKernel make_kernel(const KernelSource& source, SpacePtr space, int degree, const std::string& base_dir = "",
                            const std::string& pointer = "/kernels");

struct Tolerances {
    double rel_tol = 1e-9;
    double stat_sigma = 3.0;
};

struct IsometrySettings {
    std::vector<int> mean_degrees{1, 2, 3};
    std::vector<int> moment_degrees{1, 2};
    std::vector<std::pair<int, int>> cross_degrees{{1, 2}};
    /// Kernel for degree n is random_kernel(space, n, kernel_seed + n, kernel_scale).
    std::uint64_t kernel_seed = 1000;
    double kernel_scale = 1.0;
};

struct ExponentialSettings {
    KernelSource rho = RandomKernelSource{2024, 0.5};
    /// Upper bound on the RMS truncation error at the configured order.
    double rms_bound = 1e-2;
};

struct VerificationConfig {
    SpacePtr space;
    std::vector<int> degrees{1, 1};
    /// One source per factor; missing entries default to RandomKernelSource{k + 1, 1.0}.
    std::vector<KernelSource> kernels;
    std::size_t paths = 100;
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    Tolerances tolerances;
    int truncation_order = 6;
    IsometrySettings isometry;
    ExponentialSettings exponential;
    std::string base_dir;
};

/// Four unit cells on [0, 1] with marks {+1 at rate 2, -0.5 at rate 2}, so T * total rate = 4.
SpacePtr default_space(KernelLimits limits = {});
VerificationConfig default_config();

VerificationConfig config_from_json(const nlohmann::json& doc, const std::string& base_dir = "");
VerificationConfig load_config(const std::string& path);

/// Validates counts, tolerances and degree caps; throws ConfigError.
void validate(const VerificationConfig& cfg);

std::vector<SymmetricKernel> build_factors(const VerificationConfig& cfg);

}  // namespace levychaos
