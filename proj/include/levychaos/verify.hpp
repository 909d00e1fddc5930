#pragma once

// Verification suites: the pathwise product identity, the two-factor versus
// general engine cross-check, isometry/orthogonality statistics and the
// exponential functional. Reports serialize as JSON lines.

#include "levychaos/config.hpp"
#include "levychaos/expansion.hpp"
#include "levychaos/levy.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace levychaos {

struct CheckRecord {
    std::string check;
    /// "rel_err", "abs_err", "z" or "rms"
    std::string metric;
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_err = 0.0;
    double error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    bool skipped = false;
    std::string note;

    nlohmann::json to_json() const;
};

struct VerificationReport {
    std::string suite;
    std::vector<CheckRecord> records;

    /// Counts exclude skipped records.
    std::size_t total() const;
    std::size_t passed() const;
    std::size_t failed() const;
    std::size_t skipped() const;
    bool ok() const { return failed() == 0; }

    nlohmann::json summary_json() const;
    void append(const VerificationReport& other);
};

/// Worker count from LEVYCHAOS_THREADS, else hardware concurrency (>= 1).
unsigned worker_count();

/// Runs body(i) for i in [0, count) across worker threads. Each index is
/// handled by exactly one worker; the first exception is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Path i uses seed derive_stream_seed(seed, i).
std::vector<JumpPath> simulate_paths(const SpacePtr& space, std::uint64_t seed, std::size_t count);

/// Pathwise comparison of prod_k I(f_k) against sum_t c_t I(K_t) on each path.
/// rel_err = |lhs - rhs| / max(1, sum_t |c_t I(K_t)|). Guard trips become
/// skipped records.
VerificationReport check_product_identity(std::span<const SymmetricKernel> factors, const Expansion& expansion,
                                          std::span<const JumpPath> paths, double rel_tol,
                                          double max_tuple_work = kDefaultMaxTupleWork);

VerificationReport verify_product_pathwise(const VerificationConfig& cfg);

/// Term-for-term comparison of expand_pair and expand_product for the first
/// two configured factors.
VerificationReport compare_pair_with_general(const SymmetricKernel& f, const SymmetricKernel& g,
                                             double kernel_tol = 1e-12);
VerificationReport verify_pair_vs_general(const VerificationConfig& cfg);

/// z = (sample mean - target) / standard error; 0 when both numerator and
/// standard error vanish.
double z_score(std::span<const double> samples, double target);

VerificationReport verify_isometry(const VerificationConfig& cfg);

VerificationReport verify_exponential(const VerificationConfig& cfg);

/// Seed for the single allowed re-run of a failed statistical check.
std::uint64_t rerun_seed(std::uint64_t seed);

}  // namespace levychaos
