#pragma once

// Compound-Poisson paths on a discretized state space, pathwise evaluation of
// multiple integrals against the compensated measure, and the exponential
// functional with its chaos kernels.

#include "levychaos/kernelspace.hpp"
#include "levychaos/rng.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <vector>

namespace levychaos {

struct Atom {
    double time = 0.0;
    std::size_t mark = 0;

    friend bool operator==(const Atom&, const Atom&) = default;
};

/// One realization of the Poisson random measure: atoms with strictly
/// increasing times in (0, T].
class JumpPath {
public:
    JumpPath(SpacePtr space, std::vector<Atom> atoms, std::uint64_t seed = 0);

    const SpacePtr& space() const noexcept { return space_; }
    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    std::uint64_t seed() const noexcept { return seed_; }
    /// State-space point of atom a.
    std::size_t point(std::size_t a) const;

private:
    SpacePtr space_;
    std::vector<Atom> atoms_;
    std::uint64_t seed_ = 0;
};

/// Per mark j: Poisson(T * rate_j) jumps at i.i.d. uniform times on (0, T].
/// Equal times are redrawn.
JumpPath simulate_path(SpacePtr space, std::uint64_t seed);

/// {"seed": s, "atoms": [{"t": time, "mark": j}, ...]}
nlohmann::json path_to_json(const JumpPath& path);
JumpPath path_from_json(const nlohmann::json& doc, SpacePtr space);

inline constexpr double kDefaultMaxTupleWork = 1e7;

/// Evaluates I_n(f) on paths. The compensator reductions of f are computed
/// once, so reuse one evaluator across many paths.
///
/// I_n(f) = sum_j (-1)^{n-j} C(n,j) sum_{distinct atoms a_1..a_j}
///          int f(a_1..a_j, y_1..y_{n-j}) dnu(y_1)..dnu(y_{n-j})
///
/// Atom tuples are enumerated grouped by state-space point, so the work per
/// path is bounded by D^n with D the number of distinct occupied points.
class MultipleIntegral {
public:
    explicit MultipleIntegral(SymmetricKernel f, double max_tuple_work = kDefaultMaxTupleWork);

    const SymmetricKernel& kernel() const noexcept { return kernel_; }
    int degree() const noexcept { return kernel_.degree(); }

    /// Throws ResourceError("atom_tuple_work") when D^n exceeds the work cap.
    double operator()(const JumpPath& path) const;

private:
    SymmetricKernel kernel_;
    double max_tuple_work_;
    // reduced_[j]: f with its trailing n-j slots integrated, over points^j
    std::vector<std::vector<double>> reduced_;
    std::vector<double> signed_binomial_;
};

double eval_multiple_integral(const SymmetricKernel& f, const JumpPath& path);

/// rho on the state space and the derived kernel e^rho - 1.
class ExponentialSpec {
public:
    explicit ExponentialSpec(SymmetricKernel rho);

    const SymmetricKernel& rho() const noexcept { return rho_; }
    const SymmetricKernel& expm1_rho() const noexcept { return expm1_rho_; }

private:
    SymmetricKernel rho_;
    SymmetricKernel expm1_rho_;
};

/// exp{ int rho dN~ - int (e^rho - 1 - rho) dnu ds } on the path.
/// Throws NonFiniteError on overflow.
double eval_exponential_functional(const ExponentialSpec& spec, const JumpPath& path);

/// (e^rho - 1)^{(x) n}; n = 0 gives the scalar 1.
SymmetricKernel exponential_chaos_kernel(const ExponentialSpec& spec, int n);

/// sum_{n=0}^{R} I_n((e^rho - 1)^{(x) n}) / n!, with evaluators cached across paths.
class TruncatedChaos {
public:
    TruncatedChaos(const ExponentialSpec& spec, int order, double max_tuple_work = kDefaultMaxTupleWork);

    int order() const noexcept { return static_cast<int>(evaluators_.size()) - 1; }
    /// Partial sums for orders 0..R on one path.
    std::vector<double> partial_sums(const JumpPath& path) const;
    double operator()(const JumpPath& path) const { return partial_sums(path).back(); }

private:
    std::vector<MultipleIntegral> evaluators_;
};

double eval_truncated_chaos(const ExponentialSpec& spec, const JumpPath& path, int order);

}  // namespace levychaos
