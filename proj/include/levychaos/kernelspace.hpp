#pragma once

// Discretized state space [0,T] x R_0 with a finite atomic Levy measure, and
// dense symmetric kernels over it.
//
// A point is a (time cell, mark) pair with flat index `cell * marks + mark`.
// Kernel values are row-major over points^degree. Weights (cell width times
// mark rate) are never folded into kernel values; they enter only when a slot
// is integrated out.

#include "levychaos/combinatorics.hpp"

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace levychaos {

struct Mark {
    double size = 0.0;
    double rate = 0.0;

    friend bool operator==(const Mark&, const Mark&) = default;
};

/// Finite atomic Levy measure: jump sizes with positive rates.
class LevyMeasureSpec {
public:
    explicit LevyMeasureSpec(std::vector<Mark> marks);

    const std::vector<Mark>& marks() const noexcept { return marks_; }
    std::size_t size() const noexcept { return marks_.size(); }
    double total_rate() const noexcept { return total_rate_; }

    friend bool operator==(const LevyMeasureSpec& a, const LevyMeasureSpec& b) {
        return a.marks_ == b.marks_;
    }

private:
    std::vector<Mark> marks_;
    double total_rate_ = 0.0;
};

class TimeGrid {
public:
    /// boundaries 0 = t_0 < t_1 < ... < t_G = T
    explicit TimeGrid(std::vector<double> boundaries);
    static TimeGrid uniform(double horizon, std::size_t cells);

    double horizon() const noexcept { return boundaries_.back(); }
    std::size_t cells() const noexcept { return boundaries_.size() - 1; }
    double width(std::size_t cell) const { return boundaries_.at(cell + 1) - boundaries_.at(cell); }
    const std::vector<double>& boundaries() const noexcept { return boundaries_; }
    /// Cell c holds [t_c, t_{c+1}); t = T belongs to the last cell.
    std::size_t cell_of(double t) const;

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    std::vector<double> boundaries_;
};

struct KernelLimits {
    int max_degree = 6;
    std::size_t max_points = 16;
};

class StateSpace {
public:
    StateSpace(TimeGrid grid, LevyMeasureSpec measure, KernelLimits limits = {});

    const TimeGrid& grid() const noexcept { return grid_; }
    const LevyMeasureSpec& measure() const noexcept { return measure_; }
    const KernelLimits& limits() const noexcept { return limits_; }

    std::size_t size() const noexcept { return weights_.size(); }
    std::size_t point(std::size_t cell, std::size_t mark) const { return cell * measure_.size() + mark; }
    std::size_t cell(std::size_t point) const { return point / measure_.size(); }
    std::size_t mark(std::size_t point) const { return point % measure_.size(); }
    double weight(std::size_t point) const { return weights_[point]; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    /// T * total_rate
    double total_weight() const noexcept { return total_weight_; }

    /// Entry count of a degree-n kernel; throws ResourceError past the degree cap.
    std::size_t entries(int degree) const;

    /// Same grid and measure (limits are not part of identity).
    friend bool operator==(const StateSpace& a, const StateSpace& b) {
        return a.grid_ == b.grid_ && a.measure_ == b.measure_;
    }

private:
    TimeGrid grid_;
    LevyMeasureSpec measure_;
    KernelLimits limits_;
    std::vector<double> weights_;
    double total_weight_ = 0.0;
};

using SpacePtr = std::shared_ptr<const StateSpace>;

SpacePtr make_space(TimeGrid grid, LevyMeasureSpec measure, KernelLimits limits = {});

/// Symmetric function on points^degree. Immutable once built.
class SymmetricKernel {
public:
    /// Validates symmetry (relative 1e-12) and finiteness.
    SymmetricKernel(SpacePtr space, int degree, std::vector<double> values);

    static SymmetricKernel scalar(SpacePtr space, double value);
    static SymmetricKernel constant(SpacePtr space, int degree, double value);
    static SymmetricKernel zero(SpacePtr space, int degree) { return constant(std::move(space), degree, 0.0); }
    /// Skips the symmetry scan; caller guarantees the values are symmetric.
    static SymmetricKernel trusted(SpacePtr space, int degree, std::vector<double> values);

    int degree() const noexcept { return degree_; }
    const SpacePtr& space() const noexcept { return space_; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t entries() const noexcept { return values_.size(); }
    double operator[](std::size_t flat) const { return values_[flat]; }
    double at(std::span<const std::size_t> points) const;
    /// Value of a degree-0 kernel.
    double scalar_value() const;

    SymmetricKernel scaled(double factor) const;

private:
    struct TrustTag {};
    SymmetricKernel(TrustTag, SpacePtr space, int degree, std::vector<double> values);

    SpacePtr space_;
    int degree_ = 0;
    std::vector<double> values_;
};

bool same_space(const SymmetricKernel& a, const SymmetricKernel& b);

/// a*f + b*g (equal degree and space).
SymmetricKernel linear_combination(double a, const SymmetricKernel& f, double b, const SymmetricKernel& g);

/// max_x |f(x) - g(x)|; throws on degree/space mismatch.
double max_abs_difference(const SymmetricKernel& f, const SymmetricKernel& g);

/// Largest |v(x) - v(pi x)| / max(1, |v(x)|) over adjacent slot transpositions pi,
/// which generate every slot permutation.
double symmetry_defect(std::span<const double> values, std::size_t points, int degree);

/// Average of `values` over all permutations of the degree argument slots.
SymmetricKernel symmetrize(std::span<const double> values, SpacePtr space, int degree);

/// Symmetric tensor product f (x) g.
SymmetricKernel tensor(const SymmetricKernel& f, const SymmetricKernel& g);

/// Sum over points^n of f * g * prod of weights.
double inner(const SymmetricKernel& f, const SymmetricKernel& g);
double norm_squared(const SymmetricKernel& f);

/// Integrated contraction: the factors in `subset` share `mu` slots that are
/// integrated against the weights; everything else is symmetric-tensored.
SymmetricKernel contract_integrated(std::span<const SymmetricKernel> factors, const SubsetIndex& subset, int mu);

/// Diagonal identification: the factors in `subset` share `nu` slots that stay
/// live output variables. The identity (plain tensor product) when |subset| = 1.
SymmetricKernel identify_diagonal(std::span<const SymmetricKernel> factors, const SubsetIndex& subset, int nu);

/// Applies every integrated contraction (pm.l) and diagonal identification
/// (pm.n) at once. Output degree is term_degree(q, pm).
SymmetricKernel apply_contraction_pattern(std::span<const SymmetricKernel> factors, const PairedMultiIndex& pm);

/// As above, but factor k's slot s receives the role the canonical allocation
/// gives to slot slot_orders[k][s]. Any permutation yields the same kernel.
SymmetricKernel apply_contraction_pattern(std::span<const SymmetricKernel> factors, const PairedMultiIndex& pm,
                                          std::span<const std::vector<std::size_t>> slot_orders);

/// f (x)_{k,l} g: l shared slots integrated out, k shared slots kept live,
/// the rest tensored, then symmetrized. Degree deg f + deg g - 2l - k.
SymmetricKernel pair_contraction(const SymmetricKernel& f, const SymmetricKernel& g, int k, int l);

}  // namespace levychaos
