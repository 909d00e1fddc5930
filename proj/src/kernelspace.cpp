#include "levychaos/kernelspace.hpp"

#include "levychaos/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace levychaos {

namespace {

std::size_t int_pow(std::size_t base, int exponent) {
    std::size_t result = 1;
    for (int e = 0; e < exponent; ++e) result *= base;
    return result;
}

void require_same_space(const SymmetricKernel& a, const SymmetricKernel& b) {
    if (!same_space(a, b)) throw DomainError("kernels live on different state spaces");
}

void require_common_space(std::span<const SymmetricKernel> factors) {
    if (factors.empty()) throw DomainError("need at least one factor");
    for (const auto& f : factors) require_same_space(factors.front(), f);
}

// Visits every non-decreasing tuple of length `degree` over [0, points).
template <class Fn>
void for_each_sorted_tuple(std::size_t points, int degree, Fn&& fn) {
    std::vector<std::size_t> tuple(static_cast<std::size_t>(degree), 0);
    if (degree == 0) {
        fn(tuple);
        return;
    }
    while (true) {
        fn(tuple);
        int pos = degree - 1;
        while (pos >= 0 && tuple[static_cast<std::size_t>(pos)] + 1 == points) --pos;
        if (pos < 0) return;
        const auto bumped = tuple[static_cast<std::size_t>(pos)] + 1;
        for (int a = pos; a < degree; ++a) tuple[static_cast<std::size_t>(a)] = bumped;
    }
}

std::size_t encode(std::span<const std::size_t> tuple, std::size_t points) {
    std::size_t flat = 0;
    for (auto x : tuple) flat = flat * points + x;
    return flat;
}

// Per-flat-index product of weights over points^degree.
std::vector<double> weight_products(const StateSpace& space, int degree) {
    std::vector<double> out(1, 1.0);
    for (int d = 0; d < degree; ++d) {
        std::vector<double> next;
        next.reserve(out.size() * space.size());
        for (double w : out) {
            for (std::size_t p = 0; p < space.size(); ++p) next.push_back(w * space.weight(p));
        }
        out = std::move(next);
    }
    return out;
}

struct SlotRole {
    bool integrated = false;
    std::size_t index = 0;  // output slot or integrated variable
};

}  // namespace

// --- measure, grid, space ------------------------------------------------------

LevyMeasureSpec::LevyMeasureSpec(std::vector<Mark> marks) : marks_(std::move(marks)) {
    if (marks_.empty()) throw DomainError("Levy measure needs at least one mark");
    for (std::size_t j = 0; j < marks_.size(); ++j) {
        const auto& mk = marks_[j];
        if (!std::isfinite(mk.rate) || mk.rate <= 0.0) throw DomainError("mark rates must be finite and > 0");
        if (!std::isfinite(mk.size) || mk.size == 0.0) throw DomainError("jump sizes must be finite and nonzero");
        for (std::size_t i = 0; i < j; ++i) {
            if (marks_[i].size == mk.size) throw DomainError("jump sizes must be distinct");
        }
        total_rate_ += mk.rate;
    }
}

TimeGrid::TimeGrid(std::vector<double> boundaries) : boundaries_(std::move(boundaries)) {
    if (boundaries_.size() < 2) throw DomainError("time grid needs at least one cell");
    if (boundaries_.front() != 0.0) throw DomainError("time grid must start at 0");
    for (std::size_t c = 1; c < boundaries_.size(); ++c) {
        if (!std::isfinite(boundaries_[c]) || !(boundaries_[c] > boundaries_[c - 1])) {
            throw DomainError("time grid boundaries must be finite and strictly increasing");
        }
    }
}

TimeGrid TimeGrid::uniform(double horizon, std::size_t cells) {
    if (!(horizon > 0.0) || cells == 0) throw DomainError("uniform grid needs T > 0 and at least one cell");
    std::vector<double> b(cells + 1);
    for (std::size_t c = 0; c <= cells; ++c) b[c] = horizon * static_cast<double>(c) / static_cast<double>(cells);
    b.back() = horizon;
    return TimeGrid(std::move(b));
}

std::size_t TimeGrid::cell_of(double t) const {
    if (!(t >= 0.0) || t > horizon()) throw DomainError("time outside [0, T]");
    auto it = std::upper_bound(boundaries_.begin(), boundaries_.end(), t);
    auto cell = static_cast<std::size_t>(std::distance(boundaries_.begin(), it)) - 1;
    return std::min(cell, cells() - 1);
}

StateSpace::StateSpace(TimeGrid grid, LevyMeasureSpec measure, KernelLimits limits)
    : grid_(std::move(grid)), measure_(std::move(measure)), limits_(limits) {
    if (limits_.max_degree < 0) throw DomainError("max_degree must be >= 0");
    const auto count = grid_.cells() * measure_.size();
    if (count > limits_.max_points) {
        throw ResourceError("max_points", "state space has " + std::to_string(count) +
                                              " points, above the cap of " + std::to_string(limits_.max_points));
    }
    weights_.reserve(count);
    for (std::size_t c = 0; c < grid_.cells(); ++c) {
        for (const auto& mk : measure_.marks()) weights_.push_back(grid_.width(c) * mk.rate);
    }
    total_weight_ = grid_.horizon() * measure_.total_rate();
}

std::size_t StateSpace::entries(int degree) const {
    if (degree < 0) throw DomainError("negative kernel degree");
    if (degree > limits_.max_degree) {
        throw ResourceError("max_degree", "kernel degree " + std::to_string(degree) + " exceeds the cap of " +
                                              std::to_string(limits_.max_degree));
    }
    return int_pow(size(), degree);
}

SpacePtr make_space(TimeGrid grid, LevyMeasureSpec measure, KernelLimits limits) {
    return std::make_shared<const StateSpace>(std::move(grid), std::move(measure), limits);
}

// --- SymmetricKernel ---------------------------------------------------------------

SymmetricKernel::SymmetricKernel(TrustTag, SpacePtr space, int degree, std::vector<double> values)
    : space_(std::move(space)), degree_(degree), values_(std::move(values)) {
    if (!space_) throw DomainError("kernel needs a state space");
    if (values_.size() != space_->entries(degree_)) {
        throw DomainError("kernel value count " + std::to_string(values_.size()) + " != |points|^degree = " +
                          std::to_string(space_->entries(degree_)));
    }
}

SymmetricKernel::SymmetricKernel(SpacePtr space, int degree, std::vector<double> values)
    : SymmetricKernel(TrustTag{}, std::move(space), degree, std::move(values)) {
    for (double v : values_) {
        if (!std::isfinite(v)) throw DomainError("kernel values must be finite");
    }
    if (symmetry_defect(values_, space_->size(), degree_) > 1e-12) {
        throw DomainError("kernel values are not symmetric under slot permutations");
    }
}

SymmetricKernel SymmetricKernel::trusted(SpacePtr space, int degree, std::vector<double> values) {
    return SymmetricKernel(TrustTag{}, std::move(space), degree, std::move(values));
}

SymmetricKernel SymmetricKernel::scalar(SpacePtr space, double value) {
    return trusted(std::move(space), 0, {value});
}

SymmetricKernel SymmetricKernel::constant(SpacePtr space, int degree, double value) {
    if (!space) throw DomainError("kernel needs a state space");
    const auto count = space->entries(degree);
    return trusted(std::move(space), degree, std::vector<double>(count, value));
}

double SymmetricKernel::at(std::span<const std::size_t> points) const {
    if (points.size() != static_cast<std::size_t>(degree_)) throw DomainError("wrong number of kernel arguments");
    for (auto p : points) {
        if (p >= space_->size()) throw DomainError("kernel argument is not a valid point");
    }
    return values_[encode(points, space_->size())];
}

double SymmetricKernel::scalar_value() const {
    if (degree_ != 0) throw DomainError("scalar_value() on a kernel of degree " + std::to_string(degree_));
    return values_.front();
}

SymmetricKernel SymmetricKernel::scaled(double factor) const {
    std::vector<double> out(values_);
    for (auto& v : out) v *= factor;
    return trusted(space_, degree_, std::move(out));
}

bool same_space(const SymmetricKernel& a, const SymmetricKernel& b) {
    return a.space() == b.space() || *a.space() == *b.space();
}

SymmetricKernel linear_combination(double a, const SymmetricKernel& f, double b, const SymmetricKernel& g) {
    require_same_space(f, g);
    if (f.degree() != g.degree()) throw DomainError("linear combination of kernels with different degrees");
    std::vector<double> out(f.entries());
    for (std::size_t x = 0; x < out.size(); ++x) out[x] = a * f[x] + b * g[x];
    return SymmetricKernel::trusted(f.space(), f.degree(), std::move(out));
}

double max_abs_difference(const SymmetricKernel& f, const SymmetricKernel& g) {
    require_same_space(f, g);
    if (f.degree() != g.degree()) throw DomainError("kernel degrees differ");
    double worst = 0.0;
    for (std::size_t x = 0; x < f.entries(); ++x) worst = std::max(worst, std::abs(f[x] - g[x]));
    return worst;
}

double symmetry_defect(std::span<const double> values, std::size_t points, int degree) {
    // Adjacent transpositions generate the symmetric group.
    if (degree < 2) return 0.0;
    const auto n = static_cast<std::size_t>(degree);
    std::vector<std::size_t> stride(n);
    for (std::size_t s = 0; s < n; ++s) stride[s] = int_pow(points, degree - 1 - static_cast<int>(s));
    double worst = 0.0;
    std::vector<std::size_t> tuple(n, 0);
    for (std::size_t flat = 0; flat < values.size(); ++flat) {
        for (std::size_t s = 0; s + 1 < n; ++s) {
            if (tuple[s] < tuple[s + 1]) {
                const auto swapped = flat + (tuple[s + 1] - tuple[s]) * stride[s] - (tuple[s + 1] - tuple[s]) * stride[s + 1];
                const double scale = std::max(1.0, std::abs(values[flat]));
                worst = std::max(worst, std::abs(values[flat] - values[swapped]) / scale);
            }
        }
        for (std::size_t s = n; s-- > 0;) {
            if (++tuple[s] < points) break;
            tuple[s] = 0;
        }
    }
    return worst;
}

SymmetricKernel symmetrize(std::span<const double> values, SpacePtr space, int degree) {
    if (!space) throw DomainError("kernel needs a state space");
    const auto count = space->entries(degree);
    if (values.size() != count) throw DomainError("value count does not match |points|^degree");
    if (degree < 2) return SymmetricKernel::trusted(space, degree, {values.begin(), values.end()});

    // Average over each orbit of the slot-permutation action. Distinct
    // arrangements of a multiset each occur equally often among the n!
    // permutations, so the orbit mean equals the full permutation average.
    const auto points = space->size();
    std::vector<double> out(count, 0.0);
    std::vector<std::size_t> arrangement;
    for_each_sorted_tuple(points, degree, [&](const std::vector<std::size_t>& sorted) {
        double sum = 0.0;
        std::size_t orbit = 0;
        arrangement = sorted;
        do {
            sum += values[encode(arrangement, points)];
            ++orbit;
        } while (std::next_permutation(arrangement.begin(), arrangement.end()));
        const double mean = sum / static_cast<double>(orbit);
        arrangement = sorted;
        do {
            out[encode(arrangement, points)] = mean;
        } while (std::next_permutation(arrangement.begin(), arrangement.end()));
    });
    return SymmetricKernel::trusted(std::move(space), degree, std::move(out));
}

SymmetricKernel tensor(const SymmetricKernel& f, const SymmetricKernel& g) {
    require_same_space(f, g);
    const int degree = f.degree() + g.degree();
    const auto count = f.space()->entries(degree);
    std::vector<double> raw;
    raw.reserve(count);
    for (std::size_t x = 0; x < f.entries(); ++x) {
        for (std::size_t y = 0; y < g.entries(); ++y) raw.push_back(f[x] * g[y]);
    }
    return symmetrize(raw, f.space(), degree);
}

double inner(const SymmetricKernel& f, const SymmetricKernel& g) {
    require_same_space(f, g);
    if (f.degree() != g.degree()) throw DomainError("inner product of kernels with different degrees");
    const auto w = weight_products(*f.space(), f.degree());
    double sum = 0.0;
    for (std::size_t x = 0; x < f.entries(); ++x) sum += f[x] * g[x] * w[x];
    return sum;
}

double norm_squared(const SymmetricKernel& f) { return inner(f, f); }

// --- contractions ------------------------------------------------------------------

SymmetricKernel apply_contraction_pattern(std::span<const SymmetricKernel> factors, const PairedMultiIndex& pm) {
    return apply_contraction_pattern(factors, pm, {});
}

SymmetricKernel apply_contraction_pattern(std::span<const SymmetricKernel> factors, const PairedMultiIndex& pm,
                                          std::span<const std::vector<std::size_t>> slot_orders) {
    require_common_space(factors);
    const int m = static_cast<int>(factors.size());
    if (pm.m() != m) throw DomainError("multi-index is for a different factor count");
    if (!slot_orders.empty() && slot_orders.size() != factors.size()) {
        throw DomainError("need one slot order per factor");
    }
    std::vector<int> degrees;
    for (const auto& f : factors) degrees.push_back(f.degree());
    const DegreeVector q(degrees);
    if (!is_admissible(q, pm)) throw DomainError("contraction pattern is not admissible for the factor degrees");

    const auto& space = factors.front().space();
    const auto points = space->size();
    const auto mk = static_cast<std::size_t>(m);

    // Canonical allocation per factor: integrated groups, then live groups,
    // then free slots. Output slots: live groups first, then free slots by factor.
    std::vector<std::vector<SlotRole>> integrated_roles(mk), live_roles(mk), free_roles(mk);
    std::size_t out_slots = 0;
    std::size_t integrated_vars = 0;
    if (m >= 2) {
        const auto& subsets = upsilon(m);
        for (std::size_t p = 0; p < subsets.size(); ++p) {
            for (int copy = 0; copy < pm.l()[p]; ++copy) {
                for (int k : subsets[p].members()) {
                    integrated_roles[static_cast<std::size_t>(k - 1)].push_back({true, integrated_vars});
                }
                ++integrated_vars;
            }
        }
        for (std::size_t p = 0; p < subsets.size(); ++p) {
            for (int copy = 0; copy < pm.n()[p]; ++copy) {
                for (int k : subsets[p].members()) {
                    live_roles[static_cast<std::size_t>(k - 1)].push_back({false, out_slots});
                }
                ++out_slots;
            }
        }
    }
    for (std::size_t k = 0; k < mk; ++k) {
        const auto used = integrated_roles[k].size() + live_roles[k].size();
        for (auto s = used; s < static_cast<std::size_t>(degrees[k]); ++s) free_roles[k].push_back({false, out_slots++});
    }
    const int out_degree = static_cast<int>(out_slots);
    const auto out_count = space->entries(out_degree);
    const int contracted = static_cast<int>(integrated_vars);

    // Flat-index contribution of each output slot / integrated variable per factor.
    std::vector<std::vector<std::size_t>> y_coef(mk, std::vector<std::size_t>(out_slots, 0));
    std::vector<std::vector<std::size_t>> z_coef(mk, std::vector<std::size_t>(integrated_vars, 0));
    for (std::size_t k = 0; k < mk; ++k) {
        std::vector<SlotRole> roles = integrated_roles[k];
        roles.insert(roles.end(), live_roles[k].begin(), live_roles[k].end());
        roles.insert(roles.end(), free_roles[k].begin(), free_roles[k].end());
        const auto q_k = roles.size();
        std::vector<std::size_t> order(q_k);
        std::iota(order.begin(), order.end(), std::size_t{0});
        if (!slot_orders.empty()) {
            order = slot_orders[k];
            auto check = order;
            std::sort(check.begin(), check.end());
            if (check.size() != q_k) throw DomainError("slot order has the wrong length");
            for (std::size_t s = 0; s < q_k; ++s) {
                if (check[s] != s) throw DomainError("slot order is not a permutation");
            }
        }
        for (std::size_t s = 0; s < q_k; ++s) {
            const auto stride = int_pow(points, static_cast<int>(q_k - 1 - s));
            const auto& role = roles[order[s]];
            (role.integrated ? z_coef[k] : y_coef[k])[role.index] += stride;
        }
    }

    // Tabulate integrated-variable offsets and weights once.
    const auto z_count = int_pow(points, contracted);
    std::vector<double> z_weight(z_count, 1.0);
    std::vector<std::vector<std::size_t>> z_offset(mk, std::vector<std::size_t>(z_count, 0));
    {
        std::vector<std::size_t> z(integrated_vars, 0);
        for (std::size_t flat = 0; flat < z_count; ++flat) {
            for (std::size_t e = 0; e < integrated_vars; ++e) {
                z_weight[flat] *= space->weight(z[e]);
                for (std::size_t k = 0; k < mk; ++k) z_offset[k][flat] += z[e] * z_coef[k][e];
            }
            for (std::size_t e = integrated_vars; e-- > 0;) {
                if (++z[e] < points) break;
                z[e] = 0;
            }
        }
    }

    std::vector<double> raw(out_count, 0.0);
    std::vector<std::size_t> y(out_slots, 0);
    std::vector<std::size_t> base(mk);
    for (std::size_t flat = 0; flat < out_count; ++flat) {
        for (std::size_t k = 0; k < mk; ++k) {
            base[k] = 0;
            for (std::size_t d = 0; d < out_slots; ++d) base[k] += y[d] * y_coef[k][d];
        }
        double sum = 0.0;
        for (std::size_t zf = 0; zf < z_count; ++zf) {
            double prod = z_weight[zf];
            for (std::size_t k = 0; k < mk; ++k) prod *= factors[k][base[k] + z_offset[k][zf]];
            sum += prod;
        }
        raw[flat] = sum;
        for (std::size_t d = out_slots; d-- > 0;) {
            if (++y[d] < points) break;
            y[d] = 0;
        }
    }
    return symmetrize(raw, space, out_degree);
}

SymmetricKernel contract_integrated(std::span<const SymmetricKernel> factors, const SubsetIndex& subset, int mu) {
    const int m = static_cast<int>(factors.size());
    if (subset.size() < 2) throw DomainError("integrated contraction needs |i| >= 2");
    if (subset.members().back() > m) throw DomainError("subset refers to a missing factor");
    if (mu < 0) throw DomainError("negative contraction order");
    for (int k : subset.members()) {
        if (mu > factors[static_cast<std::size_t>(k - 1)].degree()) {
            throw DomainError("contraction order exceeds a factor degree");
        }
    }
    PairedMultiIndex pm(m);
    pm.set_l(subset, mu);
    return apply_contraction_pattern(factors, pm);
}

SymmetricKernel identify_diagonal(std::span<const SymmetricKernel> factors, const SubsetIndex& subset, int nu) {
    const int m = static_cast<int>(factors.size());
    if (subset.size() == 0) throw DomainError("empty subset");
    if (subset.members().back() > m) throw DomainError("subset refers to a missing factor");
    if (nu < 0) throw DomainError("negative identification order");
    for (int k : subset.members()) {
        if (nu > factors[static_cast<std::size_t>(k - 1)].degree()) {
            throw DomainError("identification order exceeds a factor degree");
        }
    }
    PairedMultiIndex pm(m);
    if (subset.size() >= 2) pm.set_n(subset, nu);
    return apply_contraction_pattern(factors, pm);
}

SymmetricKernel pair_contraction(const SymmetricKernel& f, const SymmetricKernel& g, int k, int l) {
    require_same_space(f, g);
    const int n = f.degree();
    const int m = g.degree();
    if (k < 0 || l < 0 || k + l > std::min(n, m)) throw DomainError("pair contraction needs k + l <= min(n, m)");
    const auto& space = f.space();
    const auto points = space->size();
    const int f_free = n - k - l;
    const int g_free = m - k - l;
    const int out_degree = k + f_free + g_free;
    const auto out_count = space->entries(out_degree);
    const auto t_count = int_pow(points, l);
    const auto w = weight_products(*space, l);

    // f(shared, f_free, t) g(shared, g_free, t)
    const auto shared_block = int_pow(points, f_free + g_free);
    const auto g_block = int_pow(points, g_free);
    std::vector<double> raw(out_count, 0.0);
    for (std::size_t out = 0; out < out_count; ++out) {
        const auto shared = out / shared_block;
        const auto rest = out % shared_block;
        const auto fx = rest / g_block;
        const auto gx = rest % g_block;
        const auto f_prefix = (shared * int_pow(points, f_free) + fx) * t_count;
        const auto g_prefix = (shared * int_pow(points, g_free) + gx) * t_count;
        double sum = 0.0;
        for (std::size_t t = 0; t < t_count; ++t) sum += w[t] * f[f_prefix + t] * g[g_prefix + t];
        raw[out] = sum;
    }
    return symmetrize(raw, space, out_degree);
}

}  // namespace levychaos
