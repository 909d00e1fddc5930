#include "levychaos/levy.hpp"

#include "json_util.hpp"
#include "levychaos/combinatorics.hpp"
#include "levychaos/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace levychaos {

using nlohmann::json;

std::uint64_t Rng::poisson(double mean) {
    if (!(mean >= 0.0) || mean > 700.0) {
        throw ResourceError("poisson_mean", "Poisson mean must lie in [0, 700], got " + std::to_string(mean));
    }
    const double u = uniform();
    double p = std::exp(-mean);
    double cdf = p;
    std::uint64_t k = 0;
    while (u >= cdf) {
        ++k;
        p *= mean / static_cast<double>(k);
        if (p == 0.0) break;  // cdf has saturated below 1 by rounding; u sits in the lost tail
        cdf += p;
    }
    return k;
}

// --- JumpPath ------------------------------------------------------------------

JumpPath::JumpPath(SpacePtr space, std::vector<Atom> atoms, std::uint64_t seed)
    : space_(std::move(space)), atoms_(std::move(atoms)), seed_(seed) {
    if (!space_) throw DomainError("path needs a state space");
    const double horizon = space_->grid().horizon();
    for (std::size_t a = 0; a < atoms_.size(); ++a) {
        const auto& atom = atoms_[a];
        if (!(atom.time > 0.0) || atom.time > horizon) throw DomainError("atom time outside (0, T]");
        if (atom.mark >= space_->measure().size()) throw DomainError("atom mark index out of range");
        if (a > 0 && !(atom.time > atoms_[a - 1].time)) throw DomainError("atom times must be strictly increasing");
    }
}

std::size_t JumpPath::point(std::size_t a) const {
    const auto& atom = atoms_.at(a);
    return space_->point(space_->grid().cell_of(atom.time), atom.mark);
}

JumpPath simulate_path(SpacePtr space, std::uint64_t seed) {
    if (!space) throw DomainError("path needs a state space");
    Rng rng(splitmix64(seed));
    const double horizon = space->grid().horizon();
    const auto draw_time = [&] { return horizon * (1.0 - rng.uniform()); };  // (0, T]

    std::vector<Atom> atoms;
    const auto& marks = space->measure().marks();
    for (std::size_t j = 0; j < marks.size(); ++j) {
        const auto count = rng.poisson(horizon * marks[j].rate);
        for (std::uint64_t c = 0; c < count; ++c) atoms.push_back({draw_time(), j});
    }
    const auto by_time = [](const Atom& a, const Atom& b) { return a.time < b.time; };
    std::sort(atoms.begin(), atoms.end(), by_time);
    for (bool clash = true; clash;) {
        clash = false;
        for (std::size_t a = 1; a < atoms.size(); ++a) {
            if (atoms[a].time == atoms[a - 1].time) {
                atoms[a].time = draw_time();
                clash = true;
            }
        }
        if (clash) std::sort(atoms.begin(), atoms.end(), by_time);
    }
    return JumpPath(std::move(space), std::move(atoms), seed);
}

json path_to_json(const JumpPath& path) {
    json atoms = json::array();
    for (const auto& a : path.atoms()) atoms.push_back({{"t", a.time}, {"mark", a.mark}});
    return {{"seed", path.seed()}, {"atoms", atoms}};
}

JumpPath path_from_json(const json& doc, SpacePtr space) {
    using namespace detail;
    const std::uint64_t seed = doc.contains("seed") ? as_seed(doc["seed"], "/seed") : 0;
    const auto& list = as_array(require(doc, "atoms", ""), "/atoms");
    std::vector<Atom> atoms;
    for (std::size_t a = 0; a < list.size(); ++a) {
        const auto p = child("/atoms", a);
        const double t = as_number(require(list[a], "t", p), child(p, "t"));
        const auto mark = as_integer(require(list[a], "mark", p), child(p, "mark"));
        if (mark < 0) throw ConfigError(child(p, "mark"), "must be >= 0");
        atoms.push_back({t, static_cast<std::size_t>(mark)});
    }
    try {
        return JumpPath(std::move(space), std::move(atoms), seed);
    } catch (const DomainError& e) {
        throw ConfigError("/atoms", e.what());
    }
}

// --- MultipleIntegral ----------------------------------------------------------------

MultipleIntegral::MultipleIntegral(SymmetricKernel f, double max_tuple_work)
    : kernel_(std::move(f)), max_tuple_work_(max_tuple_work) {
    const int n = kernel_.degree();
    const auto& space = *kernel_.space();
    const auto points = space.size();
    reduced_.resize(static_cast<std::size_t>(n) + 1);
    reduced_[static_cast<std::size_t>(n)] = kernel_.values();
    for (int j = n - 1; j >= 0; --j) {
        const auto& upper = reduced_[static_cast<std::size_t>(j) + 1];
        auto& lower = reduced_[static_cast<std::size_t>(j)];
        lower.assign(upper.size() / points, 0.0);
        for (std::size_t x = 0; x < lower.size(); ++x) {
            double sum = 0.0;
            for (std::size_t p = 0; p < points; ++p) sum += upper[x * points + p] * space.weight(p);
            lower[x] = sum;
        }
    }
    signed_binomial_.resize(static_cast<std::size_t>(n) + 1);
    double binom = 1.0;  // C(n, j)
    for (int j = 0; j <= n; ++j) {
        signed_binomial_[static_cast<std::size_t>(j)] = ((n - j) % 2 == 0 ? 1.0 : -1.0) * binom;
        binom = binom * (n - j) / (j + 1);
    }
}

double MultipleIntegral::operator()(const JumpPath& path) const {
    const auto& space = *kernel_.space();
    if (!(*path.space() == space)) throw DomainError("path and kernel live on different state spaces");
    const int n = kernel_.degree();
    if (n == 0) return kernel_.values().front();

    std::vector<std::size_t> occupied;
    std::vector<double> remaining(space.size(), 0.0);
    for (std::size_t a = 0; a < path.size(); ++a) {
        const auto p = path.point(a);
        if (remaining[p] == 0.0) occupied.push_back(p);
        remaining[p] += 1.0;
    }
    std::sort(occupied.begin(), occupied.end());
    if (std::pow(static_cast<double>(occupied.size()), n) > max_tuple_work_) {
        throw ResourceError("atom_tuple_work", "path with " + std::to_string(occupied.size()) +
                                                   " occupied points exceeds the tuple-work cap for degree " +
                                                   std::to_string(n));
    }

    // sums[j] = sum over ordered distinct atom j-tuples of reduced_[j]; atoms at
    // the same point are interchangeable, so each point step is weighted by the
    // number of its atoms not yet used.
    std::vector<double> sums(static_cast<std::size_t>(n) + 1, 0.0);
    sums[0] = reduced_[0][0];
    const auto points = space.size();
    std::function<void(std::size_t, std::size_t, double)> visit = [&](std::size_t depth, std::size_t prefix, double count) {
        for (auto p : occupied) {
            const double left = remaining[p];
            if (left == 0.0) continue;
            const double weight = count * left;
            const auto index = prefix * points + p;
            sums[depth + 1] += weight * reduced_[depth + 1][index];
            if (depth + 1 < static_cast<std::size_t>(n)) {
                remaining[p] = left - 1.0;
                visit(depth + 1, index, weight);
                remaining[p] = left;
            }
        }
    };
    visit(0, 0, 1.0);

    double result = 0.0;
    for (int j = 0; j <= n; ++j) result += signed_binomial_[static_cast<std::size_t>(j)] * sums[static_cast<std::size_t>(j)];
    return result;
}

double eval_multiple_integral(const SymmetricKernel& f, const JumpPath& path) { return MultipleIntegral(f)(path); }

// --- exponential functional ----------------------------------------------------------

namespace {

SymmetricKernel expm1_of(const SymmetricKernel& rho) {
    std::vector<double> out(rho.values());
    for (auto& v : out) v = std::expm1(v);
    return SymmetricKernel::trusted(rho.space(), 1, std::move(out));
}

}  // namespace

ExponentialSpec::ExponentialSpec(SymmetricKernel rho) : rho_(std::move(rho)), expm1_rho_(expm1_of(rho_)) {
    if (rho_.degree() != 1) throw DomainError("rho must be a degree-1 kernel");
    for (double v : expm1_rho_.values()) {
        if (!std::isfinite(v)) throw NonFiniteError("e^rho overflows");
    }
}

double eval_exponential_functional(const ExponentialSpec& spec, const JumpPath& path) {
    const auto& space = *spec.rho().space();
    if (!(*path.space() == space)) throw DomainError("path and rho live on different state spaces");
    double exponent = 0.0;
    for (std::size_t a = 0; a < path.size(); ++a) exponent += spec.rho()[path.point(a)];
    for (std::size_t p = 0; p < space.size(); ++p) {
        const double r = spec.rho()[p];
        exponent -= r * space.weight(p);
        exponent -= (spec.expm1_rho()[p] - r) * space.weight(p);
    }
    const double value = std::exp(exponent);
    if (!std::isfinite(value)) throw NonFiniteError("exponential functional overflowed (exponent " + std::to_string(exponent) + ")");
    return value;
}

SymmetricKernel exponential_chaos_kernel(const ExponentialSpec& spec, int n) {
    if (n < 0) throw DomainError("negative chaos order");
    const auto& space = spec.rho().space();
    const auto entries = space->entries(n);
    const auto& h = spec.expm1_rho().values();
    std::vector<double> values(1, 1.0);
    values.reserve(entries);
    for (int d = 0; d < n; ++d) {
        std::vector<double> next;
        next.reserve(values.size() * h.size());
        for (double v : values) {
            for (double hp : h) next.push_back(v * hp);
        }
        values = std::move(next);
    }
    return SymmetricKernel::trusted(space, n, std::move(values));
}

TruncatedChaos::TruncatedChaos(const ExponentialSpec& spec, int order, double max_tuple_work) {
    if (order < 0) throw DomainError("negative truncation order");
    for (int n = 0; n <= order; ++n) evaluators_.emplace_back(exponential_chaos_kernel(spec, n), max_tuple_work);
}

std::vector<double> TruncatedChaos::partial_sums(const JumpPath& path) const {
    std::vector<double> sums;
    double running = 0.0;
    double inv_factorial = 1.0;
    for (std::size_t n = 0; n < evaluators_.size(); ++n) {
        if (n > 0) inv_factorial /= static_cast<double>(n);
        running += inv_factorial * evaluators_[n](path);
        sums.push_back(running);
    }
    return sums;
}

double eval_truncated_chaos(const ExponentialSpec& spec, const JumpPath& path, int order) {
    return TruncatedChaos(spec, order)(path);
}

}  // namespace levychaos
