#include "levychaos/expansion.hpp"

#include "levychaos/errors.hpp"

#include <algorithm>

namespace levychaos {

namespace {

void check_shared_space(std::span<const SymmetricKernel> factors) {
    for (const auto& f : factors) {
        if (!same_space(factors.front(), f)) throw DomainError("factors live on different state spaces");
    }
}

}  // namespace

DegreeVector Expansion::reduced_q() const {
    std::vector<int> degrees;
    for (auto k : active_factors) degrees.push_back(q.values()[k]);
    if (degrees.empty()) degrees.push_back(0);
    return DegreeVector(std::move(degrees));
}

Expansion expand_product(std::span<const SymmetricKernel> factors) {
    if (factors.empty()) throw DomainError("expand_product needs at least one factor");
    check_shared_space(factors);

    Expansion e;
    std::vector<int> degrees;
    double scalar = 1.0;
    std::vector<SymmetricKernel> active;
    for (std::size_t k = 0; k < factors.size(); ++k) {
        degrees.push_back(factors[k].degree());
        if (factors[k].degree() == 0) {
            scalar *= factors[k].scalar_value();
        } else {
            e.active_factors.push_back(k);
            active.push_back(factors[k]);
        }
    }
    e.q = DegreeVector(degrees);
    const auto& space = factors.front().space();

    if (active.empty()) {
        e.terms.push_back({1, 0, SymmetricKernel::scalar(space, scalar), PairedMultiIndex(0)});
        return e;
    }
    if (active.size() == 1) {
        const auto& f = active.front();
        e.terms.push_back({1, f.degree(), scalar == 1.0 ? f : f.scaled(scalar), PairedMultiIndex(1)});
        return e;
    }

    const auto q = e.reduced_q();
    AdmissiblePairStream stream(q);
    while (auto pm = stream.next()) {
        auto kernel = apply_contraction_pattern(active, *pm);
        if (scalar != 1.0) kernel = kernel.scaled(scalar);
        const int degree = term_degree(q, *pm);
        e.terms.push_back({term_coefficient(q, *pm), degree, std::move(kernel), std::move(*pm)});
    }
    return e;
}

Expansion expand_pair(const SymmetricKernel& f, const SymmetricKernel& g) {
    if (!same_space(f, g)) throw DomainError("factors live on different state spaces");
    const int n = f.degree();
    const int m = g.degree();
    Expansion e;
    e.q = DegreeVector({n, m});
    e.active_factors = {0, 1};
    const SubsetIndex both({1, 2});
    // Same (l, n) order as AdmissiblePairStream: l outer, n inner.
    for (int l = 0; l <= std::min(n, m); ++l) {
        for (int k = 0; k + l <= std::min(n, m); ++k) {
            BigInt coefficient = factorial(n) * factorial(m);
            coefficient /= factorial(l) * factorial(k) * factorial(n - k - l) * factorial(m - k - l);
            PairedMultiIndex pm(2);
            pm.set_l(both, l);
            pm.set_n(both, k);
            e.terms.push_back({std::move(coefficient), n + m - 2 * l - k, pair_contraction(f, g, k, l), std::move(pm)});
        }
    }
    return e;
}

std::pair<int, int> pair_indices(const PairedMultiIndex& pm) {
    if (pm.m() < 2) return {0, 0};
    if (pm.m() != 2) throw DomainError("pair_indices needs a two-factor multi-index");
    return {pm.n().front(), pm.l().front()};
}

double expected_value(const Expansion& e) {
    double sum = 0.0;
    for (const auto& t : e.terms) {
        if (t.degree == 0) sum += t.coefficient.convert_to<double>() * t.kernel.scalar_value();
    }
    return sum;
}

std::map<int, SymmetricKernel> merge_by_degree(const Expansion& e) {
    std::map<int, SymmetricKernel> merged;
    for (const auto& t : e.terms) {
        const double c = t.coefficient.convert_to<double>();
        auto it = merged.find(t.degree);
        if (it == merged.end()) {
            merged.emplace(t.degree, t.kernel.scaled(c));
        } else {
            it->second = linear_combination(1.0, it->second, c, t.kernel);
        }
    }
    return merged;
}

}  // namespace levychaos
