#pragma once

// Product of multiple Poisson integrals as a sum of single multiple integrals:
//
//   prod_k I_{q_k}(f_k) = sum_{(l,n) admissible} c(q,l,n) I_{d(q,l,n)}(K_{l,n}(f_1..f_m))
//
// with c = term_coefficient, d = term_degree and K = apply_contraction_pattern.

#include "levychaos/combinatorics.hpp"
#include "levychaos/kernelspace.hpp"

#include <map>
#include <span>
#include <vector>

namespace levychaos {

struct ExpansionTerm {
    BigInt coefficient;
    int degree = 0;
    SymmetricKernel kernel;
    /// Indexes the reduced factor list (see Expansion::active_factors).
    PairedMultiIndex provenance;
};

struct Expansion {
    /// Degrees of every input factor, scalars included.
    DegreeVector q;
    /// 0-based positions of the factors with degree >= 1; `provenance` refers
    /// to these in order. Degree-0 factors are folded into the term kernels.
    std::vector<std::size_t> active_factors;
    std::vector<ExpansionTerm> terms;

    /// Degrees of the active factors.
    DegreeVector reduced_q() const;
};

Expansion expand_product(std::span<const SymmetricKernel> factors);

/// Two-factor path: terms over k + l <= min(n, m), provenance n_{12} = k, l_{12} = l.
Expansion expand_pair(const SymmetricKernel& f, const SymmetricKernel& g);

/// (k, l) = (n_{12}, l_{12}) of a two-factor provenance; (0, 0) for reduced expansions.
std::pair<int, int> pair_indices(const PairedMultiIndex& pm);

/// Sum of coefficient * value over degree-0 terms; equals E[prod I_{q_k}(f_k)].
double expected_value(const Expansion& e);

/// Sums coefficient * kernel over terms of equal degree.
std::map<int, SymmetricKernel> merge_by_degree(const Expansion& e);

}  // namespace levychaos
