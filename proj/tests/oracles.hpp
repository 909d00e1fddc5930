#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library routine it is used to check.

#include "levychaos/combinatorics.hpp"
#include "levychaos/kernelspace.hpp"
#include "levychaos/levy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <vector>

namespace levychaos::oracle {

inline std::size_t ipow(std::size_t b, int e) {
    std::size_t r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

inline std::vector<std::size_t> decode(std::size_t flat, std::size_t points, int degree) {
    std::vector<std::size_t> t(static_cast<std::size_t>(degree));
    for (int s = degree - 1; s >= 0; --s) {
        t[static_cast<std::size_t>(s)] = flat % points;
        flat /= points;
    }
    return t;
}

inline std::size_t encode(const std::vector<std::size_t>& t, std::size_t points) {
    std::size_t f = 0;
    for (auto x : t) f = f * points + x;
    return f;
}

/// Average over all n! slot permutations, one permutation at a time.
inline std::vector<double> symmetrize_all_permutations(const std::vector<double>& values, std::size_t points, int degree) {
    std::vector<double> out(values.size(), 0.0);
    std::vector<std::size_t> perm(static_cast<std::size_t>(degree));
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double count = 0;
    do {
        for (std::size_t flat = 0; flat < values.size(); ++flat) {
            const auto x = decode(flat, points, degree);
            std::vector<std::size_t> y(x.size());
            for (std::size_t s = 0; s < x.size(); ++s) y[s] = x[perm[s]];
            out[flat] += values[encode(y, points)];
        }
        count += 1;
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (auto& v : out) v /= count;
    return out;
}

/// Kernel with i.i.d. uniform entries, symmetrized by the full permutation average.
inline SymmetricKernel random_symmetric(const SpacePtr& space, int degree, std::mt19937_64& gen, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<double> v(ipow(space->size(), degree));
    for (auto& x : v) x = u(gen);
    if (degree >= 2) v = symmetrize_all_permutations(v, space->size(), degree);
    return SymmetricKernel(space, degree, v);
}

/// I_n(f) by enumerating ordered tuples of pairwise distinct atoms and
/// integrating the remaining slots by a plain sum over points.
inline double naive_multiple_integral(const SymmetricKernel& f, const JumpPath& path) {
    const int n = f.degree();
    const auto& space = *f.space();
    const auto P = path.size();
    const auto points = space.size();
    double total = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= n; ++j) {
        const double sign = ((n - j) % 2 == 0) ? 1.0 : -1.0;
        double sum_j = 0.0;
        const auto tuples = ipow(P, j);
        for (std::size_t a = 0; a < tuples; ++a) {
            auto atoms = decode(a, P == 0 ? 1 : P, j);
            std::set<std::size_t> distinct(atoms.begin(), atoms.end());
            if (distinct.size() != atoms.size()) continue;
            const auto rest = ipow(points, n - j);
            for (std::size_t y = 0; y < rest; ++y) {
                auto ys = decode(y, points, n - j);
                std::vector<std::size_t> args;
                for (auto at : atoms) args.push_back(path.point(at));
                double w = 1.0;
                for (auto p : ys) {
                    args.push_back(p);
                    w *= space.weight(p);
                }
                sum_j += f.at(args) * w;
            }
        }
        total += sign * binom * sum_j;
        binom = binom * (n - j) / (j + 1);
    }
    return total;
}

/// Every (l, n) with chi(k) <= q_k, by unpruned enumeration. For m <= 3 the box
/// is over every l_i and n_i; for larger m it is over s_i = l_i + n_i (chi only
/// depends on s) and each admissible s is split into all (l_i, n_i).
inline std::set<std::pair<std::vector<int>, std::vector<int>>> brute_force_admissible(const std::vector<int>& q) {
    const int m = static_cast<int>(q.size());
    std::vector<std::vector<int>> subsets;
    for (std::uint32_t mask = 1; mask < (1U << m); ++mask) {
        if (__builtin_popcount(mask) < 2) continue;
        std::vector<int> s;
        for (int k = 0; k < m; ++k) {
            if (mask >> k & 1U) s.push_back(k);
        }
        subsets.push_back(s);
    }
    // the library's canonical order: size, then lexicographic
    std::sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    const auto K = subsets.size();
    std::vector<int> bound(K);
    for (std::size_t i = 0; i < K; ++i) {
        int b = 1 << 20;
        for (int k : subsets[i]) b = std::min(b, q[static_cast<std::size_t>(k)]);
        bound[i] = b;
    }
    const auto fits = [&](const std::vector<int>& s) {
        std::vector<int> used(static_cast<std::size_t>(m), 0);
        for (std::size_t i = 0; i < K; ++i) {
            for (int k : subsets[i]) used[static_cast<std::size_t>(k)] += s[i];
        }
        for (int k = 0; k < m; ++k) {
            if (used[static_cast<std::size_t>(k)] > q[static_cast<std::size_t>(k)]) return false;
        }
        return true;
    };

    std::set<std::pair<std::vector<int>, std::vector<int>>> out;
    if (m <= 3) {
        std::vector<int> v(2 * K, 0);
        while (true) {
            std::vector<int> s(K);
            for (std::size_t i = 0; i < K; ++i) s[i] = v[i] + v[K + i];
            if (fits(s)) out.insert({std::vector<int>(v.begin(), v.begin() + static_cast<long>(K)),
                                     std::vector<int>(v.begin() + static_cast<long>(K), v.end())});
            std::size_t pos = 2 * K;
            while (pos-- > 0) {
                if (++v[pos] <= bound[pos % K]) break;
                v[pos] = 0;
            }
            if (pos == static_cast<std::size_t>(-1)) break;
        }
        return out;
    }
    std::vector<int> s(K, 0);
    while (true) {
        if (fits(s)) {
            std::vector<int> split(K, 0);  // l_i in [0, s_i]
            while (true) {
                std::vector<int> l(K), n(K);
                for (std::size_t i = 0; i < K; ++i) {
                    l[i] = split[i];
                    n[i] = s[i] - split[i];
                }
                out.insert({l, n});
                std::size_t pos = K;
                while (pos-- > 0) {
                    if (++split[pos] <= s[pos]) break;
                    split[pos] = 0;
                }
                if (pos == static_cast<std::size_t>(-1)) break;
            }
        }
        std::size_t pos = K;
        while (pos-- > 0) {
            if (++s[pos] <= bound[pos]) break;
            s[pos] = 0;
        }
        if (pos == static_cast<std::size_t>(-1)) break;
    }
    return out;
}

/// prod_k multinomial(q_k; {l_i, n_i : i contains k}, q_k - chi_k) * prod_i (l_i! n_i!)^{|i|-1}
inline BigInt coefficient_by_multinomials(const std::vector<int>& q, const PairedMultiIndex& pm) {
    const int m = static_cast<int>(q.size());
    const auto& subsets = upsilon(m);
    const auto fact = [](int n) {
        BigInt r = 1;
        for (int v = 2; v <= n; ++v) r *= v;
        return r;
    };
    BigInt result = 1;
    for (int k = 1; k <= m; ++k) {
        BigInt denom = 1;
        int used = 0;
        for (std::size_t p = 0; p < subsets.size(); ++p) {
            if (!subsets[p].contains(k)) continue;
            denom *= fact(pm.l()[p]) * fact(pm.n()[p]);
            used += pm.l()[p] + pm.n()[p];
        }
        denom *= fact(q[static_cast<std::size_t>(k - 1)] - used);
        result *= fact(q[static_cast<std::size_t>(k - 1)]) / denom;
    }
    for (std::size_t p = 0; p < subsets.size(); ++p) {
        const auto extra = static_cast<int>(subsets[p].size()) - 1;
        for (int e = 0; e < extra; ++e) result *= fact(pm.l()[p]) * fact(pm.n()[p]);
    }
    return result;
}


/// Contraction pattern by direct summation. Each factor takes its free slots
/// first, then live groups, then integrated groups (the reverse of the
/// library's allocation). The result is averaged over all output permutations,
/// so the output slot order does not matter.
inline std::vector<double> contraction_by_summation(const std::vector<SymmetricKernel>& factors, const PairedMultiIndex& pm) {
    const int m = static_cast<int>(factors.size());
    const auto& space = *factors.front().space();
    const auto points = space.size();
    std::vector<std::vector<int>> subsets;
    if (m >= 2) {
        for (const auto& s : upsilon(m)) subsets.push_back(s.members());
    }
    // per factor: list of (kind, index); kind 0 = output slot, 1 = integrated variable
    std::vector<std::vector<std::pair<int, std::size_t>>> roles(static_cast<std::size_t>(m));
    std::vector<std::vector<std::pair<int, std::size_t>>> live(static_cast<std::size_t>(m)), integ(static_cast<std::size_t>(m));
    std::size_t n_int = 0, n_live = 0;
    for (std::size_t p = 0; p < subsets.size(); ++p) {
        for (int c = 0; c < pm.l()[p]; ++c, ++n_int) {
            for (int k : subsets[p]) integ[static_cast<std::size_t>(k - 1)].push_back({1, n_int});
        }
        for (int c = 0; c < pm.n()[p]; ++c, ++n_live) {
            for (int k : subsets[p]) live[static_cast<std::size_t>(k - 1)].push_back({0, n_live});
        }
    }
    std::size_t out = n_live;
    for (int k = 0; k < m; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        const auto used = live[uk].size() + integ[uk].size();
        for (auto s = used; s < static_cast<std::size_t>(factors[uk].degree()); ++s) roles[uk].push_back({0, out++});
        roles[uk].insert(roles[uk].end(), live[uk].begin(), live[uk].end());
        roles[uk].insert(roles[uk].end(), integ[uk].begin(), integ[uk].end());
    }
    const int out_degree = static_cast<int>(out);
    std::vector<double> raw(ipow(points, out_degree), 0.0);
    for (std::size_t yf = 0; yf < raw.size(); ++yf) {
        const auto y = decode(yf, points, out_degree);
        for (std::size_t zf = 0; zf < ipow(points, static_cast<int>(n_int)); ++zf) {
            const auto z = decode(zf, points, static_cast<int>(n_int));
            double prod = 1.0;
            for (auto zi : z) prod *= space.weight(zi);
            for (int k = 0; k < m; ++k) {
                std::vector<std::size_t> args;
                for (const auto& [kind, idx] : roles[static_cast<std::size_t>(k)]) args.push_back(kind == 0 ? y[idx] : z[idx]);
                prod *= factors[static_cast<std::size_t>(k)].at(args);
            }
            raw[yf] += prod;
        }
    }
    if (out_degree >= 2) raw = symmetrize_all_permutations(raw, points, out_degree);
    return raw;
}

}  // namespace levychaos::oracle
