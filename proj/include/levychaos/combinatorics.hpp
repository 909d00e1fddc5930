#pragma once

// Index sets and exact coefficients for the m-fold product expansion of
// multiple Poisson integrals.
//
// Factor indices are 1-based throughout this header, matching how terms are
// reported: a subset such as (1,3) couples factor 1 with factor 3.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace levychaos {

using BigInt = boost::multiprecision::cpp_int;

/// Largest factor count supported by the subset machinery (2^m subsets are tabulated).
inline constexpr int kMaxFactors = 12;

/// Strictly increasing list of 1-based factor indices.
class SubsetIndex {
public:
    SubsetIndex() = default;
    explicit SubsetIndex(std::vector<int> members);

    const std::vector<int>& members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    bool contains(int k) const noexcept;
    /// Bit k-1 set for every member k.
    std::uint32_t mask() const noexcept;
    /// "1,2,3"
    std::string to_string() const;

    friend bool operator==(const SubsetIndex&, const SubsetIndex&) = default;
    friend auto operator<=>(const SubsetIndex&, const SubsetIndex&) = default;

private:
    std::vector<int> members_;
};

/// Every subset of {1..m} with at least two members, ordered by size then
/// lexicographically. Length is 2^m - 1 - m.
std::vector<SubsetIndex> enumerate_upsilon(int m);

/// Cached view of enumerate_upsilon(m); valid for the program lifetime.
const std::vector<SubsetIndex>& upsilon(int m);

/// Position of `subset` within upsilon(m), or nullopt if it is not a member.
std::optional<std::size_t> upsilon_position(int m, const SubsetIndex& subset);

/// Degrees (q_1, ..., q_m) of the factors in a product.
class DegreeVector {
public:
    DegreeVector() = default;
    explicit DegreeVector(std::vector<int> q);

    int m() const noexcept { return static_cast<int>(q_.size()); }
    /// 1-based access.
    int operator[](int k) const { return q_.at(static_cast<std::size_t>(k - 1)); }
    const std::vector<int>& values() const noexcept { return q_; }
    int total() const noexcept;

    friend bool operator==(const DegreeVector&, const DegreeVector&) = default;

private:
    std::vector<int> q_;
};

/// The pair (l, n) of maps Upsilon_m -> Z_+. `l` counts integrated contractions
/// per subset, `n` counts diagonal identifications. Values are stored densely in
/// upsilon(m) order.
class PairedMultiIndex {
public:
    PairedMultiIndex() = default;
    /// All-zero pair for m factors (m >= 0; m < 2 means an empty Upsilon).
    explicit PairedMultiIndex(int m);
    PairedMultiIndex(int m, std::vector<int> l, std::vector<int> n);

    int m() const noexcept { return m_; }
    std::size_t size() const noexcept { return l_.size(); }

    const std::vector<int>& l() const noexcept { return l_; }
    const std::vector<int>& n() const noexcept { return n_; }
    int l(const SubsetIndex& i) const;
    int n(const SubsetIndex& i) const;
    void set_l(const SubsetIndex& i, int value);
    void set_n(const SubsetIndex& i, int value);

    int l_total() const noexcept;
    int n_total() const noexcept;
    bool is_zero() const noexcept;

    friend bool operator==(const PairedMultiIndex&, const PairedMultiIndex&) = default;
    friend auto operator<=>(const PairedMultiIndex&, const PairedMultiIndex&) = default;

private:
    std::size_t position_or_throw(const SubsetIndex& i) const;

    int m_ = 0;
    std::vector<int> l_;
    std::vector<int> n_;
};

/// Number of argument slots of factor k consumed by all contractions and
/// identifications in `pm`: sum over subsets containing k of (l_i + n_i).
int chi(int k, const PairedMultiIndex& pm);

/// True when chi(k, pm) <= q_k for every k.
bool is_admissible(const DegreeVector& q, const PairedMultiIndex& pm);

/// Lazily enumerates every admissible (l, n) for the degree vector q, each
/// exactly once, in lexicographic order of (l in Upsilon order, n in Upsilon
/// order). The all-zero pair comes first. Each stream is independent; create
/// one per worker.
class AdmissiblePairStream {
public:
    explicit AdmissiblePairStream(DegreeVector q);

    std::optional<PairedMultiIndex> next();

private:
    bool advance();

    DegreeVector q_;
    std::vector<std::uint32_t> var_masks_;  // l vars then n vars
    std::vector<int> values_;
    std::vector<int> remaining_;            // q_k - partial chi, 0-based k
    bool started_ = false;
    bool done_ = false;
};

/// Materialized AdmissiblePairStream (m >= 2).
std::vector<PairedMultiIndex> admissible_pairs(const DegreeVector& q);

/// prod q_k! / (prod l_i! prod n_i! prod (q_k - chi_k)!), exactly.
BigInt term_coefficient(const DegreeVector& q, const PairedMultiIndex& pm);

/// Output order |q| + |n| - sum_k chi(k).
int term_degree(const DegreeVector& q, const PairedMultiIndex& pm);

BigInt factorial(int n);

}  // namespace levychaos
