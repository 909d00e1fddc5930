#include "levychaos/combinatorics.hpp"

#include "levychaos/errors.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <sstream>

namespace levychaos {

namespace {

struct UpsilonTable {
    std::vector<SubsetIndex> subsets;
    std::vector<int> position_of_mask;  // -1 when the mask is not in Upsilon
};

UpsilonTable build_table(int m) {
    UpsilonTable table;
    table.subsets = enumerate_upsilon(m);
    table.position_of_mask.assign(std::size_t{1} << m, -1);
    for (std::size_t p = 0; p < table.subsets.size(); ++p) {
        table.position_of_mask[table.subsets[p].mask()] = static_cast<int>(p);
    }
    return table;
}

const UpsilonTable& table_for(int m) {
    static const std::array<UpsilonTable, kMaxFactors + 1> tables = [] {
        std::array<UpsilonTable, kMaxFactors + 1> t;
        for (int k = 2; k <= kMaxFactors; ++k) t[static_cast<std::size_t>(k)] = build_table(k);
        return t;
    }();
    if (m < 2) throw DomainError("Upsilon requires m >= 2, got m = " + std::to_string(m));
    if (m > kMaxFactors) {
        throw ResourceError("max_factors", "m = " + std::to_string(m) + " exceeds the supported " +
                                               std::to_string(kMaxFactors) + " factors");
    }
    return tables[static_cast<std::size_t>(m)];
}

void check_factor_count(int m) {
    if (m < 0 || m > kMaxFactors) {
        throw DomainError("factor count out of range: " + std::to_string(m));
    }
}

}  // namespace

// --- SubsetIndex ---------------------------------------------------------

SubsetIndex::SubsetIndex(std::vector<int> members) : members_(std::move(members)) {
    for (std::size_t a = 0; a < members_.size(); ++a) {
        if (members_[a] < 1 || members_[a] > kMaxFactors) {
            throw DomainError("subset member out of range: " + std::to_string(members_[a]));
        }
        if (a > 0 && members_[a] <= members_[a - 1]) {
            throw DomainError("subset members must be strictly increasing");
        }
    }
}

bool SubsetIndex::contains(int k) const noexcept {
    return std::binary_search(members_.begin(), members_.end(), k);
}

std::uint32_t SubsetIndex::mask() const noexcept {
    std::uint32_t bits = 0;
    for (int k : members_) bits |= std::uint32_t{1} << (k - 1);
    return bits;
}

std::string SubsetIndex::to_string() const {
    std::ostringstream out;
    for (std::size_t a = 0; a < members_.size(); ++a) {
        if (a) out << ',';
        out << members_[a];
    }
    return out.str();
}

std::vector<SubsetIndex> enumerate_upsilon(int m) {
    if (m < 2) throw DomainError("Upsilon requires m >= 2, got m = " + std::to_string(m));
    if (m > kMaxFactors) {
        throw ResourceError("max_factors", "m = " + std::to_string(m) + " exceeds the supported " +
                                               std::to_string(kMaxFactors) + " factors");
    }
    std::vector<SubsetIndex> out;
    out.reserve((std::size_t{1} << m) - 1 - static_cast<std::size_t>(m));
    for (int size = 2; size <= m; ++size) {
        // combinations of {1..m} of the given size, lexicographic
        std::vector<int> combo(static_cast<std::size_t>(size));
        std::iota(combo.begin(), combo.end(), 1);
        while (true) {
            out.emplace_back(combo);
            int pos = size - 1;
            while (pos >= 0 && combo[static_cast<std::size_t>(pos)] == m - size + pos + 1) --pos;
            if (pos < 0) break;
            ++combo[static_cast<std::size_t>(pos)];
            for (int a = pos + 1; a < size; ++a) {
                combo[static_cast<std::size_t>(a)] = combo[static_cast<std::size_t>(a - 1)] + 1;
            }
        }
    }
    return out;
}

const std::vector<SubsetIndex>& upsilon(int m) { return table_for(m).subsets; }

std::optional<std::size_t> upsilon_position(int m, const SubsetIndex& subset) {
    const auto& table = table_for(m);
    const auto bits = subset.mask();
    if (bits >= table.position_of_mask.size()) return std::nullopt;
    const int p = table.position_of_mask[bits];
    if (p < 0) return std::nullopt;
    return static_cast<std::size_t>(p);
}

// --- DegreeVector ----------------------------------------------------------

DegreeVector::DegreeVector(std::vector<int> q) : q_(std::move(q)) {
    if (q_.empty()) throw DomainError("degree vector needs at least one factor");
    check_factor_count(static_cast<int>(q_.size()));
    for (int v : q_) {
        if (v < 0) throw DomainError("degrees must be nonnegative");
    }
}

int DegreeVector::total() const noexcept { return std::accumulate(q_.begin(), q_.end(), 0); }

// --- PairedMultiIndex --------------------------------------------------------

PairedMultiIndex::PairedMultiIndex(int m) : m_(m) {
    check_factor_count(m);
    if (m >= 2) {
        const auto size = upsilon(m).size();
        l_.assign(size, 0);
        n_.assign(size, 0);
    }
}

PairedMultiIndex::PairedMultiIndex(int m, std::vector<int> l, std::vector<int> n)
    : m_(m), l_(std::move(l)), n_(std::move(n)) {
    check_factor_count(m);
    const std::size_t size = m >= 2 ? upsilon(m).size() : 0;
    if (l_.size() != size || n_.size() != size) {
        throw DomainError("multi-index length does not match |Upsilon_m|");
    }
    for (std::size_t p = 0; p < size; ++p) {
        if (l_[p] < 0 || n_[p] < 0) throw DomainError("multi-index values must be nonnegative");
    }
}

std::size_t PairedMultiIndex::position_or_throw(const SubsetIndex& i) const {
    if (m_ < 2) throw DomainError("no subsets exist for m < 2");
    auto p = upsilon_position(m_, i);
    if (!p) throw DomainError("(" + i.to_string() + ") is not in Upsilon_" + std::to_string(m_));
    return *p;
}

int PairedMultiIndex::l(const SubsetIndex& i) const { return l_[position_or_throw(i)]; }
int PairedMultiIndex::n(const SubsetIndex& i) const { return n_[position_or_throw(i)]; }

void PairedMultiIndex::set_l(const SubsetIndex& i, int value) {
    if (value < 0) throw DomainError("multi-index values must be nonnegative");
    l_[position_or_throw(i)] = value;
}

void PairedMultiIndex::set_n(const SubsetIndex& i, int value) {
    if (value < 0) throw DomainError("multi-index values must be nonnegative");
    n_[position_or_throw(i)] = value;
}

int PairedMultiIndex::l_total() const noexcept { return std::accumulate(l_.begin(), l_.end(), 0); }
int PairedMultiIndex::n_total() const noexcept { return std::accumulate(n_.begin(), n_.end(), 0); }

bool PairedMultiIndex::is_zero() const noexcept {
    return std::all_of(l_.begin(), l_.end(), [](int v) { return v == 0; }) &&
           std::all_of(n_.begin(), n_.end(), [](int v) { return v == 0; });
}

// --- chi / admissibility -------------------------------------------------------

int chi(int k, const PairedMultiIndex& pm) {
    if (k < 1 || k > pm.m()) {
        throw DomainError("factor index " + std::to_string(k) + " outside [1, " +
                          std::to_string(pm.m()) + "]");
    }
    if (pm.m() < 2) return 0;
    const auto& subsets = upsilon(pm.m());
    int total = 0;
    for (std::size_t p = 0; p < subsets.size(); ++p) {
        if (subsets[p].contains(k)) total += pm.l()[p] + pm.n()[p];
    }
    return total;
}

bool is_admissible(const DegreeVector& q, const PairedMultiIndex& pm) {
    if (q.m() != pm.m()) return false;
    for (int k = 1; k <= q.m(); ++k) {
        if (chi(k, pm) > q[k]) return false;
    }
    return true;
}

// --- AdmissiblePairStream ----------------------------------------------------------

AdmissiblePairStream::AdmissiblePairStream(DegreeVector q) : q_(std::move(q)) {
    const auto& subsets = upsilon(q_.m());
    var_masks_.reserve(2 * subsets.size());
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& s : subsets) var_masks_.push_back(s.mask());
    }
    values_.assign(var_masks_.size(), 0);
    remaining_ = q_.values();
}

bool AdmissiblePairStream::advance() {
    // Lexicographic successor within a downward-closed set: bump the last
    // variable that still fits, zeroing everything after it.
    const int m = q_.m();
    for (std::size_t pos = var_masks_.size(); pos-- > 0;) {
        const auto bits = var_masks_[pos];
        bool fits = true;
        for (int k = 0; k < m; ++k) {
            if ((bits >> k & 1U) && remaining_[static_cast<std::size_t>(k)] == 0) {
                fits = false;
                break;
            }
        }
        if (fits) {
            ++values_[pos];
            for (int k = 0; k < m; ++k) {
                if (bits >> k & 1U) --remaining_[static_cast<std::size_t>(k)];
            }
            return true;
        }
        if (values_[pos] != 0) {
            for (int k = 0; k < m; ++k) {
                if (bits >> k & 1U) remaining_[static_cast<std::size_t>(k)] += values_[pos];
            }
            values_[pos] = 0;
        }
    }
    return false;
}

std::optional<PairedMultiIndex> AdmissiblePairStream::next() {
    if (done_) return std::nullopt;
    if (!started_) {
        started_ = true;
    } else if (!advance()) {
        done_ = true;
        return std::nullopt;
    }
    const auto half = static_cast<std::ptrdiff_t>(values_.size() / 2);
    return PairedMultiIndex(q_.m(), std::vector<int>(values_.begin(), values_.begin() + half),
                            std::vector<int>(values_.begin() + half, values_.end()));
}

std::vector<PairedMultiIndex> admissible_pairs(const DegreeVector& q) {
    AdmissiblePairStream stream(q);
    std::vector<PairedMultiIndex> out;
    while (auto pm = stream.next()) out.push_back(std::move(*pm));
    return out;
}

// --- coefficients -----------------------------------------------------------------

BigInt factorial(int n) {
    if (n < 0) throw DomainError("factorial of a negative number");
    BigInt result = 1;
    for (int v = 2; v <= n; ++v) result *= v;
    return result;
}

BigInt term_coefficient(const DegreeVector& q, const PairedMultiIndex& pm) {
    if (!is_admissible(q, pm)) throw DomainError("multi-index is not admissible for q");
    BigInt numerator = 1;
    BigInt denominator = 1;
    for (int k = 1; k <= q.m(); ++k) {
        numerator *= factorial(q[k]);
        denominator *= factorial(q[k] - chi(k, pm));
    }
    for (std::size_t p = 0; p < pm.size(); ++p) {
        denominator *= factorial(pm.l()[p]);
        denominator *= factorial(pm.n()[p]);
    }
    BigInt remainder;
    BigInt quotient;
    boost::multiprecision::divide_qr(numerator, denominator, quotient, remainder);
    if (remainder != 0) throw std::logic_error("non-integral product-formula coefficient");
    return quotient;
}

int term_degree(const DegreeVector& q, const PairedMultiIndex& pm) {
    if (!is_admissible(q, pm)) throw DomainError("multi-index is not admissible for q");
    int consumed = 0;
    for (int k = 1; k <= q.m(); ++k) consumed += chi(k, pm);
    return q.total() + pm.n_total() - consumed;
}

}  // namespace levychaos
