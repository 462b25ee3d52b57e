#include "focklab/basis.hpp"
#include <limits>

#include <stdexcept>
#include <string>

namespace focklab {

std::uint64_t FockBasis::dimension(int n_modes, int n_max, std::uint64_t dim_cap) {
    if (n_modes < 1 || n_max < 0)
        throw std::invalid_argument("FockBasis: need n_modes >= 1, n_max >= 0");
    // C(n_modes + n_max, n_max), saturating instead of overflowing.
    unsigned __int128 wide = 1;
    const unsigned __int128 sat = std::numeric_limits<std::uint64_t>::max();
    for (int i = 1; i <= n_max; ++i) {
        wide = wide * static_cast<unsigned>(n_modes + i) / static_cast<unsigned>(i);
        if (wide > sat) {
            wide = sat;
            break;
        }
    }
    std::uint64_t dim = static_cast<std::uint64_t>(wide);
    if (dim > dim_cap)
        throw TruncationError("FockBasis: truncated dimension " + std::to_string(dim) +
                                  " exceeds cap " + std::to_string(dim_cap),
                              dim);
    return dim;
}

std::uint64_t FockBasis::key(const std::vector<int>& occ) {
    // Occupations are small (<= n_max); pack 8 bits per mode, FNV-mix longer tuples.
    std::uint64_t h = 1469598103934665603ull;
    for (int n : occ) {
        h ^= static_cast<std::uint64_t>(n) + 0x9e3779b97f4a7c15ull;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {
// Tuples of fixed sum in lexicographic order (first mode most significant).
void enumerate_fixed_sum(int modes_left, int sum_left, std::vector<int>& cur,
                         std::vector<std::vector<int>>& out) {
    if (modes_left == 1) {
        cur.push_back(sum_left);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int n = 0; n <= sum_left; ++n) {
        cur.push_back(n);
        enumerate_fixed_sum(modes_left - 1, sum_left - n, cur, out);
        cur.pop_back();
    }
}
}  // namespace

FockBasis FockBasis::build(int n_modes, int n_max, std::uint64_t dim_cap) {
    std::uint64_t dim = dimension(n_modes, n_max, dim_cap);
    FockBasis b;
    b.n_modes_ = n_modes;
    b.n_max_ = n_max;
    b.states_.reserve(dim);
    b.sector_begin_.push_back(0);
    std::vector<int> cur;
    for (int n = 0; n <= n_max; ++n) {
        enumerate_fixed_sum(n_modes, n, cur, b.states_);
        b.sector_begin_.push_back(static_cast<int>(b.states_.size()));
    }
    b.totals_.resize(b.states_.size());
    b.index_.reserve(2 * b.states_.size());
    for (int i = 0; i < b.dim(); ++i) {
        int tot = 0;
        for (int n : b.states_[i]) tot += n;
        b.totals_[i] = tot;
        b.index_.emplace(key(b.states_[i]), i);
    }
    return b;
}

int FockBasis::find(const std::vector<int>& occ) const {
    auto it = index_.find(key(occ));
    if (it == index_.end()) return -1;
    // Guard against hash collisions.
    if (states_[it->second] != occ) {
        for (int i = 0; i < dim(); ++i)
            if (states_[i] == occ) return i;
        return -1;
    }
    return it->second;
}

}  // namespace focklab
