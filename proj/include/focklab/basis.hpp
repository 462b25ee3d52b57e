#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "focklab/linalg.hpp"

namespace focklab {

// Occupation-number basis of the bosonic Fock space over n_modes one-particle
// modes, truncated at total quanta <= n_max.  States are ordered by total
// quanta first, lexicographically within each grade, so the vacuum is index 0
// and sector projections are contiguous blocks.
class FockBasis {
  public:
    static FockBasis build(int n_modes, int n_max, std::uint64_t dim_cap = 200000);

    // Binomial C(n_modes + n_max, n_max); throws if it exceeds dim_cap, the
    // message carries the computed dimension.
    static std::uint64_t dimension(int n_modes, int n_max, std::uint64_t dim_cap);

    int n_modes() const { return n_modes_; }
    int n_max() const { return n_max_; }
    int dim() const { return static_cast<int>(states_.size()); }

    const std::vector<int>& state(int i) const { return states_[i]; }
    int total(int i) const { return totals_[i]; }

    // Index of an occupation tuple, -1 if outside the truncation.
    int find(const std::vector<int>& occ) const;

    // First index of the sector with total quanta n (== dim of truncation at n-1).
    int sector_begin(int n) const { return sector_begin_[n]; }
    int sector_end(int n) const { return sector_begin_[n + 1]; }

  private:
    int n_modes_ = 0;
    int n_max_ = 0;
    std::vector<std::vector<int>> states_;
    std::vector<int> totals_;
    std::vector<int> sector_begin_;
    std::unordered_map<std::uint64_t, int> index_;

    static std::uint64_t key(const std::vector<int>& occ);
};

struct TruncationError : std::runtime_error {
    std::uint64_t requested_dim;
    TruncationError(const std::string& msg, std::uint64_t dim)
        : std::runtime_error(msg), requested_dim(dim) {}
};

}  // namespace focklab
