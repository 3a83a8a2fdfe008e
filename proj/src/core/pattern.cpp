#include "core/pattern.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace bass {

namespace {

void check_sorted_unique_in_range(std::span<const std::int64_t> indices, std::int64_t n,
                                  const char* what) {
    std::int64_t prev = -1;
    for (std::int64_t k : indices) {
        if (k < 0 || k >= n) {
            throw_data_error(std::string(what) + " index " + std::to_string(k) +
                             " out of range [0," + std::to_string(n) + ")");
        }
        if (k == prev) {
            throw_data_error(std::string(what) + " contains duplicate index " + std::to_string(k));
        }
        prev = k;
    }
}

}  // namespace

SamplingPattern::SamplingPattern(const KSpaceGrid& grid, std::vector<std::int64_t> members,
                                 std::vector<std::int64_t> locked)
    : grid_(grid), members_(std::move(members)), locked_(std::move(locked)) {
    std::sort(members_.begin(), members_.end());
    std::sort(locked_.begin(), locked_.end());
    const std::int64_t n = grid_.num_points();
    check_sorted_unique_in_range(members_, n, "member");
    check_sorted_unique_in_range(locked_, n, "locked");

    member_bits_.assign(static_cast<std::size_t>(n), 0);
    locked_bits_.assign(static_cast<std::size_t>(n), 0);
    for (std::int64_t k : members_) member_bits_[static_cast<std::size_t>(k)] = 1;
    for (std::int64_t k : locked_) {
        if (!member_bits_[static_cast<std::size_t>(k)]) {
            throw_data_error("locked index " + std::to_string(k) + " is not a member");
        }
        locked_bits_[static_cast<std::size_t>(k)] = 1;
    }
}

SamplingPattern SamplingPattern::with_changes(std::span<const std::int64_t> added,
                                              std::span<const std::int64_t> removed) const {
    std::vector<std::uint8_t> bits = member_bits_;
    for (std::int64_t k : removed) {
        if (k < 0 || k >= grid_.num_points() || !bits[static_cast<std::size_t>(k)]) {
            throw_data_error("cannot remove non-member point " + std::to_string(k));
        }
        if (is_locked(k)) {
            throw_data_error("cannot remove locked point " + std::to_string(k));
        }
        bits[static_cast<std::size_t>(k)] = 0;
    }
    for (std::int64_t k : added) {
        if (k < 0 || k >= grid_.num_points() || bits[static_cast<std::size_t>(k)]) {
            throw_data_error("cannot add point " + std::to_string(k) +
                             " (out of range or already a member)");
        }
        bits[static_cast<std::size_t>(k)] = 1;
    }
    std::vector<std::int64_t> new_members;
    new_members.reserve(members_.size() + added.size());
    for (std::int64_t k = 0; k < grid_.num_points(); ++k) {
        if (bits[static_cast<std::size_t>(k)]) new_members.push_back(k);
    }
    return SamplingPattern(grid_, std::move(new_members), locked_);
}

SamplingPattern SamplingPattern::full(const KSpaceGrid& grid) {
    std::vector<std::int64_t> all(static_cast<std::size_t>(grid.num_points()));
    std::iota(all.begin(), all.end(), std::int64_t{0});
    return SamplingPattern(grid, std::move(all), {});
}

SamplingPattern SamplingPattern::empty(const KSpaceGrid& grid) {
    return SamplingPattern(grid, {}, {});
}

}  // namespace bass
