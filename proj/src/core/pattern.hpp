#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/grid.hpp"

namespace bass {

// Subset of grid points to be measured, plus a locked calibration region
// that is always kept (a fully sampled central block that auto-calibration
// style methods rely on). Membership tests are O(1) via bitmaps; iteration
// is over the sorted index list so every consumer sees one canonical order.
class SamplingPattern {
public:
    SamplingPattern(const KSpaceGrid& grid, std::vector<std::int64_t> members,
                    std::vector<std::int64_t> locked);

    const KSpaceGrid& grid() const noexcept { return grid_; }

    std::int64_t size() const noexcept { return static_cast<std::int64_t>(members_.size()); }
    std::int64_t locked_count() const noexcept { return static_cast<std::int64_t>(locked_.size()); }

    bool contains(std::int64_t k) const noexcept { return member_bits_[static_cast<std::size_t>(k)] != 0; }
    bool is_locked(std::int64_t k) const noexcept { return locked_bits_[static_cast<std::size_t>(k)] != 0; }

    // Ascending index lists.
    std::span<const std::int64_t> members() const noexcept { return members_; }
    std::span<const std::int64_t> locked() const noexcept { return locked_; }

    const std::vector<std::uint8_t>& member_bits() const noexcept { return member_bits_; }

    // New pattern with `added` joined and `removed` dropped; the locked set
    // carries over. Removing a locked or non-member point is an error, as is
    // adding an existing member.
    SamplingPattern with_changes(std::span<const std::int64_t> added,
                                 std::span<const std::int64_t> removed) const;

    static SamplingPattern full(const KSpaceGrid& grid);
    static SamplingPattern empty(const KSpaceGrid& grid);

    bool operator==(const SamplingPattern& other) const noexcept {
        return grid_ == other.grid_ && members_ == other.members_ && locked_ == other.locked_;
    }

private:
    KSpaceGrid grid_;
    std::vector<std::int64_t> members_;
    std::vector<std::int64_t> locked_;
    std::vector<std::uint8_t> member_bits_;
    std::vector<std::uint8_t> locked_bits_;
};

}  // namespace bass
