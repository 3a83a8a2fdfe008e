#pragma once

#include <utility>
#include <vector>

#include "core/volume.hpp"

namespace bass {

// Collection of fully sampled items sharing one grid.
class Dataset {
public:
    explicit Dataset(std::vector<MultiCoilKSpace> items) : items_(std::move(items)) {
        if (items_.empty()) throw_data_error("dataset must contain at least one item");
        for (const auto& item : items_) {
            if (!(item.grid() == items_.front().grid())) {
                throw_data_error("dataset items use different grids");
            }
        }
    }

    const KSpaceGrid& grid() const noexcept { return items_.front().grid(); }
    int size() const noexcept { return static_cast<int>(items_.size()); }
    const MultiCoilKSpace& item(int i) const noexcept { return items_[static_cast<std::size_t>(i)]; }
    const std::vector<MultiCoilKSpace>& items() const noexcept { return items_; }

    Dataset slice(int first, int count) const {
        if (first < 0 || count < 1 || first + count > size()) {
            throw_data_error("dataset slice [" + std::to_string(first) + "," +
                             std::to_string(first + count) + ") out of range for " +
                             std::to_string(size()) + " items");
        }
        std::vector<MultiCoilKSpace> part(items_.begin() + first, items_.begin() + first + count);
        return Dataset(std::move(part));
    }

private:
    std::vector<MultiCoilKSpace> items_;
};

}  // namespace bass
