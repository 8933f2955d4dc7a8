#pragma once

#include <cstddef>
#include <span>

namespace hsom {

// Read-only view of `size()` vectors of length `dim` stored back to back.
struct RowsView {
    std::span<const double> data;
    std::size_t dim = 0;

    std::size_t size() const noexcept { return dim == 0 ? 0 : data.size() / dim; }
    std::span<const double> operator[](std::size_t i) const { return data.subspan(i * dim, dim); }
};

} // namespace hsom
