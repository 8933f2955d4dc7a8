#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hsom/rows.hpp"
#include "hsom/som.hpp"

namespace hsom::ovr {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr bool operator==(Point2, Point2) = default;
};

// Centres of activity in a first-layer map, one per input frame.
struct ActivityTrace {
    std::vector<Point2> points;

    std::size_t size() const noexcept { return points.size(); }
};

// Border points of n_max equal arc-length segments, flattened as x,y pairs.
struct OrderedVector {
    std::vector<double> values;
    std::size_t n_max = 0;

    std::size_t dim() const noexcept { return values.size(); }
    Point2 border(std::size_t k) const { return {values[2 * k], values[2 * k + 1]}; }

    friend bool operator==(const OrderedVector&, const OrderedVector&) = default;
};

inline constexpr std::size_t ordered_vector_dim(std::size_t n_max) noexcept { return 2 * (n_max + 1); }

/// BMU of each frame, consecutive repeats kept.
ActivityTrace extract_trace(const som::Model& model, RowsView features);

/// Sum of Euclidean step lengths along the trace.
double trace_length(const ActivityTrace& trace) noexcept;

/// Longest trace, counted in points. Throws EmptySet.
std::size_t compute_n_max(std::span<const ActivityTrace> traces);

/// Resamples the trace polyline at arc lengths k * L / n_max, k = 0..n_max.
/// Throws EmptyTrace, InvalidArgument for n_max == 0.
OrderedVector ordered_vector(const ActivityTrace& trace, std::size_t n_max);

// "frame,i,j" rows with a header line.
std::string trace_csv(const ActivityTrace& trace);

} // namespace hsom::ovr
