#include "hsom/ovr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "hsom/error.hpp"

namespace hsom::ovr {

ActivityTrace extract_trace(const som::Model& model, RowsView features)
{
    if (features.dim != model.dim())
        raise(ErrorCode::DimensionMismatch, "features have dimension " + std::to_string(features.dim)
                                                + ", layer-1 map expects " + std::to_string(model.dim()));
    ActivityTrace trace;
    trace.points.reserve(features.size());
    for (std::size_t t = 0; t < features.size(); ++t) {
        const auto c = som::best_matching_unit(model, features[t]);
        trace.points.push_back({static_cast<double>(c.i), static_cast<double>(c.j)});
    }
    return trace;
}

double trace_length(const ActivityTrace& trace) noexcept
{
    double total = 0.0;
    for (std::size_t i = 1; i < trace.points.size(); ++i)
        total += std::hypot(trace.points[i].x - trace.points[i - 1].x, trace.points[i].y - trace.points[i - 1].y);
    return total;
}

std::size_t compute_n_max(std::span<const ActivityTrace> traces)
{
    if (traces.empty())
        raise(ErrorCode::EmptySet, "no training traces");
    std::size_t n = 0;
    for (const auto& t : traces)
        n = std::max(n, t.size());
    if (n == 0)
        raise(ErrorCode::EmptyTrace, "every training trace is empty");
    return n;
}

OrderedVector ordered_vector(const ActivityTrace& trace, std::size_t n_max)
{
    if (trace.points.empty())
        raise(ErrorCode::EmptyTrace, "cannot encode an empty trace");
    if (n_max == 0)
        raise(ErrorCode::InvalidArgument, "segment count must be positive");

    const auto& p = trace.points;
    std::vector<double> seg(p.size() > 1 ? p.size() - 1 : 0);
    double total = 0.0;
    for (std::size_t i = 0; i < seg.size(); ++i) {
        seg[i] = std::hypot(p[i + 1].x - p[i].x, p[i + 1].y - p[i].y);
        total += seg[i];
    }

    OrderedVector out;
    out.n_max = n_max;
    out.values.reserve(ordered_vector_dim(n_max));
    if (total == 0.0) {
        for (std::size_t k = 0; k <= n_max; ++k)
            out.values.insert(out.values.end(), {p.front().x, p.front().y});
        return out;
    }

    // Zero-length steps add exactly 0 to the running length, so repeated
    // points never change where a border lands.
    std::size_t s = 0;
    double start = 0.0;
    for (std::size_t k = 0; k <= n_max; ++k) {
        if (k == n_max) {
            out.values.insert(out.values.end(), {p.back().x, p.back().y});
            break;
        }
        const double target = total * static_cast<double>(k) / static_cast<double>(n_max);
        while (s + 1 < seg.size() && start + seg[s] < target) {
            start += seg[s];
            ++s;
        }
        const double t = seg[s] > 0.0 ? std::clamp((target - start) / seg[s], 0.0, 1.0) : 0.0;
        out.values.insert(out.values.end(),
                          {p[s].x + t * (p[s + 1].x - p[s].x), p[s].y + t * (p[s + 1].y - p[s].y)});
    }
    return out;
}

std::string trace_csv(const ActivityTrace& trace)
{
    std::string out = "frame,i,j\n";
    char buf[32];
    for (std::size_t t = 0; t < trace.points.size(); ++t) {
        out += std::to_string(t);
        for (double v : {trace.points[t].x, trace.points[t].y}) {
            out += ',';
            const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
            out.append(buf, ptr);
        }
        out += '\n';
    }
    return out;
}

} // namespace hsom::ovr
