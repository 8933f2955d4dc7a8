#include "hsom/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "hsom/error.hpp"

namespace hsom::report {

namespace {

std::string format(const char* fmt, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

std::string pad_right(std::string s, std::size_t width)
{
    if (s.size() < width)
        s.append(width - s.size(), ' ');
    return s;
}

std::string pad_left(std::string s, std::size_t width)
{
    if (s.size() < width)
        s.insert(0, width - s.size(), ' ');
    return s;
}

std::size_t name_width(const std::vector<std::string>& names, std::size_t min)
{
    std::size_t w = min;
    for (const auto& n : names)
        w = std::max(w, n.size());
    return w + 2;
}

} // namespace

std::string confusion_csv(const pipeline::EvalReport& report)
{
    std::string out = "true\\predicted";
    for (const auto& n : report.class_names)
        out += "," + n;
    out += '\n';
    for (std::size_t t = 0; t < report.confusion.size(); ++t) {
        out += report.class_names[t];
        for (auto c : report.confusion[t])
            out += "," + std::to_string(c);
        out += '\n';
    }
    return out;
}

std::string per_class_csv(const pipeline::EvalReport& report)
{
    std::string out = "class,count,correct,accuracy\n";
    for (std::size_t k = 0; k < report.class_names.size(); ++k) {
        out += report.class_names[k] + "," + std::to_string(report.class_count(k)) + ","
               + std::to_string(report.confusion[k][k]) + "," + format("%.2f", report.class_accuracy(k)) + "\n";
    }
    out += "overall," + std::to_string(report.total) + "," + std::to_string(report.correct) + ","
           + format("%.2f", report.overall_accuracy()) + "\n";
    return out;
}

std::string eval_text(const pipeline::EvalReport& report)
{
    const auto w = name_width(report.class_names, 5);
    std::string out = "Overall accuracy: " + format("%.2f", report.overall_accuracy()) + "% ("
                      + std::to_string(report.correct) + "/" + std::to_string(report.total) + ")\n\n";
    out += pad_right("Class", w) + pad_left("Count", 7) + pad_left("Correct", 9) + pad_left("Accuracy", 10) + "\n";
    std::size_t perfect = 0;
    for (std::size_t k = 0; k < report.class_names.size(); ++k) {
        const auto n = report.class_count(k);
        perfect += (n > 0 && report.confusion[k][k] == n) ? 1 : 0;
        out += pad_right(report.class_names[k], w) + pad_left(std::to_string(n), 7)
               + pad_left(std::to_string(report.confusion[k][k]), 9)
               + pad_left(format("%.2f", report.class_accuracy(k)), 10) + "\n";
    }
    out += "\nClasses at 100%: " + std::to_string(perfect) + " of " + std::to_string(report.class_names.size())
           + "\n\nConfusion matrix (rows: true, columns: predicted)\n";
    out += pad_right("", w);
    for (std::size_t k = 0; k < report.class_names.size(); ++k)
        out += pad_left(std::to_string(k + 1), 5);
    out += '\n';
    for (std::size_t t = 0; t < report.confusion.size(); ++t) {
        out += pad_right(std::to_string(t + 1) + " " + report.class_names[t], w);
        for (auto c : report.confusion[t])
            out += pad_left(std::to_string(c), 5);
        out += '\n';
    }
    return out;
}

std::string region_table(const pipeline::RegionHistogram& hist)
{
    const auto w = name_width(hist.class_names, 6);
    std::string out = pad_right("Action", w);
    for (std::size_t r = 1; r <= pipeline::kRegionCount; ++r)
        out += pad_left("R" + std::to_string(r), 7);
    out += '\n';
    for (std::size_t k = 0; k < hist.class_names.size(); ++k) {
        if (hist.class_total(k) == 0)
            continue;
        out += pad_right(hist.class_names[k], w);
        for (double p : hist.percent(k))
            out += pad_left(format("%.1f", p), 7);
        out += '\n';
    }
    return out;
}

std::string region_csv(const pipeline::RegionHistogram& hist)
{
    std::string out = "class,samples";
    for (std::size_t r = 1; r <= pipeline::kRegionCount; ++r)
        out += ",R" + std::to_string(r);
    out += '\n';
    for (std::size_t k = 0; k < hist.class_names.size(); ++k) {
        if (hist.class_total(k) == 0)
            continue;
        out += hist.class_names[k] + "," + std::to_string(hist.class_total(k));
        for (double p : hist.percent(k))
            out += "," + format("%.4f", p);
        out += '\n';
    }
    return out;
}

std::string activity_pgm(std::span<const double> values, std::size_t rows, std::size_t cols)
{
    if (values.size() != rows * cols || rows == 0 || cols == 0)
        raise(ErrorCode::DimensionMismatch, "map values do not match the grid");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double range = *hi - *lo;
    std::string out = "P5\n" + std::to_string(cols) + " " + std::to_string(rows) + "\n255\n";
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t i = rows - 1 - r;
        for (std::size_t j = 0; j < cols; ++j) {
            const double v = range > 0.0 ? (values[i * cols + j] - *lo) / range : 1.0;
            out += static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * v)));
        }
    }
    return out;
}

std::string activity_csv(std::span<const double> values, std::size_t rows, std::size_t cols)
{
    if (values.size() != rows * cols)
        raise(ErrorCode::DimensionMismatch, "map values do not match the grid");
    std::string out = "i,j,value\n";
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            out += std::to_string(i) + "," + std::to_string(j) + "," + format("%.17g", values[i * cols + j]) + "\n";
    return out;
}

} // namespace hsom::report
