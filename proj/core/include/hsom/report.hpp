#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "hsom/pipeline.hpp"

namespace hsom::report {

std::string confusion_csv(const pipeline::EvalReport& report);
std::string per_class_csv(const pipeline::EvalReport& report);
std::string eval_text(const pipeline::EvalReport& report);

// Fixed-width "action R1..R9" table, one decimal per percentage.
std::string region_table(const pipeline::RegionHistogram& hist);
std::string region_csv(const pipeline::RegionHistogram& hist);

/// Binary 8-bit PGM of a row-major map. Values are stretched affinely from
/// [min, max] to [0, 255] for display; row 0 is drawn at the bottom.
std::string activity_pgm(std::span<const double> values, std::size_t rows, std::size_t cols);
// rows of "i,j,value".
std::string activity_csv(std::span<const double> values, std::size_t rows, std::size_t cols);

} // namespace hsom::report
