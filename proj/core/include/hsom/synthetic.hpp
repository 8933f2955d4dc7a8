#pragma once

#include <cstddef>
#include <cstdint>

#include "hsom/skeleton.hpp"

namespace hsom::dataset {

enum class SyntheticProfile {
    // Each class moves its limbs along a different path.
    Shape,
    // All classes share one path; they differ only in how fast it is traversed.
    Speed,
};

struct SyntheticSpec {
    std::size_t classes = 5;
    std::size_t samples_per_class = 30;
    std::size_t min_frames = 30;
    std::size_t max_frames = 60;
    double noise = 0.01;
    std::uint64_t seed = 0;
    SyntheticProfile profile = SyntheticProfile::Shape;
};

/// Builds a labeled corpus of procedurally animated skeletons. Frame t of an
/// N-frame sample shows the class pose at phase t/(N-1), so with zero noise
/// every sample of a class lies on the same spatial path regardless of N.
/// Noise is uniform in [-noise, noise] per coordinate.
Corpus generate_synthetic(const SyntheticSpec& spec);

} // namespace hsom::dataset
