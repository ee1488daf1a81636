#pragma once

#include <cstdint>

#include "gaussdisturb/state.hpp"

namespace gaussdisturb {

enum class PurityMode {
    mixed,
    pure,
    symmetric_sts,
};

struct SamplerConfig {
    double a_max = 4.0;
    double b_max = 4.0;
    std::uint64_t seed = 12345;
    PurityMode purity_mode = PurityMode::mixed;
};

/// Deterministic rejection sampler over standard-form parameters:
/// a, b uniform on [1, max], candidate (c1, c2) uniform in the box
/// |c_i| <= sqrt(ab), accepted iff the state is physical and c1 >= |c2|.
/// Pure mode draws the squeezing from a uniform over a in [1, a_max];
/// symmetric_sts draws c uniform on [0, sqrt(a^2 - 1)).
class StateSampler {
public:
    explicit StateSampler(const SamplerConfig& cfg);

    StandardFormCM next();

    /// Independent stream for worker idx (splitmix of the base seed).
    StateSampler spawn(std::uint64_t idx) const;

    std::uint64_t rejections() const { return rejections_; }
    std::uint64_t accepted() const { return accepted_; }

private:
    double uniform(); // [0, 1)

    SamplerConfig cfg_;
    std::uint64_t state_;
    std::uint64_t rejections_ = 0;
    std::uint64_t accepted_ = 0;
};

} // namespace gaussdisturb
