#include "gaussdisturb/sampler.hpp"

#include <cmath>

namespace gaussdisturb {

namespace {

constexpr std::uint64_t kRejectionBudget = 10000;

std::uint64_t splitmix64(std::uint64_t& x)
{
    x += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace

StateSampler::StateSampler(const SamplerConfig& cfg) : cfg_(cfg), state_(cfg.seed)
{
    if (cfg.a_max < 1.0 || cfg.b_max < 1.0)
        throw OutOfRange("StateSampler: a_max and b_max must be >= 1");
    // decorrelate the raw seed
    (void)splitmix64(state_);
}

double StateSampler::uniform()
{
    return static_cast<double>(splitmix64(state_) >> 11) * 0x1.0p-53;
}

StateSampler StateSampler::spawn(std::uint64_t idx) const
{
    SamplerConfig cfg = cfg_;
    std::uint64_t mix = cfg_.seed ^ (0xa0761d6478bd642full * (idx + 1));
    cfg.seed = splitmix64(mix);
    return StateSampler(cfg);
}

StandardFormCM StateSampler::next()
{
    switch (cfg_.purity_mode) {
    case PurityMode::pure: {
        const double a = 1.0 + (cfg_.a_max - 1.0) * uniform();
        ++accepted_;
        return pure_tmsv(0.5 * std::acosh(a));
    }
    case PurityMode::symmetric_sts: {
        for (std::uint64_t k = 0; k < kRejectionBudget; ++k) {
            const double a = 1.0 + (cfg_.a_max - 1.0) * uniform();
            const double c = std::sqrt(a * a - 1.0) * uniform();
            const StandardFormCM sf{a, a, c, -c};
            if (validate(sf).is_positive) {
                ++accepted_;
                return sf;
            }
            ++rejections_;
        }
        throw SamplingExhausted("StateSampler: rejection budget exhausted");
    }
    case PurityMode::mixed:
        break;
    }
    for (std::uint64_t k = 0; k < kRejectionBudget; ++k) {
        const double a = 1.0 + (cfg_.a_max - 1.0) * uniform();
        const double b = 1.0 + (cfg_.b_max - 1.0) * uniform();
        const double cmax = std::sqrt(a * b);
        const double c1 = cmax * (2.0 * uniform() - 1.0);
        const double c2 = cmax * (2.0 * uniform() - 1.0);
        if (c1 < std::abs(c2)) {
            ++rejections_;
            continue;
        }
        const StandardFormCM sf{a, b, c1, c2};
        if (!validate(sf).is_positive) {
            ++rejections_;
            continue;
        }
        ++accepted_;
        return sf;
    }
    throw SamplingExhausted("StateSampler: rejection budget exhausted");
}

} // namespace gaussdisturb
