#include <doctest.h>

#include <cmath>

#include "gaussdisturb/entropy.hpp"
#include "gaussdisturb/fock.hpp"
#include "gaussdisturb/povm.hpp"
#include "gaussdisturb/quartic.hpp"
#include "gaussdisturb/sampler.hpp"

using namespace gaussdisturb;

namespace {

/// I4 maximized over phases, written with hyperbolic functions; used to
/// pin the algebra of the product form in phase_optimized_I4.
double i4_hyperbolic(const StandardFormCM& sf, double rA, double rB)
{
    const double cA = std::cosh(2.0 * rA), sA = std::sinh(2.0 * rA);
    const double cB = std::cosh(2.0 * rB), sB = std::sinh(2.0 * rB);
    const double c1s = sf.c1 * sf.c1, c2s = sf.c2 * sf.c2;
    return ((sf.a + cA) * (sf.b + cB) + sA * sB) * (c1s + c2s)
         + ((sf.a + cA) * sB + (sf.b + cB) * sA) * (c1s - c2s);
}

GaussianSeedPair finite_seeds(double rA, double rB, double tA, double tB)
{
    GaussianSeedPair s;
    s.rA = rA;
    s.rB = rB;
    s.thetaA = tA;
    s.thetaB = tB;
    return s;
}

constexpr double kPi = 3.14159265358979323846;

} // namespace

TEST_CASE("phase-optimized I4: reference points")
{
    CHECK(phase_optimized_I4(StandardFormCM{2.0, 3.0, 0.0, 0.0}, 0.7, 0.2) == 0.0);

    // symmetric squeezed thermal at zero squeezing: 2 c^2 (a+1)^2
    const StandardFormCM sts{2.0, 2.0, 1.2, -1.2};
    CHECK(phase_optimized_I4(sts, 0.0, 0.0)
          == doctest::Approx(2.0 * 1.44 * 9.0).epsilon(1e-13));

    // single covariance at zero squeezing: (a+1)(b+1) c1^2
    const StandardFormCM sc{2.0, 2.0, 0.8, 0.0};
    CHECK(phase_optimized_I4(sc, 0.0, 0.0) == doctest::Approx(9.0 * 0.64).epsilon(1e-13));
}

TEST_CASE("phase-optimized I4 equals the hyperbolic form")
{
    const StandardFormCM states[] = {
        {2.0, 3.0, 1.2, 0.5}, {2.0, 2.0, 1.0, -0.3}, {5.0, 1.5, 1.1, -1.1},
        {1.3, 1.2, 0.4, 0.1}};
    for (const auto& sf : states)
        for (double rA : {0.0, 0.3, 1.0})
            for (double rB : {0.0, 0.6, 2.0})
                CHECK(phase_optimized_I4(sf, rA, rB)
                      == doctest::Approx(i4_hyperbolic(sf, rA, rB)).epsilon(1e-12));
}

TEST_CASE("measured-CM invariants")
{
    const StandardFormCM sf{2.0, 3.0, 1.2, 0.5};
    const GaussianSeedPair s = finite_seeds(0.4, 0.9, 0.5 * kPi, 0.5 * kPi);
    const MeasurementInvariants inv = measurement_invariants(sf, s);

    // det gamma' = I1 I2 + I3^2 - I4
    const Mat4 g = to_cm(sf) + direct_sum(pure_seed_cm(0.4, 0.5 * kPi),
                                          pure_seed_cm(0.9, 0.5 * kPi));
    CHECK(det(g) == doctest::Approx(inv.I1 * inv.I2 + inv.I3 * inv.I3 - inv.I4)
                        .epsilon(1e-12));

    // at theta = pi/2 the invariant reaches its phase optimum
    CHECK(inv.I4 == doctest::Approx(phase_optimized_I4(sf, 0.4, 0.9)).epsilon(1e-12));

    // no phase assignment beats the optimized value
    for (double tA : {0.0, 0.3, 1.1, 2.0, 3.0})
        for (double tB : {0.0, 0.7, 1.4, 2.6}) {
            const MeasurementInvariants iv =
                measurement_invariants(sf, finite_seeds(0.4, 0.9, tA, tB));
            CHECK(iv.I4 <= phase_optimized_I4(sf, 0.4, 0.9) + 1e-9);
        }
}

TEST_CASE("classical mutual information at fixed seeds")
{
    SUBCASE("product states carry no extractable correlations")
    {
        const StandardFormCM prod{2.0, 5.0, 0.0, 0.0};
        CHECK(classical_mi_at_seed(prod, finite_seeds(0.0, 0.0, 0.0, 0.0)) == 0.0);
        CHECK(classical_mi_at_seed(prod, GaussianSeedPair::double_homodyne(0.2, 1.0))
              == 0.0);
    }
    SUBCASE("double homodyne on a single-covariance state")
    {
        const StandardFormCM sf{2.0, 2.0, 1.0, 0.0};
        const double v = classical_mi_at_seed(
            sf, GaussianSeedPair::double_homodyne(0.5 * kPi, 0.5 * kPi));
        CHECK(v == doctest::Approx(0.14384103622589046).epsilon(1e-12)); // ln(4/3)/2
    }
    SUBCASE("double heterodyne on a squeezed thermal state")
    {
        const StandardFormCM sf{6.0, 6.0, 2.0, -2.0};
        const double v = classical_mi_at_seed(sf, GaussianSeedPair::heterodyne());
        CHECK(v == doctest::Approx(0.08515780834030685).epsilon(1e-12)); // ln(49/45)
    }
    SUBCASE("homodyne limit approached by large finite squeezing")
    {
        const StandardFormCM sf{2.0, 3.0, 1.2, 0.5};
        const double limit = classical_mi_at_seed(
            sf, GaussianSeedPair::double_homodyne(0.5 * kPi, 0.5 * kPi));
        const double finite = classical_mi_at_seed(
            sf, finite_seeds(9.0, 9.0, 0.5 * kPi, 0.5 * kPi));
        CHECK(finite == doctest::Approx(limit).epsilon(1e-6));
        CHECK(finite <= limit + 1e-12);
    }
}

TEST_CASE("optimized classical mutual information: branch dispatch")
{
    SUBCASE("product")
    {
        const OptResult r = gaussian_classical_mi(StandardFormCM{2.0, 5.0, 0.0, 0.0});
        CHECK(r.value == 0.0);
        CHECK(r.branch == OptBranch::Product);
    }
    SUBCASE("single covariance picks double homodyne")
    {
        const OptResult r = gaussian_classical_mi(StandardFormCM{2.0, 2.0, 1.0, 0.0});
        CHECK(r.value == doctest::Approx(0.14384103622589046).epsilon(1e-12));
        CHECK(r.branch == OptBranch::SingleCovariance);
        CHECK(r.seeds.homodyneA);
        CHECK(r.seeds.homodyneB);
    }
    SUBCASE("squeezed thermal splits between homodyne and heterodyne")
    {
        const OptResult hom = gaussian_classical_mi(symmetric_sts(1.2, 0.5));
        CHECK(hom.branch == OptBranch::SqueezedThermalHom);

        const OptResult het = gaussian_classical_mi(StandardFormCM{6.0, 6.0, 2.0, -2.0});
        CHECK(het.branch == OptBranch::SqueezedThermalHet);
        CHECK(het.value == doctest::Approx(0.08515780834030685).epsilon(1e-12));
    }
    SUBCASE("pure states always sit on the homodyne side")
    {
        for (double r : {0.2, 1.0, 2.5}) {
            const OptResult res = gaussian_classical_mi(pure_tmsv(r));
            CHECK(res.branch == OptBranch::SqueezedThermalHom);
            CHECK(res.value == doctest::Approx(std::log(std::cosh(2.0 * r))).epsilon(1e-12));
        }
    }
}

TEST_CASE("symmetric quartic route")
{
    // no positive stationary point for a=2, c1=1, c2=0: the boundary
    // (double homodyne) wins
    const auto roots = solve_quartic(1.0, 6.0, 12.0, 8.0, 0.0);
    for (double x : roots)
        CHECK(x <= 1e-12);
    CHECK(classical_mi_opt_symmetric(StandardFormCM{2.0, 2.0, 1.0, 0.0})
          == doctest::Approx(0.14384103622589046).epsilon(1e-10));

    CHECK_THROWS_AS(classical_mi_opt_symmetric(StandardFormCM{2.0, 3.0, 1.0, 0.0}),
                    DomainError);
}

TEST_CASE("symmetric quartic and general scan agree")
{
    StateSampler sampler(SamplerConfig{4.0, 4.0, 2024, PurityMode::mixed});
    int tested = 0;
    while (tested < 25) {
        StandardFormCM sf = sampler.next();
        sf.b = sf.a; // symmetrize, then re-check physicality
        if (!validate(sf).is_positive)
            continue;
        ++tested;
        const double quartic_route = classical_mi_opt_symmetric(sf);
        const double general_route = classical_mi_opt_general(sf);
        CHECK(quartic_route == doctest::Approx(general_route).epsilon(1e-8));
    }
}

TEST_CASE("optimizer seeds reproduce the reported optimum")
{
    const StandardFormCM states[] = {
        {2.0, 2.0, 1.0, 0.0}, {6.0, 6.0, 2.0, -2.0}, {2.0, 3.0, 1.2, 0.5},
        {3.0, 3.0, 2.0, 0.7}, {1.4, 2.8, 0.9, -0.4}};
    for (const auto& sf : states) {
        const OptResult r = gaussian_classical_mi(sf);
        CHECK(classical_mi_at_seed(sf, r.seeds) == doctest::Approx(r.value).epsilon(1e-8));
    }
}

TEST_CASE("classical mutual information is invariant under mode swap")
{
    const StandardFormCM sf{2.0, 3.5, 1.4, -0.6};
    const StandardFormCM swapped{3.5, 2.0, 1.4, -0.6};
    CHECK(gaussian_classical_mi(sf).value
          == doctest::Approx(gaussian_classical_mi(swapped).value).epsilon(1e-9));
}

TEST_CASE("classical mutual information is invariant under local symplectics")
{
    const StandardFormCM sf{2.0, 3.0, 1.3, 0.4};
    const Mat2 la = rotation(0.8) * Mat2::diag(std::exp(0.2), std::exp(-0.2));
    const Mat2 lb = rotation(-0.5);
    const Mat4 rotated = direct_sum(la, lb) * to_cm(sf) * transpose(direct_sum(la, lb));
    CHECK(gaussian_classical_mi(to_standard_form(rotated)).value
          == doctest::Approx(gaussian_classical_mi(sf).value).epsilon(1e-8));
}

TEST_CASE("seed covariances must be physical")
{
    const StandardFormCM sf{2.0, 2.0, 1.0, 0.0};
    CHECK_THROWS_AS(classical_mi_at_seed(sf, Mat2::diag(0.5, 0.5), Mat2::identity()),
                    NonPhysical);
    GaussianSeedPair bad;
    bad.rA = -0.5;
    CHECK_THROWS_AS(classical_mi_at_seed(sf, bad), OutOfRange);
}

TEST_CASE("mixed seeds never beat the pure-seed optimum")
{
    StateSampler sampler(SamplerConfig{4.0, 4.0, 31415, PurityMode::mixed});
    std::uint64_t prng = 31415;
    const auto uniform = [&prng] {
        prng ^= prng << 13;
        prng ^= prng >> 7;
        prng ^= prng << 17;
        return static_cast<double>(prng >> 11) * 0x1.0p-53;
    };
    for (int k = 0; k < 30; ++k) {
        const StandardFormCM sf = sampler.next();
        const double optimum = gaussian_classical_mi(sf).value;
        for (int j = 0; j < 6; ++j) {
            const double nuA = 1.0 + 3.0 * uniform(), nuB = 1.0 + 3.0 * uniform();
            const Mat2 ga = pure_seed_cm(2.5 * uniform(), kPi * uniform());
            const Mat2 gb = pure_seed_cm(2.5 * uniform(), kPi * uniform());
            Mat2 mixed_a = ga, mixed_b = gb;
            for (auto& v : mixed_a.m)
                v *= nuA;
            for (auto& v : mixed_b.m)
                v *= nuB;
            CHECK(classical_mi_at_seed(sf, mixed_a, mixed_b) <= optimum + 1e-9);
        }
    }
}

TEST_CASE("Gaussian-measurement disturbance")
{
    SUBCASE("product")
    {
        CHECK(gaussian_amid(StandardFormCM{3.0, 2.0, 0.0, 0.0}).value == 0.0);
    }
    SUBCASE("pure states: twice the photon-counting value minus ln cosh 2r")
    {
        for (double r : {0.25, 1.0, 2.0}) {
            const double expect =
                2.0 * tmsv_entanglement_entropy(r) - std::log(std::cosh(2.0 * r));
            CHECK(gaussian_amid(pure_tmsv(r)).value == doctest::Approx(expect).epsilon(1e-10));
        }
        CHECK(gaussian_amid(pure_tmsv(1.0)).value
              == doctest::Approx(1.9146414384375401).epsilon(1e-12));
    }
}

TEST_CASE("closed form on the symmetric squeezed thermal family")
{
    SUBCASE("pure line reduces to the pure-state expression")
    {
        for (double r : {0.3, 0.8, 1.5}) {
            const double a = std::cosh(2.0 * r);
            const double nu = a - std::sqrt(a * a - 1.0); // e^{-2r}
            const double expect =
                2.0 * tmsv_entanglement_entropy(r) - std::log(std::cosh(2.0 * r));
            CHECK(sts_gamid_closed(a, nu) == doctest::Approx(expect).epsilon(1e-9));
        }
    }
    SUBCASE("matches the numeric optimizer")
    {
        for (double nu : {0.3, 0.6, 1.0, 1.2})
            for (double factor : {1.2, 2.0, 6.0}) {
                const double a_min = std::max(nu, (1.0 + nu * nu) / (2.0 * nu));
                const double a = a_min * factor;
                CHECK(sts_gamid_closed(a, nu)
                      == doctest::Approx(gaussian_amid(gmems(a, nu)).value).epsilon(1e-8));
            }
    }
    SUBCASE("branch expressions join continuously at the split")
    {
        // for a = 3 the split sits at nu = a - sqrt(a^4 - 4a^2 - 4a - 1)/a
        const double a = 3.0;
        const double nu = a - std::sqrt(a * a * a * a - 4.0 * a * a - 4.0 * a - 1.0) / a;
        const double c = a - nu;
        const double hom = std::log(a / std::sqrt(a * a - c * c));
        const double het = std::log((a + 1.0) * (a + 1.0)
                                    / ((a + 1.0) * (a + 1.0) - c * c));
        CHECK(hom == doctest::Approx(het).epsilon(1e-9));
    }
    SUBCASE("parameter range is enforced")
    {
        CHECK_THROWS_AS(sts_gamid_closed(1.0, 0.2), OutOfRange);
        CHECK_THROWS_AS(sts_gamid_closed(2.0, -0.1), OutOfRange);
    }
}

TEST_CASE("Gaussian discord")
{
    SUBCASE("product states have none")
    {
        CHECK(gaussian_discord(StandardFormCM{2.0, 3.0, 0.0, 0.0},
                               MeasureDirection::left).value == 0.0);
        CHECK(two_way_discord(StandardFormCM{2.0, 3.0, 0.0, 0.0}) == 0.0);
    }
    SUBCASE("pure states reduce to the entanglement entropy")
    {
        CHECK(gaussian_discord(pure_tmsv(1.0), MeasureDirection::left).value
              == doctest::Approx(1.6198220928977023).epsilon(1e-9));
    }
    SUBCASE("closed form on the squeezed thermal family")
    {
        for (double nu : {0.3, 0.7, 1.1})
            for (double factor : {1.3, 3.0}) {
                const double a_min = std::max(nu, (1.0 + nu * nu) / (2.0 * nu));
                const double a = a_min * factor;
                const OptResult d = gaussian_discord(gmems(a, nu), MeasureDirection::left);
                CHECK(d.value == doctest::Approx(sts_discord_closed(a, nu)).epsilon(1e-7));
                CHECK(d.branch == OptBranch::SqueezedThermalHet);
            }
    }
    SUBCASE("symmetric states have equal one-way discords")
    {
        const StandardFormCM sf{2.5, 2.5, 1.4, 0.6};
        CHECK(gaussian_discord(sf, MeasureDirection::left).value
              == doctest::Approx(gaussian_discord(sf, MeasureDirection::right).value)
                     .epsilon(1e-10));
    }
    SUBCASE("strongly asymmetric limit of the boundary family")
    {
        const double limit = 2.0 * std::sinh(1.0) * std::sinh(1.0)
                           * std::log(1.0 / std::tanh(1.0));
        CHECK(two_way_discord(cmivette(1.0, 10.0)) == doctest::Approx(limit).epsilon(2e-3));
        CHECK(gaussian_amid(cmivette(1.0, 10.0)).value
              == doctest::Approx(limit).epsilon(2e-3));
    }
}

TEST_CASE("an unsatisfiable disagreement tolerance trips the cross-check")
{
    // any non-product state runs the independent maximizer; a negative
    // tolerance can never be met, so the guard must raise
    CHECK_THROWS_AS(gaussian_classical_mi(StandardFormCM{3.0, 3.0, 2.0, 0.7}, -1.0),
                    OptimizerDisagreement);
    CHECK_THROWS_AS(gaussian_discord(gmems(3.0, 0.6), MeasureDirection::left, -1.0),
                    OptimizerDisagreement);
}

TEST_CASE("hierarchy of the symmetric nonclassicality measures")
{
    StateSampler sampler(SamplerConfig{4.0, 4.0, 777, PurityMode::mixed});
    FockOptions fo;
    fo.tail_tol = 1e-9;
    for (int k = 0; k < 40; ++k) {
        const StandardFormCM sf = sampler.next();
        const double dtw = two_way_discord(sf);
        const double amid = gaussian_amid(sf).value;
        const double m = mid(sf, fo).value;
        CHECK(gaussian_discord(sf, MeasureDirection::left).value <= dtw + 1e-12);
        CHECK(dtw <= amid + 1e-9);
        CHECK(dtw <= m + 1e-9);
    }
}
