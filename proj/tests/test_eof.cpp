#include <doctest.h>

#include <cmath>

#include "gaussdisturb/eof.hpp"
#include "gaussdisturb/fock.hpp"
#include "gaussdisturb/povm.hpp"

using namespace gaussdisturb;

TEST_CASE("symmetric entanglement of formation")
{
    CHECK(eof_symmetric(1.0) == 0.0);
    CHECK(eof_symmetric(1.5) == 0.0);
    CHECK(eof_symmetric(0.5) == doctest::Approx(0.3924361078234109).epsilon(1e-13));
    CHECK_THROWS_AS(eof_symmetric(0.0), OutOfRange);
    CHECK_THROWS_AS(eof_symmetric(-0.2), OutOfRange);
}

TEST_CASE("pure line: formation entanglement equals the entropy of entanglement")
{
    for (double r : {0.2, 0.7, 1.3, 2.0})
        CHECK(eof_symmetric(std::exp(-2.0 * r))
              == doctest::Approx(tmsv_entanglement_entropy(r)).epsilon(1e-10));
}

TEST_CASE("formation entanglement is strictly decreasing and continuous at 1")
{
    double prev = eof_symmetric(0.01);
    for (double nu = 0.05; nu < 1.0; nu += 0.05) {
        const double e = eof_symmetric(nu);
        CHECK(e < prev);
        prev = e;
    }
    CHECK(eof_symmetric(1.0 - 1e-8) < 1e-7);
}

TEST_CASE("upper bound on the Gaussian disturbance at fixed entanglement")
{
    CHECK(gamid_upper_bound(1.0) == doctest::Approx(1.0).epsilon(1e-12));

    const double split = 4.0 / std::exp(1.0) - 1.0;
    const double b1 = 1.0 + 2.0 * std::log1p(split) - std::log(4.0 * split);
    const double b2 = std::log1p(split) - std::log(split);
    CHECK(b1 == doctest::Approx(b2).epsilon(1e-12));
    CHECK(gamid_upper_bound(split) == doctest::Approx(b1).epsilon(1e-12));

    // strongly entangled limit: bound approaches E + ln 4 - 1
    const double nu = 1e-4;
    CHECK(gamid_upper_bound(nu) - eof_symmetric(nu)
          == doctest::Approx(std::log(4.0) - 1.0).epsilon(1e-3));

    CHECK_THROWS_AS(gamid_upper_bound(0.0), OutOfRange);
    CHECK_THROWS_AS(gamid_upper_bound(1.5), OutOfRange);
}

TEST_CASE("the bound dominates the closed form at moderate entanglement")
{
    const double split = 4.0 / std::exp(1.0) - 1.0;
    for (double nu : {0.48, 0.6, 0.8, 0.99})
        for (double factor : {1.01, 2.0, 10.0, 100.0}) {
            const double a_min = std::max(nu, (1.0 + nu * nu) / (2.0 * nu));
            const double a = std::min(a_min * factor, 1000.0);
            CHECK(nu >= split);
            CHECK(sts_gamid_closed(a, nu) <= gamid_upper_bound(nu) + 1e-9);
        }
    // at strong entanglement the second branch is only asymptotic: the
    // family approaches it from above, with excess below ln(1 + nu)
    for (double nu : {0.05, 0.1, 0.2})
        for (double factor : {2.0, 10.0, 100.0}) {
            const double a_min = std::max(nu, (1.0 + nu * nu) / (2.0 * nu));
            const double a = std::min(a_min * factor, 1000.0);
            const double excess = sts_gamid_closed(a, nu) - gamid_upper_bound(nu);
            CHECK(excess <= std::log1p(nu) + 1e-6);
        }
}

TEST_CASE("sandwich check on representative states")
{
    SUBCASE("entangled states")
    {
        const SandwichReport rep = check_sandwich(gmems(5.0, 0.2));
        CHECK(rep.lower_ok);
        CHECK(rep.upper_ok);
        CHECK(rep.eof == doctest::Approx(eof_symmetric(0.2)));
    }
    SUBCASE("separable states have zero formation entanglement")
    {
        const SandwichReport rep = check_sandwich(gmems(2.0, 1.0));
        CHECK(rep.eof == 0.0);
        CHECK(rep.lower_ok);
    }
    SUBCASE("requires the symmetric squeezed thermal family")
    {
        CHECK_THROWS_AS(check_sandwich(StandardFormCM{2.0, 3.0, 1.0, -1.0}), DomainError);
    }
}

TEST_CASE("strong-noise limit of the second symmetric family")
{
    // for large a the optimal Gaussian POVM is double homodyne and the
    // disturbance approaches 1 - ln(4 nu) + ln(1 + nu^2)
    for (double nu : {0.2, 0.5}) {
        const double limit = 1.0 - std::log(4.0 * nu) + std::log1p(nu * nu);
        const double value = gaussian_amid(glems(2000.0, nu)).value;
        CHECK(value == doctest::Approx(limit).epsilon(5e-3));
    }
}
