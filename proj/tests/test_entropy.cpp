#include <doctest.h>

#include <cmath>

#include "gaussdisturb/entropy.hpp"

using namespace gaussdisturb;

namespace {

/// Independent oracle: a thermal mode with symplectic eigenvalue x has
/// mean photon number (x-1)/2; sum the geometric spectrum directly.
double thermal_entropy_series(double x)
{
    const double nbar = 0.5 * (x - 1.0);
    if (nbar <= 0.0)
        return 0.0;
    const double ratio = nbar / (1.0 + nbar);
    double s = 0.0;
    double p = 1.0 / (1.0 + nbar);
    for (int k = 0; k < 100000 && p > 1e-300; ++k) {
        s -= p * std::log(p);
        p *= ratio;
    }
    return s;
}

} // namespace

TEST_CASE("entropy kernel reference values")
{
    CHECK(entropy_F(1.0) == 0.0);
    CHECK(entropy_F(3.0) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-15));
    CHECK(entropy_F(std::cosh(2.0)) == doctest::Approx(1.6198220928977023).epsilon(1e-14));
}

TEST_CASE("entropy kernel equals the thermal spectrum sum")
{
    for (double x : {1.0 + 1e-8, 1.2, 2.0, 3.7, 10.0, 55.0})
        CHECK(entropy_F(x) == doctest::Approx(thermal_entropy_series(x)).epsilon(1e-12));
}

TEST_CASE("entropy kernel domain handling")
{
    CHECK(entropy_F(1.0 - 1e-10) == 0.0); // clamped
    CHECK(entropy_F(1.0 + 1e-13) == 0.0); // below the 0*log0 noise floor
    CHECK_THROWS_AS(entropy_F(0.999), DomainError);

    // strictly increasing beyond 1
    double prev = 0.0;
    for (double x = 1.001; x < 50.0; x *= 1.7) {
        const double f = entropy_F(x);
        CHECK(f > prev);
        prev = f;
    }

    // asymptotic form ln(x/2) + 1 for large arguments
    CHECK(entropy_F(1e8) == doctest::Approx(std::log(0.5e8) + 1.0).epsilon(1e-10));
    CHECK(std::isfinite(entropy_F(1e300)));
}

TEST_CASE("mutual information of reference states")
{
    CHECK(quantum_mutual_information(StandardFormCM{2.0, 5.0, 0.0, 0.0}) == 0.0);

    const double two_f = 2.0 * entropy_F(std::cosh(2.0));
    CHECK(quantum_mutual_information(pure_tmsv(1.0)) == doctest::Approx(two_f).epsilon(1e-12));

    // independent evaluation for a = b = 2, c1 = 1, c2 = 0:
    // Delta = 8, det gamma = 12, nu+^2 = 6, nu-^2 = 2
    const double expect = 2.0 * entropy_F(2.0) - entropy_F(std::sqrt(6.0))
                        - entropy_F(std::sqrt(2.0));
    CHECK(expect == doctest::Approx(0.18279558981651695).epsilon(1e-12));
    CHECK(quantum_mutual_information(StandardFormCM{2.0, 2.0, 1.0, 0.0})
          == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("mutual information invariances")
{
    const StandardFormCM sf{2.0, 3.0, 1.2, -0.4};
    const StandardFormCM swapped{3.0, 2.0, 1.2, -0.4};
    CHECK(quantum_mutual_information(sf)
          == doctest::Approx(quantum_mutual_information(swapped)).epsilon(1e-12));

    // zero iff uncorrelated
    CHECK(quantum_mutual_information(StandardFormCM{1.7, 4.0, 0.0, 0.0}) == 0.0);
    CHECK(quantum_mutual_information(StandardFormCM{1.7, 4.0, 0.3, 0.0}) > 1e-4);

    // raw-CM evaluation agrees with the standard-form one
    const Mat2 la = rotation(0.6), lb = rotation(-1.3);
    const Mat4 rotated = direct_sum(la, lb) * to_cm(sf) * transpose(direct_sum(la, lb));
    CHECK(quantum_mutual_information(rotated)
          == doctest::Approx(quantum_mutual_information(sf)).epsilon(1e-11));
}
