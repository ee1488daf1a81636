#include <doctest.h>

#include <cmath>

#include "gaussdisturb/state.hpp"

using namespace gaussdisturb;

namespace {

/// Local rotation on each mode plus a local squeeze on A; symplectic, so
/// it must not change any measure-relevant invariant.
Mat4 locally_transformed(const StandardFormCM& sf, double thetaA, double thetaB,
                         double squeezeA)
{
    const Mat2 sa = Mat2::diag(std::exp(squeezeA), std::exp(-squeezeA));
    const Mat2 la = rotation(thetaA) * sa;
    const Mat2 lb = rotation(thetaB);
    const Mat4 s = direct_sum(la, lb);
    return s * to_cm(sf) * transpose(s);
}

} // namespace

TEST_CASE("validate on reference states")
{
    CHECK(validate(Mat4::identity()).is_positive);
    CHECK(validate(Mat4::identity()).nu_minus == doctest::Approx(1.0));

    Mat4 squeezed_below;
    squeezed_below(0, 0) = squeezed_below(1, 1) = 0.5;
    squeezed_below(2, 2) = squeezed_below(3, 3) = 1.0;
    CHECK_FALSE(validate(squeezed_below).is_positive);

    const PhysicalityReport pure = validate(to_cm(pure_tmsv(1.0)));
    CHECK(pure.is_positive);
    CHECK(pure.nu_minus == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("standard form is a fixed point of the reduction")
{
    const StandardFormCM sf{2.0, 3.0, 1.2, -0.5};
    const StandardFormCM back = to_standard_form(to_cm(sf));
    CHECK(back.a == doctest::Approx(sf.a).epsilon(1e-12));
    CHECK(back.b == doctest::Approx(sf.b).epsilon(1e-12));
    CHECK(back.c1 == doctest::Approx(sf.c1).epsilon(1e-12));
    CHECK(back.c2 == doctest::Approx(sf.c2).epsilon(1e-12));
}

TEST_CASE("reduction undoes local symplectics on a pure state")
{
    const Mat4 rotated = locally_transformed(pure_tmsv(0.5), 0.7, -1.1, 0.3);
    const StandardFormCM sf = to_standard_form(rotated);
    CHECK(sf.a == doctest::Approx(std::cosh(1.0)).epsilon(1e-10));
    CHECK(sf.b == doctest::Approx(std::cosh(1.0)).epsilon(1e-10));
    // the (c1, c2) split is degenerate on the pure line, so rounding of
    // the rotated matrix entries moves the roots by ~sqrt(eps)
    CHECK(sf.c1 == doctest::Approx(std::sinh(1.0)).epsilon(2e-8));
    CHECK(sf.c2 == doctest::Approx(-std::sinh(1.0)).epsilon(2e-8));
    CHECK(sf.c1 * sf.c2
          == doctest::Approx(-std::sinh(1.0) * std::sinh(1.0)).epsilon(1e-12));
}

TEST_CASE("reduction undoes local symplectics away from the degenerate line")
{
    const StandardFormCM sf{2.0, 3.0, 1.2, -0.5};
    const StandardFormCM back =
        to_standard_form(locally_transformed(sf, 0.7, -1.1, 0.3));
    CHECK(back.a == doctest::Approx(sf.a).epsilon(1e-10));
    CHECK(back.b == doctest::Approx(sf.b).epsilon(1e-10));
    CHECK(back.c1 == doctest::Approx(sf.c1).epsilon(1e-10));
    CHECK(back.c2 == doctest::Approx(sf.c2).epsilon(1e-10));
}

TEST_CASE("reduction preserves the four local invariants")
{
    const StandardFormCM states[] = {
        {2.0, 5.0, 1.5, -0.7}, {1.3, 1.1, 0.4, -0.2}, {3.0, 3.0, 2.5, -2.5}};
    for (const auto& sf : states) {
        const Mat4 g = locally_transformed(sf, 0.4, 1.9, -0.2);
        const StandardFormCM red = to_standard_form(g);
        CHECK(red.a * red.a == doctest::Approx(det(block_A(g))).epsilon(1e-10));
        CHECK(red.b * red.b == doctest::Approx(det(block_B(g))).epsilon(1e-10));
        CHECK(red.c1 * red.c2 == doctest::Approx(det(block_C(g))).epsilon(1e-10));
        CHECK(det(to_cm(red)) == doctest::Approx(det(g)).epsilon(1e-10));
        CHECK(red.c1 >= std::abs(red.c2));
    }
}

TEST_CASE("product of thermal states reduces to its parameters")
{
    const StandardFormCM sf = to_standard_form(to_cm(thermal_product(2.0, 5.0)));
    CHECK(sf.a == doctest::Approx(2.0));
    CHECK(sf.b == doctest::Approx(5.0));
    CHECK(sf.c1 == doctest::Approx(0.0));
    CHECK(sf.c2 == doctest::Approx(0.0));
}

TEST_CASE("named families")
{
    SUBCASE("pure TMSV covariances")
    {
        const StandardFormCM sf = pure_tmsv(1.0);
        CHECK(sf.a == doctest::Approx(std::cosh(2.0)).epsilon(1e-15));
        CHECK(sf.c1 == doctest::Approx(std::sinh(2.0)).epsilon(1e-15));
        CHECK(sf.c2 == doctest::Approx(-std::sinh(2.0)).epsilon(1e-15));
    }
    SUBCASE("gmems covariances")
    {
        const StandardFormCM sf = gmems(3.0, 0.5);
        CHECK(sf.a == doctest::Approx(3.0));
        CHECK(sf.b == doctest::Approx(3.0));
        CHECK(sf.c1 == doctest::Approx(2.5));
        CHECK(sf.c2 == doctest::Approx(-2.5));
    }
    SUBCASE("statistrani covariance")
    {
        const StandardFormCM sf = statistrani(2.0);
        CHECK(sf.c1 == doctest::Approx((4.0 - 1.0 - std::log(2.0)) / 2.0).epsilon(1e-15));
        CHECK(sf.c1 == doctest::Approx(1.1534264097200273).epsilon(1e-12));
        CHECK(sf.c2 == 0.0);
    }
    SUBCASE("glems keeps the covariance ordering convention")
    {
        const StandardFormCM sf = glems(3.0, 3.0);
        CHECK(sf.c1 >= std::abs(sf.c2));
        CHECK(validate(sf).is_positive);
    }
    SUBCASE("every family constructor output is physical")
    {
        CHECK(validate(pure_tmsv(2.5)).is_positive);
        CHECK(validate(thermal_product(1.0, 8.0)).is_positive);
        CHECK(validate(squeezed_thermal(2.0, 4.0, 1.5, -1)).is_positive);
        CHECK(validate(squeezed_thermal(2.0, 4.0, 1.5, +1)).is_positive);
        CHECK(validate(symmetric_sts(1.05, 0.3)).is_positive);
        CHECK(validate(gmems(10.0, 0.2)).is_positive);
        CHECK(validate(glems(10.0, 0.2)).is_positive);
        CHECK(validate(statistrani(1000.0)).is_positive);
        CHECK(validate(cmivette(1.0, 10.0)).is_positive);
    }
}

TEST_CASE("family round trips through the reduction")
{
    const StandardFormCM states[] = {pure_tmsv(0.8), gmems(4.0, 0.7),
                                     glems(5.0, 0.4), statistrani(3.0),
                                     cmivette(0.5, 2.0)};
    for (const auto& sf : states) {
        const StandardFormCM back = to_standard_form(to_cm(sf));
        CHECK(back.a == doctest::Approx(sf.a).epsilon(1e-10));
        CHECK(back.b == doctest::Approx(sf.b).epsilon(1e-10));
        CHECK(back.c1 == doctest::Approx(sf.c1).epsilon(1e-10));
        CHECK(back.c2 == doctest::Approx(sf.c2).epsilon(1e-10));
    }
}

TEST_CASE("family parameter ranges are enforced")
{
    CHECK_THROWS_AS(pure_tmsv(-0.1), OutOfRange);
    CHECK_THROWS_AS(gmems(1.0, 0.3), OutOfRange); // a below (1 + nu^2)/(2 nu)
    CHECK_THROWS_AS(gmems(2.0, 0.0), OutOfRange);
    CHECK_THROWS_AS(glems(1.2, 0.1), OutOfRange);
    CHECK_THROWS_AS(symmetric_sts(2.0, 2.0), OutOfRange); // c beyond sqrt(a^2-1)
    CHECK_THROWS_AS(thermal_product(0.5, 2.0), OutOfRange);
}

TEST_CASE("gmems parameter equals the partial-transpose eigenvalue")
{
    for (double nu : {0.2, 0.5, 0.9, 1.3})
        for (double factor : {1.05, 2.0, 10.0}) {
            const double a_min = std::max(nu, (1.0 + nu * nu) / (2.0 * nu));
            const StandardFormCM sf = gmems(a_min * factor, nu);
            CHECK(partial_transpose_spectrum(sf).nu_minus
                  == doctest::Approx(nu).epsilon(1e-10));
        }
}

TEST_CASE("vacuum marginals are flagged but remain physical")
{
    const PhysicalityReport rep = validate(thermal_product(1.0, 3.0));
    CHECK(rep.is_positive);
    REQUIRE(rep.messages.size() == 1);
    CHECK(rep.messages[0].find("degenerate marginal") != std::string::npos);
}

TEST_CASE("family name lookup")
{
    CHECK(family_from_name("gmems") == StateFamily::Gmems);
    CHECK(family_name(StateFamily::Cmivette) == "cmivette");
    CHECK_THROWS_AS(family_from_name("nope"), ParseError);
}
