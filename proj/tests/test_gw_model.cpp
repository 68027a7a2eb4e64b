#include "qstab/gw_model.hpp"

#include <doctest.h>

#include <cmath>

using namespace qstab;
using namespace qstab::gw;

TEST_CASE("builtin models pass validation") {
    CHECK(validate_model(builtin_p1(0.0)).pass);
    CHECK(validate_model(builtin_p1(Complex(0.3, -0.8))).pass);
    CHECK(validate_model(builtin_curve(1)).pass);
    CHECK(validate_model(builtin_curve(2)).pass);
    CHECK(builtin_curve(0).curve_classes.size() == 1);  // routed to P1
}

TEST_CASE("validation flags constructed violations") {
    CohModel m = builtin_p1(0.0);
    m.curve_classes[0].t_d(0, 1) = Rational(0);
    m.curve_classes[0].t_d(0, 0) = Rational(1);  // kills symmetry and homogeneity
    const auto rep = validate_model(m);
    CHECK_FALSE(rep.pass);
    bool saw_symmetry = false;
    for (const auto& v : rep.violations) saw_symmetry |= v.find("symmetric") != std::string::npos;
    CHECK(saw_symmetry);

    CohModel deg = builtin_p1(0.0);
    deg.pairing(0, 1) = Rational(0);
    deg.pairing(1, 0) = Rational(0);
    CHECK_FALSE(validate_model(deg).pass);

    CohModel window = builtin_p1(0.0);
    window.curve_classes[0].c1_dot_d = 5;  // > dim+1 with T_d nonzero
    CHECK_FALSE(validate_model(window).pass);

    CohModel mu_bad = builtin_p1(0.0);
    mu_bad.mu_diag[0] = Rational(1, 2);
    CHECK_FALSE(validate_model(mu_bad).pass);
}

TEST_CASE("admissible classes filter") {
    const CohModel p1 = builtin_p1(Complex(0.05, 0.0));  // omega.d = 0.1
    CHECK(admissible_classes(p1, TruncationParams(1.0, 1.0)).size() == 1);
    CHECK(admissible_classes(p1, TruncationParams(1.0, 30.0)).empty());  // 30*0.1 >= 2
    CHECK(admissible_classes(builtin_curve(2), TruncationParams(1.0, 1.0)).empty());
    CHECK(admissible_classes(builtin_curve(1), TruncationParams(1.0, 1.0)).empty());

    // monotone: larger r never adds classes
    std::size_t prev = 2;
    for (double r : {0.5, 5.0, 19.9, 20.1, 100.0}) {
        const auto n = admissible_classes(p1, TruncationParams(1.0, r)).size();
        CHECK(n <= prev);
        prev = n;
    }

    CohModel corrupt = builtin_p1(0.0);
    corrupt.curve_classes[0].c1_dot_d = 7;
    CHECK_THROWS_AS(admissible_classes(corrupt, TruncationParams(1.0, 1.0)),
                    std::invalid_argument);
}

TEST_CASE("truncated endomorphism on the builtin models") {
    const CohModel p1 = builtin_p1(0.0);
    const TruncationParams params(1.0, 1.0);

    Matrix e1 = truncated_endomorphism(p1, params, 1.0);
    CHECK(std::abs(e1(0, 1) - 2.0) < 1e-15);
    CHECK(std::abs(e1(1, 0) - 2.0) < 1e-15);
    CHECK(std::abs(e1(0, 0)) + std::abs(e1(1, 1)) == 0.0);

    Matrix e2 = truncated_endomorphism(p1, params, 2.0);
    CHECK(std::abs(e2(0, 1) - 8.0) < 1e-14);
    CHECK(std::abs(e2(1, 0) - 2.0) < 1e-15);

    // genus 2: c1 cup only, for any u
    const Matrix eg = truncated_endomorphism(builtin_curve(2), params, Complex(3.0, 1.0));
    CHECK(eg(1, 0) == Complex(-2.0, 0.0));
    CHECK(std::abs(eg(0, 0)) + std::abs(eg(0, 1)) + std::abs(eg(1, 1)) == 0.0);

    // genus 1: the zero matrix
    CHECK(truncated_endomorphism(builtin_curve(1), params, Complex(2.0, -1.0)).norm() == 0.0);

    // exponential weight: psi = 2aH shifts the top-right entry by e^{-2a}
    const Matrix ea = truncated_endomorphism(builtin_p1(Complex(0.25, 0.5)), params, 1.0);
    CHECK(std::abs(ea(0, 1) - 2.0 * std::exp(-Complex(0.5, 1.0))) < 1e-15);
}

TEST_CASE("E_psi(1) is symmetric for the pairing") {
    for (const CohModel& m : {builtin_p1(Complex(0.1, 0.4)), builtin_curve(3)}) {
        const Matrix e = truncated_endomorphism(m, TruncationParams(1.0, 1.0), 1.0);
        const Matrix p = m.pairing_d().cast<Complex>();
        CHECK((e.transpose() * p - p * e).norm() < 1e-12);
    }
}

TEST_CASE("degree shift of T_d matches 2(1 - c1.d)") {
    const CohModel p1 = builtin_p1(0.0);
    for (const auto& cc : admissible_classes(p1, TruncationParams(1.0, 1.0))) {
        const int shift = 2 * (1 - cc.c1_dot_d);
        for (int i = 0; i < p1.dim(); ++i)
            for (int j = 0; j < p1.dim(); ++j)
                if (!cc.t_d(i, j).is_zero())
                    CHECK(p1.basis[i].deg - p1.basis[j].deg == shift);
    }
}
