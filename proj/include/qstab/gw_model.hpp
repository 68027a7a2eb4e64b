#ifndef QSTAB_GW_MODEL_HPP
#define QSTAB_GW_MODEL_HPP

#include "qstab/rational.hpp"
#include "qstab/types.hpp"

#include <optional>

namespace qstab::gw {

struct BasisElement {
    std::string label;
    int deg = 0;  // cohomological degree, even
};

/// A relative curve class with its precomputed intersection numbers and the
/// two-point operator T_d. T_d is homogeneous of degree 2(1 - c1.d) and
/// symmetric for the Poincare pairing.
struct CurveClass {
    std::string label;
    int c1_dot_d = 0;
    double omega_dot_d = 0.0;  // >= 0
    double b_dot_d = 0.0;
    RationalMatrix t_d;
};

/// Finite model of the algebraic cohomology: graded basis, Poincare pairing,
/// cup with c1, diagonal grading operator mu = (deg - dim)/2, and the curve
/// classes feeding the truncated quantum endomorphism.
struct CohModel {
    int dim_x = 0;
    std::vector<BasisElement> basis;
    RationalMatrix pairing;
    RationalMatrix c1_cup;
    std::vector<Rational> mu_diag;
    std::vector<CurveClass> curve_classes;

    int dim() const { return static_cast<int>(basis.size()); }

    Eigen::MatrixXd pairing_d() const;
    Eigen::MatrixXd c1_cup_d() const;
    Eigen::MatrixXd mu_d() const;
};

/// The pair (psi, z): z scales the differential equation, scale_omega is the
/// global multiplier r applied to every omega.d (the small-omega dial).
struct TruncationParams {
    Complex z{1.0, 0.0};
    double scale_omega = 1.0;

    TruncationParams() = default;
    TruncationParams(Complex z_, double r) : z(z_), scale_omega(r) {
        if (z == Complex(0.0, 0.0)) throw std::invalid_argument("TruncationParams: z != 0");
        if (!(scale_omega > 0.0)) throw std::invalid_argument("TruncationParams: scale_omega > 0");
    }
};

struct ValidationReport {
    bool pass = true;
    std::vector<std::string> violations;
};

/// Checks every model invariant exactly on the rational data: pairing
/// symmetry and non-degeneracy, mu anti-symmetry and half-integrality,
/// c1-cup degree shift, T_d pairing symmetry, T_d homogeneity, and the
/// degree window for nonzero T_d.
ValidationReport validate_model(const CohModel& model);

/// Classes with (c1.d - r omega.d) > 0 and T_d != 0. Throws on stored
/// classes with T_d != 0 outside 0 < c1.d <= dim+1 (corrupted input data).
std::vector<CurveClass> admissible_classes(const CohModel& model, const TruncationParams& params);

/// E_psi(u) = c1 cup + sum over admissible d of
///   (c1.d) u^{c1.d} exp(-(r omega.d + i B.d)) T_d.
Matrix truncated_endomorphism(const CohModel& model, const TruncationParams& params, Complex u);

/// P^1 in the basis (1, H): pairing [[0,1],[1,0]], mu = diag(-1/2, 1/2),
/// c1 = 2H, one curve class with c1.d = 2 and psi.d = 2a.
CohModel builtin_p1(Complex a = 0.0);

/// Genus-g curve, g >= 1: same basis and pairing, c1 = (2-2g)H, no curve
/// classes. Genus 0 routes to builtin_p1.
CohModel builtin_curve(int genus);

}  // namespace qstab::gw

#endif
