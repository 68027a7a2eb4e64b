#ifndef QSTAB_STAB_P1_HPP
#define QSTAB_STAB_P1_HPP

#include "qstab/types.hpp"

#include <optional>

namespace qstab::p1 {

/// A point of Stab(P1)/G_a in the chart X_k where O(k) and O(k-1) are
/// stable. The chart coordinate phi_k = log Z(O(k)) - log Z(O(k-1)) lives in
/// the open upper half plane; the Bessel argument is x = (-1)^{k-1} e^tau.
struct StabPoint {
    Complex tau;
    int chart_k = 1;
    Complex phi_k;
    Complex Z_point;  // i pi I0(x)
    Complex Z_line;   // K0(x)
    bool slope_stable = false;  // Im phi_k in (0, pi): slope-stability strip
};

struct Path {
    Complex b, a;
    int chart_k = 1;
    Complex kappa;  // (-1)^{k-1} 2 e^{b-a}
    bool boundary_case = false;  // kappa real: no Key-Lemma SOD
    std::vector<double> t;
    std::vector<StabPoint> samples;
    std::optional<double> eventual_t_star;  // first t with Im phi_k > pi
    double tail_law_residual = 0.0;  // |phi - (2 kappa t + i pi/2)| at t1
};

struct EventualObject {
    std::string label;
    Vector class_v;       // twisted Chern character coordinates
    Complex alpha;        // predicted exponent (+/- kappa)
    double fitted_rate;   // measured growth rate of Z_t
};

/// The continuous log-lift f(x) = ln((K0 + i pi I0)/K0) with f(0) = 0,
/// continued along the segment from 0 to x (x in the closed upper half
/// plane). Throws when branch tracking cannot be refined.
Complex brane_coordinate(Complex x);

/// Chart point for a global coordinate tau. Im tau on a strip boundary pi*m
/// is assigned to the chart having it as lower boundary (k = m + 1), which
/// keeps the Bessel argument on the positive real axis there.
StabPoint b_map(Complex tau);

/// Residual of the gluing identity
///   (K0(e^x)+i pi I0(e^x))/K0(e^x) = 2 - K0(-e^x)/(K0(-e^x)+i pi I0(-e^x))
/// for real x, evaluated internally in quadruple precision so the
/// left-half-plane cancellation does not mask the comparison.
Complex glue_check(double x);

/// The QDE path sigma_t = B(ln(2t) + b - a) sampled on a geometric grid with
/// t0 >= 1. Branch continuity is maintained along the path with adaptive
/// refinement.
Path qde_path(Complex b, Complex a, const Grid& grid);

/// The two eventually semistable objects O(k-1), O(k) with their exponent
/// classes; growth rates are measured from the sampled charges and must land
/// within 1e-2 of Re(-/+ kappa). Requires the path to have entered the
/// eventual regime.
std::vector<EventualObject> eventual_objects(const Path& path);

/// Fundamental solution of the P1 quantum differential equation matched to
/// the path charges: integral of column against the point-class dual
/// reproduces Z_t(O(k-1)) = K0(kappa t) and Z_t(O_p) = i pi I0(kappa t).
/// Built in closed form from Bessel data.
Matrix matched_fundamental_solution(const Path& path, double t);

/// Class vectors v(O(m)) = [1, 2 pi i m]^T and v(O_p) = [0, 2 pi i]^T.
Vector class_line_bundle(int m);
Vector class_point();

}  // namespace qstab::p1

#endif
