#ifndef QSTAB_CURVES_HPP
#define QSTAB_CURVES_HPP

#include "qstab/types.hpp"

namespace qstab::curves {

enum class OutputKind { sod_candidate, two_step_filtration };

/// A path s -> tau(s) = Z_s(O_p)/Z_s(O_X) in the upper-half-plane model of
/// Stab(X)/G_a for a genus-g curve. lifts is certified, not just sampled:
/// Im tau(s) is a ratio of a real quadratic in s over |denominator|^2, so its
/// sign over each grid interval is decided from the quadratic.
struct HgPath {
    int g = 1;
    double theta = 0.0;
    Complex a_param;
    Complex tau0, tau_inf;
    std::vector<double> s;
    std::vector<Complex> tau;
    bool lifts = false;
    double min_im_tau = 0.0;
    bool limit_is_boundary = false;  // canonical path: tau -> 0, not in H
    OutputKind output = OutputKind::sod_candidate;
};

/// tau(s) = (a e^{i theta} s tau_inf + tau0)/(a e^{i theta} s + 1) on the
/// grid. Throws when the denominator vanishes on the grid.
HgPath path_tau(int g, double theta, Complex a, Complex tau0, Complex tau_inf,
                const std::vector<double>& s_grid);

/// The safe choice a = e^{-i theta}: the path stays on the segment
/// [tau0, tau_inf] for s > 0 and hence lifts for tau0, tau_inf in H.
/// Throws when a sample leaves the segment by more than 1e-10.
HgPath safe_path(int g, double theta, Complex tau0, Complex tau_inf,
                 const std::vector<double>& s_grid);

/// Gamma-class path tau(s) = 2 pi i / (e^{i theta} s + 2(g-1) C_eu) for
/// g >= 2; limits to the boundary point 0 and is tagged as the two-step
/// torsion filtration rather than an SOD.
HgPath canonical_path(int g, double theta, const std::vector<double>& s_grid);

/// Central charges from the closed-form fundamental solution:
/// Z_t(E) = [0,1] (1 + (2g-2)/z ln(t) N) A v(E) with N = [[0,0],[1,0]].
/// Returns (Z(O_X), Z(O_p)); throws when Z(O_X) = 0.
std::pair<Complex, Complex> hg_central_charges(int g, Complex z, const Matrix& a, double t);

/// A-matrix with path parameters (a, tau0, tau_inf) in its columns.
Matrix charge_matrix(Complex a, Complex tau0, Complex tau_inf);

}  // namespace qstab::curves

#endif
