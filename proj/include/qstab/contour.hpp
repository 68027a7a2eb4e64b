#ifndef QSTAB_CONTOUR_HPP
#define QSTAB_CONTOUR_HPP

#include "qstab/types.hpp"

namespace qstab::contour {

/// Quadrature controls for the Landau-Ginzburg contour integrals
/// (1/2) int exp(-(x + (kappa t)^2 / 4x)) dx/x.
struct Options {
    double tail_cutoff = 1e-18;  // truncate unbounded legs below this integrand size
    int samples_per_unit = 48;   // Gauss-Legendre panel density in the log variable
    int circle_points = 512;     // trapezoid nodes on the unit circle
};

struct QuadratureResult {
    Complex value;
    double est_error;   // truncation remainder bound plus refinement estimate
    double cutoff_used; // log-coordinate extent of the unbounded legs
};

/// Skyscraper charge over the closed unit circle; equals i pi I0(kappa t).
QuadratureResult skyscraper_charge(Complex kappa, double t, const Options& opt = {});

/// Line-bundle charge over the contour C_theta (image under exp of the legs
/// (-inf,0] + i theta, i[theta, 0], [0, inf)); equals K0(kappa t). Throws
/// when the 0-end leg fails its convergence condition
/// Re((kappa t)^2 e^{-i theta}) > 0.
QuadratureResult linebundle_charge(Complex kappa, double t, double theta,
                                   const Options& opt = {});

}  // namespace qstab::contour

#endif
