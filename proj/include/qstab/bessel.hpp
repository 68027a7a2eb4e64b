#ifndef QSTAB_BESSEL_HPP
#define QSTAB_BESSEL_HPP

#include "qstab/types.hpp"

namespace qstab::bessel {

/// All functions here live on the cut plane with the branch cut along the
/// negative imaginary axis i*(-inf, 0], so arguments are taken in
/// (-pi/2, 3pi/2]. I0 is entire; K0 and the cut-plane log are single valued
/// off the cut and agree with the usual principal branches on the right half
/// plane.

enum class Regime { series, asymptotic };

struct BesselValue {
    Complex value;
    Regime regime = Regime::series;
    double est_error = 0.0;  // normalized: abs error / (1 + |value|)
};

/// log with branch cut along i*(-inf,0], arg in (-pi/2, 3pi/2].
Complex log_cut(Complex z);

/// True when z sits on the closed cut ray (including 0).
bool on_cut(Complex z);

/// Modified Bessel I0. Power series for |z| <= 20, optimally truncated
/// asymptotic expansion beyond (reflected through I0(-z) = I0(z) so the
/// expansion is evaluated inside its sector).
BesselValue i0(Complex z);

/// Modified Bessel K0 on the cut plane. Series for |z| <= 20 with Re z >= 0;
/// asymptotic beyond; left half plane via K0(z) = K0(-z) - i pi I0(-z).
BesselValue k0(Complex z);

/// The displayed low-order asymptotic forms, truncated after `order` terms
/// beyond the leading one (order in 0..2). Requires |u| >= 10 and u in the
/// sector (-pi/2, 3pi/2) away from the cut.
BesselValue asymptotic_i0(Complex u, int order);
BesselValue asymptotic_k0(Complex u, int order);

/// Optimally truncated asymptotic evaluations (the |z| > 20 production
/// regime), usable down to |u| >= 10 for overlap validation against the
/// series.
BesselValue asymptotic_i0_full(Complex u);
BesselValue asymptotic_k0_full(Complex u);

/// The second-solution combination K0(z) + i pi I0(z). For Re z < 0 this is
/// K0(-z) by the connection formula, which avoids the catastrophic
/// cancellation of the direct sum there.
BesselValue k0_plus_i_pi_i0(Complex z);

/// d/dz derivatives (term-differentiated series; differentiated expansion in
/// the asymptotic regime).
Complex i0_prime(Complex z);
Complex k0_prime(Complex z);

/// g(x) = x K0(x) (K0(x) + i pi I0(x)) for Im(x) >= 0, x != 0.
/// Im g > 0 on the closed upper half plane minus the origin.
Complex g_positivity(Complex x);

}  // namespace qstab::bessel

#endif
