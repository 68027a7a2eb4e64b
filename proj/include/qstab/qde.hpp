#ifndef QSTAB_QDE_HPP
#define QSTAB_QDE_HPP

#include "qstab/gw_model.hpp"
#include "qstab/linalg.hpp"
#include "qstab/types.hpp"

#include <functional>
#include <optional>

namespace qstab::qde {

enum class SolutionKind { closed_form_curve, canonical_curve, numeric };

/// Sampled matrix-valued fundamental solution. Samples hold the rescaled
/// matrix together with a log-gauge g so the true solution is exp(g) * phi.
/// The gauge keeps entries below 1e150 on long runs where exp(lambda t)
/// overflows doubles; log-asymptotics are unaffected.
struct FundamentalSolution {
    SolutionKind kind = SolutionKind::numeric;
    struct Sample {
        double t;
        Matrix phi;
        double log_gauge;
    };
    std::vector<Sample> samples;

    Matrix at(int i) const;          // true matrix, may overflow for large gauges
    Complex log_det_drift(int i) const;  // ln det(phi_i / phi_0), gauge included
};

struct AsymptoticSpectrum {
    Vector eigenvalues;  // of -(1/z) E_psi(1)
    int ramification_order = 0;  // 1 when semisimple with distinct eigenvalues, else 0 = unknown
    bool distinct_real_parts = false;
    bool distinct_imag_parts = false;
    linalg::Spectrum full;
};

/// Adaptive Dormand-Prince 5(4) for the linear matrix ODE phi' = A(t) phi,
/// sampled on the grid. Relative tolerance 1e-10 by default. Throws on
/// step-size underflow, reporting the last good t.
FundamentalSolution integrate_linear(const std::function<Matrix(double)>& rhs_matrix,
                                     const Matrix& phi0, const Grid& grid,
                                     double rel_tol = 1e-10);

/// Modified form: phi' = (-(1/z) E_psi(1) + mu / t) phi.
FundamentalSolution integrate_modified(const gw::CohModel& model,
                                       const gw::TruncationParams& params, const Matrix& phi0,
                                       const Grid& grid, double rel_tol = 1e-10);

/// Unmodified form: t phi' = -(1/z) E_psi(t) phi. Related to the modified
/// form by zeta~ = t^mu zeta.
FundamentalSolution integrate_raw(const gw::CohModel& model, const gw::TruncationParams& params,
                                  const Matrix& phi0, const Grid& grid, double rel_tol = 1e-10);

/// Closed form for genus-g curves: phi_t = t^{(-1/z) c1} A with
/// A = [[1, 0], [2(g-1) C_eu, 1]].
Matrix canonical_solution_curve(int genus, Complex z, double t);

/// Eigenvalues of -(1/z) E_psi(1) with distinctness flags.
AsymptoticSpectrum asymptotic_spectrum(const gw::CohModel& model,
                                       const gw::TruncationParams& params);

struct GrowthFit {
    double rate = 0.0;      // coefficient of t
    double log_coeff = 0.0; // coefficient of ln t
    double intercept = 0.0;
    double residual = 0.0;  // RMS over the fitted tail
};

/// Least-squares growth rate of ln|f| on the tail half of a geometric grid,
/// fitted against {t, ln t, 1}; the reported rate is the t coefficient.
/// Throws when every tail sample vanishes.
GrowthFit growth_rate(const std::vector<double>& t, const std::vector<Complex>& f);

/// Pairing of phi * v against the fundamental class: (phi v, 1)_X. For the
/// two-dimensional curve models this is the second coordinate.
Complex integrate_class(const gw::CohModel& model, const Matrix& phi, const Vector& v);

/// Row functional alpha -> (alpha, 1)_X in model coordinates.
RowVector integration_row(const gw::CohModel& model);

}  // namespace qstab::qde

#endif
