#ifndef QSTAB_SOD_HPP
#define QSTAB_SOD_HPP

#include "qstab/qde.hpp"
#include "qstab/types.hpp"

#include <optional>

namespace qstab::sod {

/// Sampled central charge of one object class along the path.
struct ChargeSeries {
    std::string label;
    Vector class_v;
    std::vector<double> t;
    std::vector<Complex> Z;
    bool eventually_semistable = true;  // flag supplied by the geometry side
};

struct FitOptions {
    double fit_tol = 1e-3;        // acceptance threshold for the sup residual
    bool include_sqrt_term = false;  // add t^{1/2} for possible ramification
};

/// alpha t + gamma ln t + beta fit of the continuous log-lift on the tail
/// half of the grid.
struct AsymptoticFit {
    std::string label;
    Vector class_v;
    Complex alpha;
    Complex gamma;
    Complex beta;
    Complex sqrt_coeff;       // only with include_sqrt_term
    double residual_sup = 0.0;   // over the fitted tail
    double residual_late = 0.0;  // refit on the last quarter
    bool accepted = false;
    bool quasi_convergent = true;  // false when late residuals fail to shrink
    bool eventually_semistable = true;
};

/// Thrown by cluster_and_order on a condition-(3) violation: two exponent
/// clusters with equal imaginary parts but different real parts.
struct GenericityViolation : std::runtime_error {
    Complex alpha_a, alpha_b;
    GenericityViolation(const std::string& what, Complex a, Complex b)
        : std::runtime_error(what), alpha_a(a), alpha_b(b) {}
};

struct Member {
    std::string label;
    Vector class_v;
    Complex beta;
    Complex limit_Z;  // lim e^{-alpha t} t^{-gamma} Z_t
};

struct Cluster {
    Complex alpha;
    Complex gamma;
    std::vector<Member> members;
};

struct SpanningEntry {
    double r;        // candidate growth level (real part of an exponent)
    int dim_f;       // measured dimension of F^r
    int dim_span;    // span of classes of matching eventually semistable objects
    bool holds;
};

struct SODResult {
    std::vector<Cluster> clusters;  // ordered by Im(alpha) ascending
    bool lattice_direct_sum = false;
    bool genericity_ok = true;
    std::vector<SpanningEntry> spanning;
};

/// Continuous-log least squares against {t, ln t, 1} on the tail half.
/// Throws when Z vanishes on the tail; flags non-shrinking residuals.
AsymptoticFit fit_asymptotics(const ChargeSeries& series, const FitOptions& opt = {});

/// Groups accepted fits by alpha within tol (componentwise), enforces the
/// genericity condition, and orders clusters by Im(alpha).
SODResult cluster_and_order(const std::vector<AsymptoticFit>& fits, double tol = 1e-4);

/// Fills in limit charges (Richardson in 1/t over spread tail points) and the
/// lattice direct-sum check across every cluster member class.
void build_sod(SODResult& skeleton, const std::vector<ChargeSeries>& series);

/// Spanning condition at level r: dimension of
/// F^r = {alpha : ln||Phi_t alpha|| <= r t + o(t)} measured from singular
/// value growth of the sampled fundamental solution, against the span of
/// classes of eventually semistable objects with fitted Re(alpha) <= r whose
/// |Z_t| / ||Phi_t v|| stays above the floor.
SpanningEntry spanning_check(const qde::FundamentalSolution& phi, const RowVector& charge_row,
                             const std::vector<AsymptoticFit>& fits, double r,
                             double rate_tol = 5e-3, double ratio_floor = 1e-6);

}  // namespace qstab::sod

#endif
