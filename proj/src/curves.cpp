#include "qstab/curves.hpp"

#include <cmath>

namespace qstab::curves {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Im tau(s) = q(s) / |A s + 1|^2 with q real quadratic; returns q coefficients
// for tau(s) = (A s tau_inf + tau0) / (A s + 1)
struct ImQuadratic {
    double c2, c1, c0;
    double eval(double s) const { return (c2 * s + c1) * s + c0; }
    double min_on(double lo, double hi) const {
        double m = std::min(eval(lo), eval(hi));
        if (c2 != 0.0) {
            const double v = -c1 / (2.0 * c2);
            if (v > lo && v < hi) m = std::min(m, eval(v));
        }
        return m;
    }
};

ImQuadratic im_numerator(Complex a_eff, Complex tau0, Complex tau_inf) {
    // (A tau_inf s + tau0)(conj(A) s + 1):
    //   s^2 |A|^2 Im(tau_inf) + s Im(A tau_inf + conj(A) tau0) + Im(tau0)
    const double c2 = std::norm(a_eff) * tau_inf.imag();
    const double c1 = (a_eff * tau_inf + std::conj(a_eff) * tau0).imag();
    return {c2, c1, tau0.imag()};
}

}  // namespace

HgPath path_tau(int g, double theta, Complex a, Complex tau0, Complex tau_inf,
                const std::vector<double>& s_grid) {
    if (g < 1) throw std::invalid_argument("path_tau: genus >= 1");
    HgPath path;
    path.g = g;
    path.theta = theta;
    path.a_param = a;
    path.tau0 = tau0;
    path.tau_inf = tau_inf;
    path.s = s_grid;
    path.tau.reserve(s_grid.size());

    const Complex a_eff = a * std::polar(1.0, theta);
    for (double s : s_grid) {
        const Complex den = a_eff * s + 1.0;
        if (std::abs(den) < 1e-12)
            throw std::runtime_error("path_tau: pole on the grid at s = " + std::to_string(s));
        path.tau.push_back((a_eff * s * tau_inf + tau0) / den);
    }

    // certify the sign of Im tau between samples from the quadratic numerator
    const ImQuadratic q = im_numerator(a_eff, tau0, tau_inf);
    path.lifts = q.min_on(s_grid.front(), s_grid.back()) > 0.0;
    path.min_im_tau = path.tau.front().imag();
    for (const Complex& v : path.tau) path.min_im_tau = std::min(path.min_im_tau, v.imag());
    return path;
}

HgPath safe_path(int g, double theta, Complex tau0, Complex tau_inf,
                 const std::vector<double>& s_grid) {
    if (!(tau0.imag() > 0.0) || !(tau_inf.imag() > 0.0))
        throw std::invalid_argument("safe_path: tau0, tau_inf in the open upper half plane");
    HgPath path = path_tau(g, theta, std::polar(1.0, -theta), tau0, tau_inf, s_grid);
    // with a = e^{-i theta} the path is the segment point tau0 + w (tau_inf - tau0),
    // w = s/(s+1)
    for (std::size_t i = 0; i < path.s.size(); ++i) {
        const double w = path.s[i] / (path.s[i] + 1.0);
        const Complex on_segment = tau0 + w * (tau_inf - tau0);
        if (std::abs(path.tau[i] - on_segment) > 1e-10)
            throw std::runtime_error("safe_path: sample off the segment at s = " +
                                     std::to_string(path.s[i]));
    }
    return path;
}

HgPath canonical_path(int g, double theta, const std::vector<double>& s_grid) {
    if (g < 2) throw std::invalid_argument("canonical_path: genus >= 2");
    HgPath path;
    path.g = g;
    path.theta = theta;
    const double c = 2.0 * (g - 1) * euler_gamma;
    path.a_param = 1.0 / c;
    path.tau0 = Complex(0.0, kPi / ((g - 1) * euler_gamma));
    path.tau_inf = 0.0;
    path.s = s_grid;
    path.tau.reserve(s_grid.size());
    const Complex rot = std::polar(1.0, theta);
    for (double s : s_grid) path.tau.push_back(Complex(0.0, 2.0 * kPi) / (rot * s + c));

    // Im tau = 2 pi (s cos theta + c) / |...|^2: linear numerator, so the sign
    // over the whole range is decided at the endpoints
    const double lo = s_grid.front(), hi = s_grid.back();
    const double end_min = std::min(std::cos(theta) * lo + c, std::cos(theta) * hi + c);
    path.lifts = end_min > 0.0;
    path.min_im_tau = path.tau.front().imag();
    for (const Complex& v : path.tau) path.min_im_tau = std::min(path.min_im_tau, v.imag());
    path.limit_is_boundary = true;
    path.output = OutputKind::two_step_filtration;
    return path;
}

Matrix charge_matrix(Complex a, Complex tau0, Complex tau_inf) {
    Matrix m(2, 2);
    const Complex two_pi_i(0.0, 2.0 * kPi);
    m(0, 0) = a;
    m(0, 1) = a * tau_inf / two_pi_i;
    m(1, 0) = 1.0;
    m(1, 1) = tau0 / two_pi_i;
    return m;
}

std::pair<Complex, Complex> hg_central_charges(int g, Complex z, const Matrix& a, double t) {
    if (g < 1) throw std::invalid_argument("hg_central_charges: genus >= 1");
    if (!(t > 0.0)) throw std::invalid_argument("hg_central_charges: t > 0");
    if (std::abs(a.determinant()) == 0.0)
        throw std::invalid_argument("hg_central_charges: A must be invertible");

    const Complex q = (2.0 * g - 2.0) * std::log(t) / z;
    RowVector row(2);
    row << q, Complex(1.0, 0.0);  // [0,1] (1 + q N) with N = [[0,0],[1,0]]

    Vector v_ox(2), v_op(2);
    v_ox << 1.0, 0.0;
    v_op << 0.0, Complex(0.0, 2.0 * kPi);

    const Complex z_ox = row * (a * v_ox);
    const Complex z_op = row * (a * v_op);
    if (std::abs(z_ox) == 0.0)
        throw std::runtime_error("hg_central_charges: Z(O_X) = 0, projective coordinate undefined");
    return {z_ox, z_op};
}

}  // namespace qstab::curves
