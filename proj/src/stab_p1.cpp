#include "qstab/stab_p1.hpp"

#include "qstab/bessel.hpp"
#include "qstab/qde.hpp"

#include <cmath>
#include <functional>

namespace qstab::p1 {

namespace {

constexpr double kPi = 3.14159265358979323846;

Complex charge_ratio(Complex x) {
    return bessel::k0_plus_i_pi_i0(x).value / bessel::k0(x).value;
}

// multiplicative continuation: lift += Log(r_next / r_cur), refined until the
// argument increment per step is < pi/2
class BranchTracker {
public:
    BranchTracker(Complex r0, Complex lift0) : r_(r0), lift_(lift0) {}

    Complex lift() const { return lift_; }

    // advance to the ratio at `eval(1.0)`, with eval(s) giving intermediate
    // ratios for s in (0, 1]
    void advance(const std::function<Complex(double)>& eval, int depth = 0) {
        advance_to(eval, 0.0, 1.0, eval(1.0), depth);
    }

private:
    void advance_to(const std::function<Complex(double)>& eval, double s0, double s1,
                    Complex r1, int depth) {
        const Complex step = std::log(r1 / r_);
        if (std::abs(step.imag()) < 0.5 * kPi) {
            lift_ += step;
            r_ = r1;
            return;
        }
        if (depth > 48)
            throw std::runtime_error("brane_coordinate: branch tracking failed to refine");
        const double sm = 0.5 * (s0 + s1);
        const Complex rm = eval(sm);
        advance_to(eval, s0, sm, rm, depth + 1);
        advance_to(eval, sm, s1, r1, depth + 1);
    }

    Complex r_;
    Complex lift_;
};

int chart_index(Complex tau) {
    const double r = tau.imag() / kPi;
    const double nearest = std::round(r);
    // ties on pi Z go to the chart with Im tau as its lower boundary
    if (std::abs(r - nearest) < 1e-9) return static_cast<int>(nearest) + 1;
    return static_cast<int>(std::ceil(r));
}

double chart_sign(int k) {
    return ((k - 1) % 2 + 2) % 2 == 0 ? 1.0 : -1.0;
}

}  // namespace

Complex brane_coordinate(Complex x) {
    // chart-boundary arguments like -e^{x + i pi} land a few ulps below the
    // axis; snap those onto it
    if (x.imag() < 0.0 && x.imag() > -1e-13 * std::abs(x)) x = Complex(x.real(), 0.0);
    if (x.imag() < 0.0)
        throw std::domain_error("brane_coordinate: x must lie in the closed upper half plane");
    const double mag = std::abs(x);
    if (mag == 0.0) return Complex(0.0, 0.0);

    // seed close to the origin where the ratio is near 1 and the principal
    // branch is unambiguous
    const double s_seed = std::min(1.0, 1e-6 / mag);
    BranchTracker tracker(charge_ratio(s_seed * x), std::log(charge_ratio(s_seed * x)));
    if (s_seed >= 1.0) return tracker.lift();

    // geometric march from the seed to x
    const int coarse = 64;
    const double ratio = std::pow(1.0 / s_seed, 1.0 / coarse);
    double s = s_seed;
    for (int i = 1; i <= coarse; ++i) {
        const double s_next = (i == coarse) ? 1.0 : s * ratio;
        const double s_lo = s;
        tracker.advance([&](double w) { return charge_ratio((s_lo + w * (s_next - s_lo)) * x); });
        s = s_next;
    }
    return tracker.lift();
}

StabPoint b_map(Complex tau) {
    StabPoint p;
    p.tau = tau;
    p.chart_k = chart_index(tau);
    const Complex x = chart_sign(p.chart_k) * std::exp(tau);
    p.Z_point = Complex(0, kPi) * bessel::i0(x).value;
    p.Z_line = bessel::k0(x).value;
    p.phi_k = brane_coordinate(x);
    p.slope_stable = p.phi_k.imag() > 0.0 && p.phi_k.imag() < kPi;
    return p;
}

Complex glue_check(double x) {
    // quadruple precision: the left-hand-side values are assembled from the
    // series, whose log-term cancellation near the positive real axis exceeds
    // double precision once e^x approaches 20
    using quad = __float128;
    const quad u = [](double xd) {
        const double ud = std::exp(xd);
        const double delta = xd - std::log(ud);
        quad e = ud;
        return e * (quad(1) + quad(delta) + quad(delta) * quad(delta) / 2);
    }(x);

    const quad q_pi = quad(3.141592653589793) + quad(2.384626433832795e-16);
    const quad q_gamma = quad(0.5772156649015329) + quad(-3.9393487909917596e-17);
    const quad q_ln2 = quad(0.6931471805599453) + quad(9.417232121458176e-18);
    const quad ln_half_u = quad(x) - q_ln2;

    const quad q = u * u / 4;
    quad term = 1, i0s = 1, hs = 0, h = 0;
    for (int m = 1; m < 120; ++m) {
        term *= q / (quad(m) * quad(m));
        h += quad(1) / quad(m);
        i0s += term;
        hs += h * term;
        double mag = static_cast<double>(term);
        if (mag < 1e-40 && m > 8) break;
    }
    const quad k0s = -(ln_half_u + q_gamma) * i0s + hs;

    // lhs = (K0(u) + i pi I0(u)) / K0(u)
    const quad lhs_re = 1;
    const quad lhs_im = q_pi * i0s / k0s;
    // K0(-u) = k0s - i pi i0s (series at -u: log picks up +i pi),
    // rhs = 2 - K0(-u)/(K0(-u) + i pi I0(-u))
    const quad den_re = k0s, den_im = 0;  // (k0s - i pi i0s) + i pi i0s
    const quad num_re = k0s, num_im = -q_pi * i0s;
    const quad d2 = den_re * den_re + den_im * den_im;
    const quad rhs_re = 2 - (num_re * den_re + num_im * den_im) / d2;
    const quad rhs_im = -(num_im * den_re - num_re * den_im) / d2;

    return Complex(static_cast<double>(lhs_re - rhs_re), static_cast<double>(lhs_im - rhs_im));
}

Path qde_path(Complex b, Complex a, const Grid& grid) {
    if (!(grid.t0 >= 1.0)) throw std::invalid_argument("qde_path: t0 >= 1 required");

    Path path;
    path.b = b;
    path.a = a;
    const Complex d = b - a;
    path.chart_k = chart_index(Complex(0.0, d.imag()));
    const double sign = chart_sign(path.chart_k);
    path.kappa = sign * 2.0 * std::exp(d);
    path.boundary_case = std::abs(path.kappa.imag()) <= 1e-12 * std::abs(path.kappa);

    path.t = grid.values();
    path.samples.reserve(grid.points);

    // x(t) = kappa t; continue the lift sample to sample along the path
    const Complex kappa = path.kappa;
    Complex lift = brane_coordinate(kappa * grid.t0);
    BranchTracker tracker(charge_ratio(kappa * grid.t0), lift);

    for (int i = 0; i < grid.points; ++i) {
        const double t = path.t[i];
        if (i > 0) {
            const double t_prev = path.t[i - 1];
            tracker.advance(
                [&](double w) { return charge_ratio(kappa * (t_prev + w * (t - t_prev))); });
        }
        StabPoint p;
        p.tau = std::log(2.0 * t) + d;
        p.chart_k = path.chart_k;
        const Complex x = kappa * t;
        p.Z_point = Complex(0, kPi) * bessel::i0(x).value;
        p.Z_line = bessel::k0(x).value;
        p.phi_k = tracker.lift();
        p.slope_stable = p.phi_k.imag() > 0.0 && p.phi_k.imag() < kPi;
        path.samples.push_back(p);
        if (!path.eventual_t_star && p.phi_k.imag() > kPi) path.eventual_t_star = t;
    }

    // tail law phi_k = 2 kappa t + i pi/2 + O(1/|kappa t|); the constant is
    // ln(i pi / pi) = i pi / 2 from the dominant-term ratio
    const Complex phi_end = path.samples.back().phi_k;
    path.tail_law_residual =
        std::abs(phi_end - (2.0 * kappa * grid.t1 + Complex(0.0, 0.5 * kPi)));
    return path;
}

Vector class_line_bundle(int m) {
    Vector v(2);
    v << Complex(1.0, 0.0), Complex(0.0, 2.0 * kPi * m);
    return v;
}

Vector class_point() {
    Vector v(2);
    v << Complex(0.0, 0.0), Complex(0.0, 2.0 * kPi);
    return v;
}

std::vector<EventualObject> eventual_objects(const Path& path) {
    if (!path.eventual_t_star)
        throw std::runtime_error("eventual_objects: path never entered Im phi_k > pi");

    const int k = path.chart_k;
    std::vector<Complex> z_low, z_high;
    z_low.reserve(path.samples.size());
    z_high.reserve(path.samples.size());
    for (std::size_t i = 0; i < path.samples.size(); ++i) {
        z_low.push_back(path.samples[i].Z_line);  // Z(O(k-1)) = K0
        // Z(O(k)) = K0 + i pi I0, via the connection formula where the
        // direct sum would cancel
        z_high.push_back(bessel::k0_plus_i_pi_i0(path.kappa * path.t[i]).value);
    }

    std::vector<EventualObject> out;
    out.push_back({"O(" + std::to_string(k - 1) + ")", class_line_bundle(k - 1), -path.kappa,
                   qde::growth_rate(path.t, z_low).rate});
    out.push_back({"O(" + std::to_string(k) + ")", class_line_bundle(k), path.kappa,
                   qde::growth_rate(path.t, z_high).rate});

    for (const auto& obj : out)
        if (std::abs(obj.fitted_rate - obj.alpha.real()) > 1e-2)
            throw std::runtime_error("eventual_objects: fitted exponent for " + obj.label +
                                     " deviates from Re(alpha) by more than 1e-2");
    return out;
}

Matrix matched_fundamental_solution(const Path& path, double t) {
    // For the system t zeta' = -e^b E(t) zeta the bottom component is the
    // charge and the top is -t Z'(t) / (2 e^b); columns for the basis
    // {O(k-1), O_p} are converted to lattice coordinates.
    const Complex kappa = path.kappa;
    const Complex eb = std::exp(path.b);
    const Complex x = kappa * t;

    const Complex z_line = bessel::k0(x).value;
    const Complex dz_line = kappa * bessel::k0_prime(x);
    const Complex z_pt = Complex(0, kPi) * bessel::i0(x).value;
    const Complex dz_pt = Complex(0, kPi) * kappa * bessel::i0_prime(x);

    Matrix cols(2, 2);
    cols(0, 0) = -t * dz_line / (2.0 * eb);
    cols(1, 0) = z_line;
    cols(0, 1) = -t * dz_pt / (2.0 * eb);
    cols(1, 1) = z_pt;

    Matrix basis(2, 2);
    basis.col(0) = class_line_bundle(path.chart_k - 1);
    basis.col(1) = class_point();
    return cols * basis.inverse();
}

}  // namespace qstab::p1
