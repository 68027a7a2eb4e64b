#include "qstab/contour.hpp"

#include <cmath>

namespace qstab::contour {

namespace {

constexpr double kPi = 3.14159265358979323846;

// 16-point Gauss-Legendre nodes/weights on [-1, 1]
constexpr double kGLx[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                            0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                            0.9445750230732326, 0.9894009349916499};
constexpr double kGLw[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                            0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                            0.0622535239386479, 0.0271524594117541};

// integral over [a, b] of f, composite 16-point panels
template <class F>
Complex gauss_legendre(double a, double b, int panels, F&& f) {
    Complex sum = 0.0;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        const double half = 0.5 * h;
        for (int q = 0; q < 8; ++q) {
            sum += kGLw[q] * (f(mid + half * kGLx[q]) + f(mid - half * kGLx[q])) * half;
        }
    }
    return sum;
}

}  // namespace

QuadratureResult skyscraper_charge(Complex kappa, double t, const Options& opt) {
    const Complex w2 = kappa * kappa * t * t * 0.25;
    // x = e^{i s}, dx/x = i ds; spectrally accurate trapezoid on the circle
    const int n = opt.circle_points;
    Complex sum = 0.0;
    for (int j = 0; j < n; ++j) {
        const double s = 2.0 * kPi * j / n;
        const Complex x = std::polar(1.0, s);
        sum += std::exp(-(x + w2 / x));
    }
    const Complex value = Complex(0, 0.5) * sum * (2.0 * kPi / n);

    // refinement estimate from half resolution
    Complex sum_half = 0.0;
    for (int j = 0; j < n; j += 2) {
        const double s = 2.0 * kPi * j / n;
        const Complex x = std::polar(1.0, s);
        sum_half += std::exp(-(x + w2 / x));
    }
    const Complex value_half = Complex(0, 0.5) * sum_half * (2.0 * kPi / (n / 2));
    return {value, std::abs(value - value_half), 0.0};
}

QuadratureResult linebundle_charge(Complex kappa, double t, double theta, const Options& opt) {
    const Complex w2 = kappa * kappa * t * t * 0.25;  // coefficient of e^{-s - i theta}
    const double decay0 = (w2 * std::polar(1.0, -theta)).real();
    if (!(decay0 > 0.0))
        throw std::domain_error(
            "linebundle_charge: 0-end leg divergent, Re((kappa t)^2 e^{-i theta}) <= 0");

    // integrand in the log coordinate x = e^w: exp(-(e^w + w2 e^{-w}))
    auto f = [w2](Complex w) { return std::exp(-(std::exp(w) + w2 * std::exp(-w))); };

    // 0-end leg w = s + i theta, s from -s_min to 0: |integrand| ~
    // exp(-decay0 e^{-s}); cut where the exponent passes ln(1/cutoff)
    const double target = std::log(1.0 / opt.tail_cutoff);
    const double s_min = std::log(std::max(target / decay0, 1.0)) + 2.0;
    // infinity leg w = s real: |integrand| ~ exp(-e^s)
    const double s_max = std::log(target) + 2.0;

    const auto panels = [&](double len) {
        return std::max(2, static_cast<int>(std::ceil(len * opt.samples_per_unit / 16.0)));
    };

    const Complex leg0 = gauss_legendre(-s_min, 0.0, panels(s_min), [&](double s) {
        return f(Complex(s, theta));
    });
    const Complex legv = gauss_legendre(0.0, 1.0, panels(std::abs(theta) + 1.0), [&](double u) {
        // vertical leg from i theta to 0: w = i theta (1-u), dw = -i theta du
        return f(Complex(0.0, theta * (1.0 - u))) * Complex(0.0, -theta);
    });
    const Complex leginf = gauss_legendre(0.0, s_max, panels(s_max), [&](double s) {
        return f(Complex(s, 0.0));
    });

    const Complex value = 0.5 * (leg0 + legv + leginf);

    // refinement estimate at half density
    Options half = opt;
    half.samples_per_unit = std::max(8, opt.samples_per_unit / 2);
    const auto panels_h = [&](double len) {
        return std::max(1, static_cast<int>(std::ceil(len * half.samples_per_unit / 16.0)));
    };
    const Complex v_half =
        0.5 * (gauss_legendre(-s_min, 0.0, panels_h(s_min),
                              [&](double s) { return f(Complex(s, theta)); }) +
               gauss_legendre(0.0, 1.0, panels_h(std::abs(theta) + 1.0),
                              [&](double u) {
                                  return f(Complex(0.0, theta * (1.0 - u))) * Complex(0.0, -theta);
                              }) +
               gauss_legendre(0.0, s_max, panels_h(s_max),
                              [&](double s) { return f(Complex(s, 0.0)); }));

    const double remainder = opt.tail_cutoff * 2.0;  // double-exponential tails
    return {value, std::abs(value - v_half) + remainder, s_max + s_min};
}

}  // namespace qstab::contour
