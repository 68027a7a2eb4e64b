#include "qstab/bessel.hpp"

#include <cmath>

namespace qstab::bessel {

namespace {

constexpr double kSeriesRadius = 20.0;
constexpr double kEps = 2.220446049250313e-16;
constexpr double kPi = 3.14159265358979323846;

double normalized(double abs_err, Complex value) {
    return abs_err / (1.0 + std::abs(value));
}

struct SeriesResult {
    Complex value;
    double max_term;  // for roundoff tracking
    double tail;      // first neglected term magnitude
};

// sum_{m>=0} (z^2/4)^m / (m!)^2
SeriesResult i0_series(Complex z) {
    const Complex q = z * z * 0.25;
    Complex term = 1.0, sum = 1.0;
    double max_term = 1.0;
    int m = 0;
    while (m < 80) {
        ++m;
        term *= q / static_cast<double>(m * m);
        sum += term;
        max_term = std::max(max_term, std::abs(term));
        if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum))) break;
    }
    return {sum, max_term, std::abs(term)};
}

// sum_{m>=1} h_m (z^2/4)^m / (m!)^2 with h_m the m-th harmonic number
SeriesResult k0_harmonic_series(Complex z) {
    const Complex q = z * z * 0.25;
    Complex term = 1.0, sum = 0.0;
    double h = 0.0, max_term = 0.0;
    int m = 0;
    while (m < 80) {
        ++m;
        term *= q / static_cast<double>(m * m);
        h += 1.0 / m;
        sum += h * term;
        max_term = std::max(max_term, h * std::abs(term));
        if (h * std::abs(term) < 1e-18 * (1.0 + std::abs(sum))) break;
    }
    return {sum, max_term, h * std::abs(term)};
}

// Optimally truncated asymptotic sum S(u, sgn) = sum_k sgn^k A_k / u^k with
// A_k = ((2k-1)!!)^2 / (k! 8^k). Returns the sum and the magnitude of the
// first omitted term.
SeriesResult asym_sum(Complex u, double sgn, int max_terms = 30) {
    Complex sum = 1.0, upow = 1.0;
    double a = 1.0, last = 1.0, max_term = 1.0;
    for (int k = 1; k <= max_terms; ++k) {
        a *= (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k);
        upow /= u;
        const double mag = a * std::abs(upow);
        if (mag >= last) return {sum, max_term, mag};  // divergence onset
        sum += (sgn < 0 && (k & 1)) ? -a * upow : a * upow;
        last = mag;
        max_term = std::max(max_term, mag);
    }
    return {sum, max_term, last};
}

Complex sqrt_cut(Complex z) {
    return std::exp(0.5 * log_cut(z));
}

// K0 series on |z| <= 20, Re z >= 0 (off the cut)
BesselValue k0_series(Complex z) {
    const SeriesResult i0s = i0_series(z);
    const SeriesResult hs = k0_harmonic_series(z);
    const Complex lg = log_cut(0.5 * z) + euler_gamma;
    const Complex value = -lg * i0s.value + hs.value;
    const double roundoff =
        kEps * 8.0 * (std::abs(lg) * i0s.max_term + hs.max_term);
    const double trunc = std::abs(lg) * i0s.tail + hs.tail;
    return {value, Regime::series, normalized(roundoff + trunc, value)};
}

// Full-order asymptotic K0, Re z >= 0 region (sector-safe there).
BesselValue k0_asym(Complex z) {
    const SeriesResult s = asym_sum(z, -1.0);
    const Complex pre = sqrt_cut(kPi / (2.0 * z)) * std::exp(-z);
    const Complex value = pre * s.value;
    return {value, Regime::asymptotic,
            normalized(std::abs(pre) * (s.tail + 8.0 * kEps), value)};
}

// Full-order asymptotic I0 for Im z >= 0 (callers reflect first).
BesselValue i0_asym_upper(Complex z) {
    const SeriesResult grow = asym_sum(z, +1.0);
    const SeriesResult rec = asym_sum(z, -1.0);
    const Complex pre = 1.0 / sqrt_cut(2.0 * kPi * z);
    const Complex value =
        pre * (std::exp(z) * grow.value + Complex(0, 1) * std::exp(-z) * rec.value);
    const double abs_err =
        std::abs(pre) * (std::abs(std::exp(z)) * (grow.tail + 8.0 * kEps) +
                         std::abs(std::exp(-z)) * (rec.tail + 8.0 * kEps));
    return {value, Regime::asymptotic, normalized(abs_err, value)};
}

}  // namespace

Complex log_cut(Complex z) {
    Complex l = std::log(z);
    if (l.imag() < -0.5 * kPi) l += Complex(0.0, 2.0 * kPi);
    return l;
}

bool on_cut(Complex z) {
    return z.real() == 0.0 && z.imag() <= 0.0;
}

BesselValue i0(Complex z) {
    if (!is_finite(z)) throw std::domain_error("i0: non-finite argument");
    if (std::abs(z) <= kSeriesRadius) {
        const SeriesResult s = i0_series(z);
        return {s.value, Regime::series,
                normalized(kEps * 8.0 * s.max_term + s.tail, s.value)};
    }
    // I0 is even; evaluate in the closed upper half plane where the two-term
    // expansion keeps a margin from the sector boundary.
    return i0_asym_upper(z.imag() < 0.0 ? -z : z);
}

BesselValue k0(Complex z) {
    if (!is_finite(z)) throw std::domain_error("k0: non-finite argument");
    if (z == Complex(0.0, 0.0) || on_cut(z))
        throw std::domain_error("k0: argument on the branch cut i*(-inf,0]");
    if (z.real() < 0.0) {
        // connection formula off the right half plane
        const BesselValue k = k0(-z);
        const BesselValue i = i0(-z);
        const Complex value = k.value - Complex(0, kPi) * i.value;
        const double abs_err = k.est_error * (1.0 + std::abs(k.value)) +
                               kPi * i.est_error * (1.0 + std::abs(i.value)) +
                               kEps * kPi * std::abs(i.value);
        return {value, k.regime, normalized(abs_err, value)};
    }
    // The series log-term cancellation grows like e^{|z| + Re z} eps while
    // K0 itself decays like e^{-Re z}; past |z| + Re z = 30 the asymptotic
    // expansion (optimal truncation error ~ e^{-2|z|}) is the accurate route.
    if (std::abs(z) <= kSeriesRadius && std::abs(z) + z.real() <= 30.0) return k0_series(z);
    return k0_asym(z);
}

BesselValue asymptotic_i0_full(Complex u) {
    if (std::abs(u) < 10.0) throw std::domain_error("asymptotic_i0_full: |u| >= 10 required");
    return i0_asym_upper(u.imag() < 0.0 ? -u : u);
}

BesselValue asymptotic_k0_full(Complex u) {
    if (std::abs(u) < 10.0 || on_cut(u))
        throw std::domain_error("asymptotic_k0_full: |u| >= 10 and u off the cut required");
    if (u.real() < 0.0) {
        const BesselValue k = k0_asym(-u);
        const BesselValue i = i0_asym_upper(u.imag() > 0.0 ? u : -u);
        const Complex value = k.value - Complex(0, kPi) * i.value;
        return {value, Regime::asymptotic,
                normalized(k.est_error * (1.0 + std::abs(k.value)) +
                               kPi * i.est_error * (1.0 + std::abs(i.value)),
                           value)};
    }
    return k0_asym(u);
}

BesselValue k0_plus_i_pi_i0(Complex z) {
    if (z == Complex(0.0, 0.0) || on_cut(z))
        throw std::domain_error("k0_plus_i_pi_i0: argument on the branch cut");
    if (z.real() < 0.0) return k0(-z);
    const BesselValue k = k0(z);
    const BesselValue i = i0(z);
    const Complex value = k.value + Complex(0, kPi) * i.value;
    return {value, k.regime,
            normalized(k.est_error * (1.0 + std::abs(k.value)) +
                           kPi * i.est_error * (1.0 + std::abs(i.value)),
                       value)};
}

BesselValue asymptotic_k0(Complex u, int order) {
    if (order < 0 || order > 2) throw std::invalid_argument("asymptotic_k0: order in 0..2");
    if (std::abs(u) < 10.0 || on_cut(u))
        throw std::domain_error("asymptotic_k0: |u| >= 10 and u off the cut required");
    static const double coef[3] = {1.0, -1.0 / 8.0, 9.0 / 128.0};
    Complex s = 0.0, upow = 1.0;
    for (int k = 0; k <= order; ++k, upow /= u) s += coef[k] * upow;
    const Complex value = sqrt_cut(kPi / (2.0 * u)) * std::exp(-u) * s;
    const double next = 75.0 / 1024.0 / std::pow(std::abs(u), order + 1);
    return {value, Regime::asymptotic, normalized(next * std::abs(value), value)};
}

BesselValue asymptotic_i0(Complex u, int order) {
    if (order < 0 || order > 2) throw std::invalid_argument("asymptotic_i0: order in 0..2");
    if (std::abs(u) < 10.0 || on_cut(u))
        throw std::domain_error("asymptotic_i0: |u| >= 10 and u off the cut required");
    static const double coef[3] = {1.0, 1.0 / 8.0, 9.0 / 128.0};
    Complex sp = 0.0, sm = 0.0, upow = 1.0;
    for (int k = 0; k <= order; ++k, upow /= u) {
        sp += coef[k] * upow;
        sm += ((k & 1) ? -coef[k] : coef[k]) * upow;
    }
    const Complex pre = 1.0 / sqrt_cut(2.0 * kPi * u);
    const Complex value = pre * (std::exp(u) * sp + Complex(0, 1) * std::exp(-u) * sm);
    const double next = 75.0 / 1024.0 / std::pow(std::abs(u), order + 1);
    return {value, Regime::asymptotic, normalized(next * std::abs(value), value)};
}

Complex i0_prime(Complex z) {
    if (std::abs(z) <= kSeriesRadius) {
        // (z/2) sum_{m>=1} (z^2/4)^{m-1} / (m! (m-1)!)
        const Complex q = z * z * 0.25;
        Complex term = 1.0, sum = 1.0;
        for (int m = 2; m < 80; ++m) {
            term *= q / static_cast<double>(m * (m - 1));
            sum += term;
            if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum))) break;
        }
        return 0.5 * z * sum;
    }
    const Complex u = z.imag() < 0.0 ? -z : z;
    // d/du of the two-term expansion; I0' is odd, so the reflected argument
    // flips the overall sign.
    const SeriesResult gp = asym_sum(u, +1.0);
    const SeriesResult rp = asym_sum(u, -1.0);
    Complex dgrow = 0.0, drec = 0.0, upow = 1.0;
    double a = 1.0, last = 1.0;
    for (int k = 1; k <= 30; ++k) {
        a *= (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k);
        upow /= u;
        const double mag = a * std::abs(upow);
        if (mag >= last) break;
        dgrow += -static_cast<double>(k) * a * upow / u;
        drec += -static_cast<double>(k) * ((k & 1) ? -a : a) * upow / u;
        last = mag;
    }
    const Complex pre = 1.0 / sqrt_cut(2.0 * kPi * u);
    const Complex half_over = 0.5 / u;
    const Complex d =
        pre * (std::exp(u) * (gp.value * (1.0 - half_over) + dgrow) +
               Complex(0, 1) * std::exp(-u) * (rp.value * (-1.0 - half_over) + drec));
    return z.imag() < 0.0 ? -d : d;
}

Complex k0_prime(Complex z) {
    if (on_cut(z) || z == Complex(0.0, 0.0))
        throw std::domain_error("k0_prime: argument on the branch cut");
    if (z.real() < 0.0)  // differentiate the connection formula
        return -(k0_prime(-z) - Complex(0, kPi) * i0_prime(-z));
    if (std::abs(z) <= kSeriesRadius && std::abs(z) + z.real() <= 30.0) {
        const SeriesResult i0s = i0_series(z);
        const Complex lg = log_cut(0.5 * z) + euler_gamma;
        // H'(z) with H the harmonic-number series
        const Complex q = z * z * 0.25;
        Complex term = 1.0, hp = 1.0;
        double h = 1.0;
        for (int m = 2; m < 80; ++m) {
            term *= q / static_cast<double>(m * (m - 1));
            h += 1.0 / m;
            hp += h * term;
            if (h * std::abs(term) < 1e-18 * (1.0 + std::abs(hp))) break;
        }
        return -i0s.value / z - lg * i0_prime(z) + 0.5 * z * hp;
    }
    const SeriesResult s = asym_sum(z, -1.0);
    Complex ds = 0.0, upow = 1.0;
    double a = 1.0, last = 1.0;
    for (int k = 1; k <= 30; ++k) {
        a *= (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k);
        upow /= z;
        const double mag = a * std::abs(upow);
        if (mag >= last) break;
        ds += -static_cast<double>(k) * ((k & 1) ? -a : a) * upow / z;
        last = mag;
    }
    const Complex pre = sqrt_cut(kPi / (2.0 * z)) * std::exp(-z);
    return pre * (-s.value - 0.5 * s.value / z + ds);
}

Complex g_positivity(Complex x) {
    // grid generators routinely land a few ulps below the real axis
    if (x.imag() < 0.0 && x.imag() > -1e-13 * std::abs(x)) x = Complex(x.real(), 0.0);
    if (x == Complex(0.0, 0.0) || x.imag() < 0.0)
        throw std::domain_error("g_positivity: need Im(x) >= 0 and x != 0");
    return x * k0(x).value * k0_plus_i_pi_i0(x).value;
}

}  // namespace qstab::bessel
