#pragma once

#include <cmath>
#include <limits>
#include <utility>

#include "error.hpp"

namespace ballpdf {

struct SpecialFunctionResult {
    double value;
    double error;
};

namespace detail {

constexpr double eps = std::numeric_limits<double>::epsilon();
constexpr double tiny = 1e-300;
constexpr double euler_gamma = 0.57721566490153286060651209008240243;
constexpr double pi = 3.14159265358979323846264338327950288;

inline double lgamma_positive(double x)
{
#if defined(__GLIBC__) || defined(__APPLE__)
    int sign = 1;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

// log|Gamma(x)| and sign, x not a non-positive integer
inline std::pair<double, int> lgamma_signed(double x)
{
    if (x > 0) return {lgamma_positive(x), 1};
    if (x == std::floor(x)) fail(ErrorKind::domain, "gamma pole at non-positive integer");
    // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    double sp = std::sin(pi * x);
    double lg = std::log(pi / std::fabs(sp)) - lgamma_positive(1.0 - x);
    return {lg, sp > 0 ? 1 : -1};
}

// continued fraction for I_x(a,b), Lentz form; returns the CF value and iteration count
inline std::pair<double, int> beta_cf(double x, double a, double b)
{
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    int m = 1;
    for (; m <= 100000; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return {h, m};
}

// B_x(a,b) without the symmetry switch
inline SpecialFunctionResult inc_beta_direct(double x, double a, double b)
{
    auto [h, iters] = beta_cf(x, a, b);
    const double lf = a * std::log(x) + b * std::log1p(-x);
    const double v = std::exp(lf) / a * h;
    const double err = std::fabs(v) * eps * (8.0 + 2.0 * iters + 2.0 * std::fabs(lf));
    return {v, err};
}

} // namespace detail

inline double log_gamma(double x)
{
    if (!(x > 0)) fail(ErrorKind::domain, "log_gamma requires x > 0");
    return detail::lgamma_positive(x);
}

inline SpecialFunctionResult log_gamma_with_error(double x)
{
    const double v = log_gamma(x);
    return {v, detail::eps * (4.0 * std::fabs(v) + 4.0)};
}

inline double log_beta(double p, double q)
{
    if (!(p > 0) || !(q > 0)) fail(ErrorKind::domain, "beta requires p, q > 0");
    return log_gamma(p) + log_gamma(q) - log_gamma(p + q);
}

inline double beta(double p, double q)
{
    return std::exp(log_beta(p, q));
}

inline SpecialFunctionResult inc_beta_with_error(double x, double p, double q)
{
    if (!(p > 0) || !(q > 0)) fail(ErrorKind::domain, "inc_beta requires p, q > 0");
    if (!(x >= 0.0 && x <= 1.0)) fail(ErrorKind::domain, "inc_beta requires 0 <= x <= 1");
    if (x == 0.0) return {0.0, 0.0};
    const double lb = log_beta(p, q);
    const double full = std::exp(lb);
    const double full_err = full * detail::eps * (4.0 + 4.0 * std::fabs(lb));
    if (x == 1.0) return {full, full_err};
    if (x <= p / (p + q)) return detail::inc_beta_direct(x, p, q);
    auto c = detail::inc_beta_direct(1.0 - x, q, p);
    const double v = full - c.value;
    return {v, c.error + full_err + detail::eps * std::fabs(v)};
}

inline double inc_beta(double x, double p, double q)
{
    return inc_beta_with_error(x, p, q).value;
}

inline SpecialFunctionResult reg_inc_beta_with_error(double x, double p, double q)
{
    if (!(p > 0) || !(q > 0)) fail(ErrorKind::domain, "reg_inc_beta requires p, q > 0");
    if (!(x >= 0.0 && x <= 1.0)) fail(ErrorKind::domain, "reg_inc_beta requires 0 <= x <= 1");
    if (x == 0.0) return {0.0, 0.0};
    if (x == 1.0) return {1.0, 0.0};
    const double lb = log_beta(p, q);
    auto front = [&](double xx, double a, double b) {
        return a * std::log(xx) + b * std::log1p(-xx) - lb;
    };
    if (x <= p / (p + q)) {
        auto [h, iters] = detail::beta_cf(x, p, q);
        const double lf = front(x, p, q);
        const double v = std::exp(lf) / p * h;
        return {v, std::fabs(v) * detail::eps * (8.0 + 2.0 * iters + 2.0 * std::fabs(lf) + std::fabs(lb))};
    }
    auto [h, iters] = detail::beta_cf(1.0 - x, q, p);
    const double lf = front(1.0 - x, q, p);
    const double c = std::exp(lf) / q * h;
    const double v = 1.0 - c;
    return {v, std::fabs(c) * detail::eps * (8.0 + 2.0 * iters + 2.0 * std::fabs(lf) + std::fabs(lb)) + detail::eps};
}

inline double reg_inc_beta(double x, double p, double q)
{
    return reg_inc_beta_with_error(x, p, q).value;
}

// upper incomplete beta U(p,q,x) = int_x^1 t^{p-1} (1-t)^{q-1} dt, q > 0, p any non-zero-crossing real
inline double upper_inc_beta(double p, double q, double x)
{
    if (!(q > 0)) fail(ErrorKind::domain, "upper_inc_beta requires q > 0");
    if (!(x > 0.0 && x <= 1.0)) {
        if (x == 0.0 && p > 0) return beta(p, q);
        fail(ErrorKind::domain, "upper_inc_beta requires 0 < x <= 1");
    }
    if (x == 1.0) return 0.0;
    if (p > 0) return inc_beta(1.0 - x, q, p);
    if (p == std::floor(p)) fail(ErrorKind::domain, "upper_inc_beta recursion hits p = 0");
    // U(p,q) = -x^p (1-x)^q / p + ((p+q)/p) U(p+1,q)
    const double u1 = upper_inc_beta(p + 1.0, q, x);
    return -std::pow(x, p) * std::pow(1.0 - x, q) / p + (p + q) / p * u1;
}

// 2F1(1/2, (1-n)/2; 3/2; x)
inline SpecialFunctionResult hyp2f1_halfint_with_error(int n, double x)
{
    if (n < 1) fail(ErrorKind::domain, "hyp2f1_halfint requires n >= 1");
    if (!(x >= 0.0 && x <= 1.0)) fail(ErrorKind::domain, "hyp2f1_halfint requires 0 <= x <= 1");
    const double a = 0.5, b = 0.5 * (1 - n), c = 1.5;
    if (n % 2 == 1 || x <= 0.5) {
        double term = 1.0, sum = 1.0, mag = 1.0;
        int j = 0;
        for (; j < 100000; ++j) {
            term *= (a + j) * (b + j) / ((c + j) * (j + 1)) * x;
            sum += term;
            mag += std::fabs(term);
            if (term == 0.0 || std::fabs(term) < detail::eps * std::fabs(sum) * 0.1) break;
        }
        return {sum, detail::eps * (2.0 * mag + j * std::fabs(sum))};
    }
    // 1-x transformation; c-a-b = (n+1)/2 is a half-integer so no log terms
    const double y = 1.0 - x;
    auto g = [](double v) { return detail::lgamma_signed(v); };
    const auto gc = g(c), gcab = g(c - a - b), gca = g(c - a), gcb = g(c - b);
    const auto gabc = g(a + b - c), ga = g(a), gb = g(b);
    const double A = gc.second * gcab.second * gca.second * gcb.second
        * std::exp(gc.first + gcab.first - gca.first - gcb.first);
    const double B = gc.second * gabc.second * ga.second * gb.second
        * std::exp(gc.first + gabc.first - ga.first - gb.first);
    // F(a,b;a+b-c+1;y) = F(1/2,b;b;y) = (1-y)^{-1/2}
    const double first = A / std::sqrt(x);
    const double a2 = c - a, b2 = c - b, c2 = c - a - b + 1.0;
    double term = 1.0, sum = 1.0;
    int j = 0;
    for (; j < 100000; ++j) {
        term *= (a2 + j) * (b2 + j) / ((c2 + j) * (j + 1)) * y;
        sum += term;
        if (std::fabs(term) < detail::eps * std::fabs(sum) * 0.1) break;
    }
    const double second = std::pow(y, c - a - b) * B * sum;
    const double v = first + second;
    const double err = detail::eps * (16.0 * std::fabs(first) + (16.0 + j) * std::fabs(second) + std::fabs(v));
    return {v, err};
}

inline double hyp2f1_halfint(int n, double x)
{
    return hyp2f1_halfint_with_error(n, x).value;
}

namespace detail {

// gamma(a,x) lower series, returns sum with the e^{-x} x^a prefactor excluded
inline double gamma_series(double a, double x, int& iters)
{
    double ap = a, del = 1.0 / a, sum = del;
    for (iters = 1; iters < 100000; ++iters) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * eps * 0.5) break;
    }
    return sum;
}

// Gamma(a,x) continued fraction, prefactor e^{-x} x^a excluded; valid for a >= 0, x > 0
inline double gamma_cf(double a, double x, int& iters)
{
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (iters = 1; iters < 100000; ++iters) {
        const double an = -iters * (iters - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

inline SpecialFunctionResult expint_e1(double x)
{
    if (x < 1.0) {
        double term = 1.0, sum = 0.0, mag = 0.0;
        int k = 1;
        for (; k < 1000; ++k) {
            term *= -x / k;
            const double t = term / k;
            sum += t;
            mag += std::fabs(t);
            if (std::fabs(t) < eps * 1e-3) break;
        }
        const double v = -euler_gamma - std::log(x) - sum;
        return {v, eps * (8.0 * std::fabs(v) + 4.0 * mag + std::fabs(std::log(x)) + 1.0)};
    }
    int iters = 0;
    const double h = gamma_cf(0.0, x, iters);
    const double v = std::exp(-x) * h;
    return {v, std::fabs(v) * eps * (8.0 + 2.0 * iters + x)};
}

} // namespace detail

inline SpecialFunctionResult inc_gamma_upper_with_error(double a, double b)
{
    if (!(a >= 0)) fail(ErrorKind::domain, "inc_gamma_upper requires a >= 0");
    if (!(b > 0)) fail(ErrorKind::domain, "inc_gamma_upper requires b > 0");
    if (a == 0.0) return detail::expint_e1(b);
    int iters = 0;
    const double lp = -b + a * std::log(b);
    if (b < a + 1.0) {
        const double s = detail::gamma_series(a, b, iters);
        const double lower = std::exp(lp) * s;
        const double full = std::exp(log_gamma(a));
        const double v = full - lower;
        const double err = detail::eps * (std::fabs(full) * (4.0 + 4.0 * std::fabs(log_gamma(a)))
                                          + std::fabs(lower) * (8.0 + iters + 2.0 * std::fabs(lp)));
        return {v, err + detail::eps * std::fabs(v)};
    }
    const double h = detail::gamma_cf(a, b, iters);
    const double v = std::exp(lp) * h;
    return {v, std::fabs(v) * detail::eps * (8.0 + 2.0 * iters + 2.0 * std::fabs(lp))};
}

inline double inc_gamma_upper(double a, double b)
{
    return inc_gamma_upper_with_error(a, b).value;
}

// regularized Q(a,x) = Gamma(a,x)/Gamma(a), a > 0, x >= 0
inline double gamma_q(double a, double x)
{
    if (!(a > 0)) fail(ErrorKind::domain, "gamma_q requires a > 0");
    if (!(x >= 0)) fail(ErrorKind::domain, "gamma_q requires x >= 0");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    int iters = 0;
    const double lp = -x + a * std::log(x) - log_gamma(a);
    if (x < a + 1.0) return 1.0 - std::exp(lp) * detail::gamma_series(a, x, iters);
    return std::exp(lp) * detail::gamma_cf(a, x, iters);
}

inline double gamma_p(double a, double x)
{
    if (!(a > 0)) fail(ErrorKind::domain, "gamma_p requires a > 0");
    if (!(x >= 0)) fail(ErrorKind::domain, "gamma_p requires x >= 0");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    int iters = 0;
    const double lp = -x + a * std::log(x) - log_gamma(a);
    if (x < a + 1.0) return std::exp(lp) * detail::gamma_series(a, x, iters);
    return 1.0 - std::exp(lp) * detail::gamma_cf(a, x, iters);
}

// n!! / (n+1)!! iteratively in log space, with 0!! = (-1)!! = 1
inline double log_double_factorial(int k)
{
    if (k < -1) fail(ErrorKind::domain, "double factorial of k < -1");
    double s = 0.0;
    for (int j = k; j > 1; j -= 2) s += std::log(static_cast<double>(j));
    return s;
}

inline double double_factorial_ratio(int num, int den)
{
    return std::exp(log_double_factorial(num) - log_double_factorial(den));
}

// volume of the unit n-ball and surface of the unit (n-1)-sphere
inline double unit_ball_volume(int n)
{
    return std::exp(0.5 * n * std::log(detail::pi) - log_gamma(0.5 * n + 1.0));
}

inline double unit_sphere_area(int n)
{
    return n * unit_ball_volume(n);
}

} // namespace ballpdf
