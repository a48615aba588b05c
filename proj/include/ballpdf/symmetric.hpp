#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "density.hpp"
#include "error.hpp"
#include "quadrature.hpp"
#include "special.hpp"
#include "uniform.hpp"

namespace ballpdf {

// rho proportional to r^2, n = 3
inline double pdf_radial_r2(const BallGeometry& g, double s)
{
    detail::check_separation(g, s);
    if (g.dimension != 3) fail(ErrorKind::unsupported, "closed form for rho ~ r^2 exists only for n = 3");
    const double R = g.radius;
    const double u = s / R;
    const double u2 = u * u;
    return u2 / R * (25.0 / 7.0 - 25.0 / 4.0 * u + 5.0 * u2 - 25.0 / 16.0 * u2 * u + 5.0 / 448.0 * u2 * u2 * u2 * u);
}

// rho proportional to 1 - alpha (r/R)^2, n = 3
inline double pdf_radial_parabolic(const BallGeometry& g, double alpha, double s)
{
    detail::check_separation(g, s);
    if (g.dimension != 3) fail(ErrorKind::unsupported, "closed form for the parabolic density exists only for n = 3");
    if (!(alpha >= 0.0 && alpha <= 1.0)) fail(ErrorKind::domain, "alpha must lie in [0,1]");
    const double R = g.radius;
    const double a = alpha;
    const double d = 5.0 - 3.0 * a;
    const double d2 = d * d;
    const double u = s / R;
    const double c2 = 15.0 * (35.0 - 42.0 * a + 15.0 * a * a) / (7.0 * d2);
    const double c3 = -225.0 * (1.0 - a) * (1.0 - a) / (4.0 * d2);
    const double c4 = -15.0 * a / d;
    const double c5 = 75.0 * (1.0 + 6.0 * a - 3.0 * a * a) / (16.0 * d2);
    const double c7 = -15.0 * a / (8.0 * d2);
    const double c9 = 45.0 * a * a / (448.0 * d2);
    const double u2 = u * u;
    return u2 / R * (c2 + u * (c3 + u * (c4 + u * (c5 + u2 * (c7 + u2 * c9)))));
}

// P(s) for a radial density by the two-fold (axial, transverse-radius) reduction
inline double pdf_radial_numeric(const BallGeometry& g, const DensityModel& rho, double s, double tol = 1e-9)
{
    detail::check_separation(g, s);
    if (!is_radial(rho)) fail(ErrorKind::wrong_variant, "radial numeric PDF needs a radial density");
    if (tol < 1e-12) fail(ErrorKind::unsupported, "tolerance below 1e-12 is not supported");
    validate_density(rho, g);
    const int n = g.dimension;
    const double R = g.radius;
    const double M = *density_mass(rho, g);
    if (!(M > 0)) fail(ErrorKind::invalid_input, "density mass must be positive");
    if (s == 2.0 * R) return 0.0;
    const double K = (n == 1 ? 4.0 : 2.0 * unit_sphere_area(n) * std::pow(s, n - 1)) / (M * M);
    if (K == 0.0) return 0.0;

    std::vector<double> radii;
    if (const auto* m = std::get_if<density::MultiShell>(&rho))
        radii.assign(m->radii.begin(), m->radii.end() - 1);

    auto rho_r = [&](double r) { return radial_value(rho, std::min(r, R), R); };
    const double area = n >= 2 ? unit_sphere_area(n - 1) : 0.0;
    const double inner_tol = 0.05 * tol / (K * R);

    auto inner = [&](double z) {
        const double zs = z - s;
        if (n == 1) return rho_r(std::fabs(z)) * rho_r(std::fabs(zs));
        const double T = std::sqrt(std::max(0.0, (R - z) * (R + z)));
        if (T == 0.0) return 0.0;
        std::vector<double> pts{0.0, T};
        for (double rk : radii) {
            for (double w : {rk * rk - z * z, rk * rk - zs * zs})
                if (w > 0.0 && std::sqrt(w) < T) pts.push_back(std::sqrt(w));
        }
        auto f = [&](double t) {
            const double t2 = t * t;
            return area * std::pow(t, n - 2) * rho_r(std::sqrt(z * z + t2)) * rho_r(std::sqrt(zs * zs + t2));
        };
        return integrate_split(f, pts, inner_tol, 1e-13).value;
    };

    // z = R sin u
    auto outer = [&](double u) {
        const double z = R * std::sin(u);
        return inner(z) * R * std::cos(u);
    };
    const double u0 = std::asin(std::min(1.0, s / (2.0 * R)));
    std::vector<double> upts{u0, 0.5 * detail::pi};
    for (double rk : radii)
        for (double z : {rk, s + rk, s - rk})
            if (z > s / 2.0 && z < R) upts.push_back(std::asin(z / R));
    const double f = integrate_split(outer, upts, 0.25 * tol / K, 1e-13).value;
    return K * f;
}

struct GaussianBall {
    int dimension = 3;
    double sigma = 1.0;
};

inline double pdf_gaussian(const GaussianBall& gb, double s)
{
    if (gb.dimension < 1) fail(ErrorKind::domain, "dimension must be >= 1");
    if (!(gb.sigma > 0)) fail(ErrorKind::domain, "sigma must be positive");
    if (!(s >= 0)) fail(ErrorKind::domain, "s must be >= 0");
    const int n = gb.dimension;
    const double sg = gb.sigma;
    const double le = (n - 1) * (s > 0 ? std::log(s) : 0.0) - s * s / (4.0 * sg * sg) - (n - 1) * std::log(2.0)
        - log_gamma(0.5 * n) - n * std::log(sg);
    if (s == 0.0 && n > 1) return 0.0;
    return std::exp(le);
}

inline double gaussian_mode(const GaussianBall& gb)
{
    return std::sqrt(2.0 * (gb.dimension - 1)) * gb.sigma;
}

template <class T>
double to_double(const T& v)
{
    return static_cast<double>(v);
}

// exact piecewise polynomial in s; pieces[i] holds c_0..c_{d} on [breakpoints[i], breakpoints[i+1]]
template <class T>
struct PiecewisePolynomial {
    std::vector<T> breakpoints;
    std::vector<std::vector<T>> pieces;

    std::size_t piece_index(double s) const
    {
        const std::size_t m = pieces.size();
        for (std::size_t i = 0; i + 1 < m; ++i)
            if (s < to_double(breakpoints[i + 1])) return i;
        return m - 1;
    }

    static double eval_piece(const std::vector<T>& c, double s)
    {
        double acc = 0.0;
        for (std::size_t k = c.size(); k-- > 0;) acc = acc * s + to_double(c[k]);
        return acc;
    }

    double operator()(double s) const
    {
        if (s < to_double(breakpoints.front()) || s > to_double(breakpoints.back())) return 0.0;
        return eval_piece(pieces[piece_index(s)], s);
    }

    T integral() const
    {
        T total(0);
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            T a = breakpoints[i], b = breakpoints[i + 1];
            T pa(1), pb(1);
            for (std::size_t k = 0; k < pieces[i].size(); ++k) {
                pa *= a;
                pb *= b;
                total += pieces[i][k] * (pb - pa) / T(static_cast<int>(k + 1));
            }
        }
        return total;
    }

    // largest jump between neighbouring pieces at interior breakpoints
    double continuity_residual() const
    {
        double worst = 0.0;
        for (std::size_t i = 1; i < pieces.size(); ++i) {
            const double b = to_double(breakpoints[i]);
            worst = std::max(worst, std::fabs(eval_piece(pieces[i - 1], b) - eval_piece(pieces[i], b)));
        }
        return worst;
    }

    nlohmann::json to_json(std::size_t width = 10) const
    {
        nlohmann::json j;
        j["breakpoints"] = nlohmann::json::array();
        for (const auto& b : breakpoints) j["breakpoints"].push_back(to_double(b));
        j["pieces"] = nlohmann::json::array();
        for (const auto& p : pieces) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t k = 0; k < std::max(width, p.size()); ++k) row.push_back(k < p.size() ? to_double(p[k]) : 0.0);
            j["pieces"].push_back(row);
        }
        return j;
    }
};

namespace detail {

// (pi^2)^{-1} times s^2 * 4 pi * overlap volume of concentric-offset balls of radii a, b; coefficients of s^0..s^5
template <class T>
std::vector<T> shell_pair_kernel(const T& a, const T& b, const T& mid)
{
    std::vector<T> c(6, T(0));
    const T A = a + b;
    const T D = a - b;
    const T absD = D < T(0) ? T(-D) : D;
    if (mid >= A) return c;
    if (mid < absD) {
        const T mn = a < b ? a : b;
        c[2] = T(16) / T(3) * mn * mn * mn;
        return c;
    }
    const T A2 = A * A, D2 = D * D;
    c[5] = T(1) / T(3);
    c[3] = -(A2 + D2);
    c[2] = (T(2) * A2 * A + T(6) * A * D2) / T(3);
    c[1] = -A2 * D2;
    return c;
}

} // namespace detail

// exact P_3(s) for piecewise-constant shell densities
template <class T>
PiecewisePolynomial<T> multishell_polynomial(const std::vector<T>& radii, const std::vector<T>& densities)
{
    if (radii.empty() || radii.size() != densities.size())
        fail(ErrorKind::invalid_shells, "radii and densities must be non-empty and of equal length");
    T prev(0);
    bool any = false;
    for (std::size_t k = 0; k < radii.size(); ++k) {
        if (!(radii[k] > prev)) fail(ErrorKind::invalid_shells, "shell radii must be positive and strictly increasing");
        if (densities[k] < T(0)) fail(ErrorKind::invalid_shells, "shell densities must be >= 0");
        any = any || densities[k] > T(0);
        prev = radii[k];
    }
    if (!any) fail(ErrorKind::invalid_shells, "at least one shell density must be positive");

    const std::size_t K = radii.size();
    const T R = radii.back();
    const T top = T(2) * R;
    std::vector<T> w(K);
    for (std::size_t k = 0; k < K; ++k) w[k] = densities[k] - (k + 1 < K ? densities[k + 1] : T(0));

    // (M / pi)^2 with M = (4 pi / 3) sum rho_k (r_k^3 - r_{k-1}^3)
    T mass(0), lo(0);
    for (std::size_t k = 0; k < K; ++k) {
        mass += densities[k] * (radii[k] * radii[k] * radii[k] - lo * lo * lo);
        lo = radii[k];
    }
    mass = mass * T(4) / T(3);
    const T norm = mass * mass;

    std::vector<T> bps{T(0), top};
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = 0; j < K; ++j) {
            const T d = radii[i] > radii[j] ? T(radii[i] - radii[j]) : T(radii[j] - radii[i]);
            for (const T& v : {T(radii[i] + radii[j]), d})
                if (v > T(0) && v < top) bps.push_back(v);
        }
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

    PiecewisePolynomial<T> out;
    out.breakpoints = bps;
    for (std::size_t p = 0; p + 1 < bps.size(); ++p) {
        const T mid = (bps[p] + bps[p + 1]) / T(2);
        std::vector<T> c(6, T(0));
        for (std::size_t i = 0; i < K; ++i) {
            if (w[i] == T(0)) continue;
            for (std::size_t j = 0; j < K; ++j) {
                if (w[j] == T(0)) continue;
                const auto kern = detail::shell_pair_kernel(radii[i], radii[j], mid);
                const T ww = w[i] * w[j];
                for (std::size_t k = 0; k < 6; ++k) c[k] += ww * kern[k];
            }
        }
        for (auto& v : c) v /= norm;
        out.pieces.push_back(std::move(c));
    }
    return out;
}

inline PiecewisePolynomial<double> multishell_polynomial(const BallGeometry& g, const density::MultiShell& shells)
{
    g.validate();
    if (g.dimension != 3) fail(ErrorKind::unsupported, "shell models are available only for n = 3");
    validate_shells(shells, g.radius);
    std::vector<double> radii(shells.radii);
    radii.back() = g.radius;
    return multishell_polynomial<double>(radii, shells.densities);
}

inline double pdf_multishell(const BallGeometry& g, const density::MultiShell& shells, double s)
{
    detail::check_separation(g, s);
    return multishell_polynomial(g, shells)(s);
}

} // namespace ballpdf
