#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "error.hpp"
#include "quadrature.hpp"
#include "special.hpp"

namespace ballpdf {

struct BallGeometry {
    int dimension = 3;
    double radius = 1.0;

    void validate() const
    {
        if (dimension < 1) fail(ErrorKind::domain, "dimension must be >= 1");
        if (!(radius > 0) || !std::isfinite(radius)) fail(ErrorKind::domain, "radius must be positive");
    }
    double support_max() const { return 2.0 * radius; }
};

inline BallGeometry make_geometry(int n, double R = 1.0)
{
    BallGeometry g{n, R};
    g.validate();
    return g;
}

namespace density {

struct Uniform {};

// rho(r) = sum_k c_k r^k
struct RadialPolynomial {
    std::vector<double> coefficients;
};

// rho(r) = 1 - alpha (r/R)^2
struct ParabolicRadial {
    double alpha = 1.0;
};

// rho(r) = exp(-r^2 / 2 sigma^2)
struct Gaussian {
    double sigma = 1.0;
};

// rho = densities[k] on r_{k-1} < r <= radii[k]
struct MultiShell {
    std::vector<double> radii;
    std::vector<double> densities;
};

// rho = prod |x_i|^{e_i}
struct CartesianMonomial {
    std::vector<int> exponents;
};

struct GeneralCartesian {
    std::function<double(std::span<const double>)> eval;
    double bound = 0.0;
    std::optional<double> mass;
};

} // namespace density

using DensityModel = std::variant<density::Uniform, density::RadialPolynomial, density::ParabolicRadial,
                                  density::Gaussian, density::MultiShell, density::CartesianMonomial,
                                  density::GeneralCartesian>;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline bool is_radial(const DensityModel& d)
{
    return !std::holds_alternative<density::CartesianMonomial>(d)
        && !std::holds_alternative<density::GeneralCartesian>(d);
}

inline std::string density_name(const DensityModel& d)
{
    return std::visit(overloaded{
                          [](const density::Uniform&) { return std::string("uniform"); },
                          [](const density::RadialPolynomial&) { return std::string("radial-poly"); },
                          [](const density::ParabolicRadial&) { return std::string("parabolic"); },
                          [](const density::Gaussian&) { return std::string("gauss"); },
                          [](const density::MultiShell&) { return std::string("shells"); },
                          [](const density::CartesianMonomial&) { return std::string("monomial"); },
                          [](const density::GeneralCartesian&) { return std::string("general"); },
                      },
                      d);
}

inline void validate_shells(const density::MultiShell& m, double R)
{
    if (m.radii.empty() || m.radii.size() != m.densities.size())
        fail(ErrorKind::invalid_shells, "radii and densities must be non-empty and of equal length");
    double prev = 0.0;
    for (double r : m.radii) {
        if (!(r > prev)) fail(ErrorKind::invalid_shells, "shell radii must be positive and strictly increasing");
        prev = r;
    }
    if (std::fabs(m.radii.back() - R) > 1e-12 * R) fail(ErrorKind::invalid_shells, "outermost shell radius must equal R");
    bool any = false;
    for (double rho : m.densities) {
        if (!(rho >= 0) || !std::isfinite(rho)) fail(ErrorKind::invalid_shells, "shell densities must be >= 0");
        any = any || rho > 0;
    }
    if (!any) fail(ErrorKind::invalid_shells, "at least one shell density must be positive");
}

inline void validate_density(const DensityModel& d, const BallGeometry& g)
{
    g.validate();
    std::visit(overloaded{
                   [](const density::Uniform&) {},
                   [](const density::RadialPolynomial& p) {
                       if (p.coefficients.empty()) fail(ErrorKind::invalid_input, "empty radial polynomial");
                   },
                   [](const density::ParabolicRadial& p) {
                       if (!(p.alpha >= 0.0 && p.alpha <= 1.0)) fail(ErrorKind::domain, "alpha must lie in [0,1]");
                   },
                   [](const density::Gaussian& p) {
                       if (!(p.sigma > 0)) fail(ErrorKind::domain, "sigma must be positive");
                   },
                   [&](const density::MultiShell& m) { validate_shells(m, g.radius); },
                   [&](const density::CartesianMonomial& m) {
                       if (static_cast<int>(m.exponents.size()) != g.dimension)
                           fail(ErrorKind::invalid_input, "monomial needs one exponent per coordinate");
                       for (int e : m.exponents)
                           if (e < 0) fail(ErrorKind::invalid_input, "monomial exponents must be >= 0");
                   },
                   [](const density::GeneralCartesian& m) {
                       if (!m.eval) fail(ErrorKind::invalid_input, "general density needs an evaluation callback");
                   },
               },
               d);
}

// radial profile rho(r); only for radial variants
inline double radial_value(const DensityModel& d, double r, double R)
{
    return std::visit(overloaded{
                          [](const density::Uniform&) { return 1.0; },
                          [&](const density::RadialPolynomial& p) {
                              double acc = 0.0;
                              for (std::size_t k = p.coefficients.size(); k-- > 0;) acc = acc * r + p.coefficients[k];
                              return acc;
                          },
                          [&](const density::ParabolicRadial& p) { return 1.0 - p.alpha * (r / R) * (r / R); },
                          [&](const density::Gaussian& p) { return std::exp(-0.5 * r * r / (p.sigma * p.sigma)); },
                          [&](const density::MultiShell& m) {
                              for (std::size_t k = 0; k < m.radii.size(); ++k)
                                  if (r <= m.radii[k]) return m.densities[k];
                              return 0.0;
                          },
                          [](const density::CartesianMonomial&) -> double {
                              fail(ErrorKind::wrong_variant, "monomial density is not radial");
                          },
                          [](const density::GeneralCartesian&) -> double {
                              fail(ErrorKind::wrong_variant, "general density is not radial");
                          },
                      },
                      d);
}

inline double ipow(double x, int e)
{
    double r = 1.0;
    while (e > 0) {
        if (e & 1) r *= x;
        x *= x;
        e >>= 1;
    }
    return r;
}

// rho at a Cartesian point (inside the ball)
inline double density_value(const DensityModel& d, std::span<const double> x, double R)
{
    if (const auto* m = std::get_if<density::CartesianMonomial>(&d)) {
        double v = 1.0;
        for (std::size_t i = 0; i < x.size(); ++i) v *= ipow(std::fabs(x[i]), m->exponents[i]);
        return v;
    }
    if (const auto* gc = std::get_if<density::GeneralCartesian>(&d)) return gc->eval(x);
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return radial_value(d, std::sqrt(r2), R);
}

// int_ball rho; empty for a general density without a declared mass
inline std::optional<double> density_mass(const DensityModel& d, const BallGeometry& g)
{
    const int n = g.dimension;
    const double R = g.radius;
    const double area = unit_sphere_area(n);
    return std::visit(overloaded{
                          [&](const density::Uniform&) -> std::optional<double> {
                              return unit_ball_volume(n) * std::pow(R, n);
                          },
                          [&](const density::RadialPolynomial& p) -> std::optional<double> {
                              double acc = 0.0;
                              for (std::size_t k = 0; k < p.coefficients.size(); ++k)
                                  acc += p.coefficients[k] * std::pow(R, n + static_cast<double>(k)) / (n + static_cast<double>(k));
                              return area * acc;
                          },
                          [&](const density::ParabolicRadial& p) -> std::optional<double> {
                              return area * std::pow(R, n) * (1.0 / n - p.alpha / (n + 2.0));
                          },
                          [&](const density::Gaussian& p) -> std::optional<double> {
                              const double s2 = p.sigma * p.sigma;
                              return std::pow(2.0 * detail::pi * s2, 0.5 * n) * gamma_p(0.5 * n, R * R / (2.0 * s2));
                          },
                          [&](const density::MultiShell& m) -> std::optional<double> {
                              double acc = 0.0, prev = 0.0;
                              for (std::size_t k = 0; k < m.radii.size(); ++k) {
                                  acc += m.densities[k] * (std::pow(m.radii[k], n) - std::pow(prev, n));
                                  prev = m.radii[k];
                              }
                              return unit_ball_volume(n) * acc;
                          },
                          [&](const density::CartesianMonomial& m) -> std::optional<double> {
                              // int_{B_R} prod |x_i|^{e_i} = 2 prod Gamma((e_i+1)/2) / Gamma((E+n)/2) * R^{E+n}/(E+n)
                              double lg = 0.0;
                              int E = 0;
                              for (int e : m.exponents) {
                                  lg += log_gamma(0.5 * (e + 1));
                                  E += e;
                              }
                              lg -= log_gamma(0.5 * (E + n));
                              return 2.0 * std::exp(lg) * std::pow(R, E + n) / (E + n);
                          },
                          [&](const density::GeneralCartesian& m) -> std::optional<double> { return m.mass; },
                      },
                      d);
}

// max of rho over the ball, when known in closed form
inline std::optional<double> density_bound(const DensityModel& d, const BallGeometry& g)
{
    const double R = g.radius;
    return std::visit(overloaded{
                          [](const density::Uniform&) -> std::optional<double> { return 1.0; },
                          [&](const density::RadialPolynomial& p) -> std::optional<double> {
                              double acc = 0.0;
                              for (std::size_t k = 0; k < p.coefficients.size(); ++k)
                                  acc += std::fabs(p.coefficients[k]) * std::pow(R, static_cast<double>(k));
                              return acc;
                          },
                          [](const density::ParabolicRadial&) -> std::optional<double> { return 1.0; },
                          [](const density::Gaussian&) -> std::optional<double> { return 1.0; },
                          [](const density::MultiShell& m) -> std::optional<double> {
                              double b = 0.0;
                              for (double v : m.densities) b = std::max(b, v);
                              return b;
                          },
                          [&](const density::CartesianMonomial& m) -> std::optional<double> {
                              // maximum on |x| = R at x_i^2 = e_i R^2 / E
                              int E = 0;
                              for (int e : m.exponents) E += e;
                              if (E == 0) return 1.0;
                              double b = std::pow(R, E);
                              for (int e : m.exponents)
                                  if (e > 0) b *= std::pow(static_cast<double>(e) / E, 0.5 * e);
                              return b;
                          },
                          [](const density::GeneralCartesian& m) -> std::optional<double> {
                              if (m.bound > 0 && std::isfinite(m.bound)) return m.bound;
                              return std::nullopt;
                          },
                      },
                      d);
}

} // namespace ballpdf
