#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "density.hpp"
#include "error.hpp"
#include "quadrature.hpp"
#include "random.hpp"
#include "special.hpp"
#include "uniform.hpp"

namespace ballpdf {

// theta_1..theta_{n-2} in [0, pi], phi in [0, 2 pi)
struct AngleSet {
    std::vector<double> theta;
    double phi = 0.0;
};

inline void validate_angles(int n, const AngleSet& a)
{
    if (n < 2) fail(ErrorKind::domain, "angles need n >= 2");
    if (static_cast<int>(a.theta.size()) != n - 2) fail(ErrorKind::invalid_input, "angle set needs exactly n - 2 polar angles");
}

inline std::vector<double> spherical_to_cartesian(int n, double r, const AngleSet& a)
{
    validate_angles(n, a);
    if (!(r >= 0)) fail(ErrorKind::domain, "r must be >= 0");
    std::vector<double> v{std::cos(a.phi), std::sin(a.phi)};
    v.reserve(n);
    for (double th : a.theta) {
        const double sn = std::sin(th);
        for (auto& c : v) c = sn * c;
        v.push_back(std::cos(th));
    }
    for (auto& c : v) c *= r;
    return v;
}

namespace detail {

// row-major n x n product R(theta_{n-2}) ... R(theta_1) R(phi) from cosines and sines
inline void build_rotation_cs(int n, const double* ct, const double* st, double cphi, double sphi, double* M)
{
    for (int i = 0; i < n * n; ++i) M[i] = 0.0;
    for (int i = 0; i < n; ++i) M[i * n + i] = 1.0;
    auto apply = [&](int p, int q, double c, double sn) {
        for (int j = 0; j < n; ++j) {
            const double a = M[p * n + j], b = M[q * n + j];
            M[p * n + j] = c * a - sn * b;
            M[q * n + j] = sn * a + c * b;
        }
    };
    apply(0, 1, cphi, -sphi);
    for (int k = 0; k + 2 < n; ++k) apply(k == 0 ? 0 : k + 1, k + 2, ct[k], st[k]);
}

inline void build_rotation(int n, const double* theta, double phi, double* M)
{
    std::array<double, 64> ct{}, st{};
    for (int k = 0; k + 2 < n; ++k) {
        ct[k] = std::cos(theta[k]);
        st[k] = std::sin(theta[k]);
    }
    build_rotation_cs(n, ct.data(), st.data(), std::cos(phi), std::sin(phi), M);
}

} // namespace detail

inline Eigen::MatrixXd rotation_matrix(int n, const AngleSet& a)
{
    validate_angles(n, a);
    if (n > 66) fail(ErrorKind::unsupported, "rotation matrices are limited to n <= 66");
    std::vector<double> buf(static_cast<std::size_t>(n) * n);
    detail::build_rotation(n, a.theta.data(), a.phi, buf.data());
    Eigen::MatrixXd M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = buf[i * n + j];
    return M;
}

enum class MasterMethod { Quadrature, MonteCarlo };

struct MasterBudget {
    double tolerance = 1e-8;
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    unsigned threads = 1;
};

struct ValueWithError {
    double value = 0.0;
    double error = 0.0;
};

// P_n(s) for an arbitrary density from the angular average of the half-lens overlap integral
class MasterPdf {
public:
    MasterPdf(BallGeometry g, DensityModel rho, MasterMethod method, MasterBudget budget = {})
        : g_(g), rho_(std::move(rho)), method_(method), budget_(budget)
    {
        validate_density(rho_, g_);
        const int n = g_.dimension;
        if (method_ == MasterMethod::Quadrature && (n < 2 || n > 3))
            fail(ErrorKind::unsupported, "master-formula quadrature supports n = 2, 3");
        if (method_ == MasterMethod::MonteCarlo && (n < 2 || n > 6))
            fail(ErrorKind::unsupported, "master-formula Monte Carlo supports n = 2..6");
        if (method_ == MasterMethod::MonteCarlo) {
            bound_ = density_bound(rho_, g_);
            if (!bound_) fail(ErrorKind::invalid_input, "Monte Carlo master formula needs a density upper bound");
            if (budget_.samples < 2) fail(ErrorKind::invalid_input, "Monte Carlo needs at least 2 samples");
        } else if (!(budget_.tolerance > 0)) {
            fail(ErrorKind::invalid_input, "quadrature tolerance must be positive");
        }
    }

    ValueWithError evaluate(double s) const
    {
        detail::check_separation(g_, s);
        const int n = g_.dimension;
        if (s == 2.0 * g_.radius) return {0.0, 0.0};
        if (s == 0.0) return {0.0, 0.0};
        const double mass2 = mass_squared();
        const double pref = 2.0 * std::pow(s, n - 1) / mass2;
        ValueWithError j = method_ == MasterMethod::Quadrature ? angular_quadrature(s, budget_.tolerance / pref)
                                                               : angular_monte_carlo(s);
        return {pref * j.value, pref * j.error + std::fabs(pref * j.value) * mass2_rel_error_};
    }

    double operator()(double s) const { return evaluate(s).value; }

    // (int rho)^2, from the closed form, the curve integral or a Monte Carlo estimate
    double mass_squared() const
    {
        std::call_once(once_, [this] { compute_mass(); });
        return mass2_;
    }

    // unnormalized angular integral of the half-lens overlap
    ValueWithError angular_integral(double s) const
    {
        detail::check_separation(g_, s);
        return method_ == MasterMethod::Quadrature ? angular_quadrature(s, budget_.tolerance) : angular_monte_carlo(s);
    }

private:
    double rho_at(const double* x) const
    {
        const double v = density_value(rho_, std::span<const double>(x, static_cast<std::size_t>(g_.dimension)), g_.radius);
        if (!(v >= 0.0)) fail(ErrorKind::invalid_input, "density is negative or undefined at a sample point");
        if (bound_ && v > *bound_ * (1.0 + 1e-12)) fail(ErrorKind::invalid_input, "density exceeds its declared upper bound");
        return v;
    }

    void compute_mass() const
    {
        if (auto m = density_mass(rho_, g_)) {
            mass2_ = *m * *m;
            return;
        }
        if (method_ == MasterMethod::Quadrature) {
            auto curve = [this](double s) {
                if (s <= 0.0 || s >= 2.0 * g_.radius) return 0.0;
                return 2.0 * std::pow(s, g_.dimension - 1) * angular_quadrature(s, 1e-12).value;
            };
            mass2_ = integrate(curve, 0.0, 2.0 * g_.radius, 0.0, 1e-9).value;
            return;
        }
        // mass by uniform sampling of the ball on a dedicated stream
        const int n = g_.dimension;
        const std::uint64_t N = std::max<std::uint64_t>(budget_.samples, 1000000);
        const std::uint64_t chunks = (N + chunk_size - 1) / chunk_size;
        std::vector<std::array<double, 2>> parts(chunks);
        for_each_chunk(N, budget_.threads, [&](std::uint64_t c, std::uint64_t, std::uint64_t cnt) {
            CounterRng rng = chunk_rng(budget_.seed, ~budget_.stream, c);
            std::vector<double> x(n);
            double s1 = 0.0, s2 = 0.0;
            for (std::uint64_t i = 0; i < cnt; ++i) {
                double r2 = 0.0;
                for (auto& v : x) {
                    v = rng.normal();
                    r2 += v * v;
                }
                const double scale = g_.radius * std::pow(rng.uniform(), 1.0 / n) / std::sqrt(r2);
                for (auto& v : x) v *= scale;
                const double w = rho_at(x.data());
                s1 += w;
                s2 += w * w;
            }
            parts[c] = {s1, s2};
        });
        double s1 = 0.0, s2 = 0.0;
        for (const auto& p : parts) {
            s1 += p[0];
            s2 += p[1];
        }
        const double mean = s1 / N;
        const double var = std::max(0.0, s2 / N - mean * mean);
        const double vol = unit_ball_volume(n) * std::pow(g_.radius, n);
        const double m = vol * mean;
        mass2_ = m * m;
        mass2_rel_error_ = 2.0 * std::sqrt(var / N) / mean;
    }

    // J(s) = int dOmega H(s, omega) by product rules, refined until successive levels agree
    ValueWithError angular_quadrature(double s, double tol) const
    {
        const int n = g_.dimension;
        const double R = g_.radius;
        const double u0 = std::asin(std::min(1.0, s / (2.0 * R)));
        const double uh = 0.5 * (0.5 * detail::pi - u0);
        double prev = 0.0;
        bool have_prev = false;
        double factor = 1.0;
        for (int level = 0; level < 6; ++level, factor *= 1.5) {
            auto ord = [&](int base) { return static_cast<int>(std::lround(base * factor)); };
            const int nc = ord(8), nphi = ord(16), nu = ord(12), nt = ord(8), npsi = ord(16);
            const auto gu = gauss_legendre(nu);
            const auto gt = gauss_legendre(nt);
            const auto gc = gauss_legendre(nc);
            double total = 0.0;
            std::array<double, 9> M{};
            std::array<double, 3> xl{}, x1{}, x2{};
            auto lens = [&](double weight) {
                // half-lens integral for the rotation currently in M
                double acc = 0.0;
                for (int iu = 0; iu < nu; ++iu) {
                    const double u = u0 + uh * (1.0 + gu.nodes[iu]);
                    const double xn = R * std::sin(u);
                    const double T = R * std::cos(u);
                    const double wu = uh * gu.weights[iu] * R * std::cos(u);
                    double inner = 0.0;
                    if (n == 2) {
                        for (int it = 0; it < nt; ++it) {
                            xl = {T * gt.nodes[it], xn, 0.0};
                            for (int j = 0; j < 2; ++j) {
                                x1[j] = M[0 * 2 + j] * xl[0] + M[1 * 2 + j] * xl[1];
                                x2[j] = x1[j] - s * M[1 * 2 + j];
                            }
                            inner += T * gt.weights[it] * rho_at(x1.data()) * rho_at(x2.data());
                        }
                    } else {
                        for (int it = 0; it < nt; ++it) {
                            const double t = 0.5 * T * (1.0 + gt.nodes[it]);
                            const double wt = 0.5 * T * gt.weights[it] * t * 2.0 * detail::pi / npsi;
                            for (int ip = 0; ip < npsi; ++ip) {
                                const double psi = 2.0 * detail::pi * ip / npsi;
                                xl = {t * std::cos(psi), t * std::sin(psi), xn};
                                for (int j = 0; j < 3; ++j) {
                                    x1[j] = M[0 * 3 + j] * xl[0] + M[1 * 3 + j] * xl[1] + M[2 * 3 + j] * xl[2];
                                    x2[j] = x1[j] - s * M[2 * 3 + j];
                                }
                                inner += wt * rho_at(x1.data()) * rho_at(x2.data());
                            }
                        }
                    }
                    acc += wu * inner;
                }
                return weight * acc;
            };
            for (int ip = 0; ip < nphi; ++ip) {
                const double phi = 2.0 * detail::pi * ip / nphi;
                const double wphi = 2.0 * detail::pi / nphi;
                if (n == 2) {
                    detail::build_rotation(2, nullptr, phi, M.data());
                    total += lens(wphi);
                } else {
                    for (int ic = 0; ic < nc; ++ic) {
                        const double theta = std::acos(gc.nodes[ic]);
                        detail::build_rotation(3, &theta, phi, M.data());
                        total += lens(wphi * gc.weights[ic]);
                    }
                }
            }
            if (have_prev && std::fabs(total - prev) <= tol) return {total, std::fabs(total - prev)};
            prev = total;
            have_prev = true;
        }
        fail(ErrorKind::precision, "master-formula quadrature did not reach the requested tolerance");
    }

    ValueWithError angular_monte_carlo(double s) const
    {
        const int n = g_.dimension;
        const double R = g_.radius;
        const std::uint64_t N = budget_.samples;
        const std::uint64_t chunks = (N + chunk_size - 1) / chunk_size;
        std::vector<std::array<double, 2>> parts(chunks);
        const double vol = unit_ball_volume(n - 1);
        const double span = R - 0.5 * s;
        for_each_chunk(N, budget_.threads, [&](std::uint64_t c, std::uint64_t, std::uint64_t cnt) {
            CounterRng rng = chunk_rng(budget_.seed, budget_.stream, c);
            std::array<double, 36> M{};
            std::array<double, 6> ct{}, st{}, xl{}, x1{}, x2{};
            std::array<double, 8> z{};
            double s1 = 0.0, s2 = 0.0;
            for (std::uint64_t i = 0; i < cnt; ++i) {
                const double phi = 2.0 * detail::pi * rng.uniform();
                for (int k = 0; k + 2 < n; ++k) {
                    // cos theta_{k+1} distributed as one coordinate of a uniform point on S^{k+2}
                    double r2 = 0.0;
                    for (int j = 0; j < k + 3; ++j) {
                        z[j] = rng.normal();
                        r2 += z[j] * z[j];
                    }
                    ct[k] = std::clamp(z[0] / std::sqrt(r2), -1.0, 1.0);
                    st[k] = std::sqrt((1.0 - ct[k]) * (1.0 + ct[k]));
                }
                detail::build_rotation_cs(n, ct.data(), st.data(), std::cos(phi), std::sin(phi), M.data());
                const double xn = 0.5 * s + span * rng.uniform();
                const double T = std::sqrt(std::max(0.0, (R - xn) * (R + xn)));
                if (n == 2) {
                    xl[0] = T * (2.0 * rng.uniform() - 1.0);
                } else {
                    double r2 = 0.0;
                    for (int j = 0; j < n - 1; ++j) {
                        xl[j] = rng.normal();
                        r2 += xl[j] * xl[j];
                    }
                    const double scale = T * std::pow(rng.uniform(), 1.0 / (n - 1)) / std::sqrt(r2);
                    for (int j = 0; j < n - 1; ++j) xl[j] *= scale;
                }
                xl[n - 1] = xn;
                for (int j = 0; j < n; ++j) {
                    double acc = 0.0;
                    for (int k = 0; k < n; ++k) acc += M[k * n + j] * xl[k];
                    x1[j] = acc;
                    x2[j] = acc - s * M[(n - 1) * n + j];
                }
                const double w = vol * std::pow(T, n - 1) * span * rho_at(x1.data()) * rho_at(x2.data());
                s1 += w;
                s2 += w * w;
            }
            parts[c] = {s1, s2};
        });
        double s1 = 0.0, s2 = 0.0;
        for (const auto& p : parts) {
            s1 += p[0];
            s2 += p[1];
        }
        const double area = unit_sphere_area(n);
        const double mean = s1 / N;
        const double var = std::max(0.0, (s2 / N - mean * mean) * N / (N - 1.0));
        return {area * mean, area * std::sqrt(var / N)};
    }

    BallGeometry g_;
    DensityModel rho_;
    MasterMethod method_;
    MasterBudget budget_;
    std::optional<double> bound_;
    mutable std::once_flag once_;
    mutable double mass2_ = 0.0;
    mutable double mass2_rel_error_ = 0.0;
};

inline ValueWithError pdf_master(const BallGeometry& g, const DensityModel& rho, double s, MasterMethod method,
                                 const MasterBudget& budget = {})
{
    return MasterPdf(g, rho, method, budget).evaluate(s);
}

// rho ~ x^4 y^4, n = 2
inline double pdf_example_2d(const BallGeometry& g, double s)
{
    detail::check_separation(g, s);
    if (g.dimension != 2) fail(ErrorKind::unsupported, "example needs n = 2");
    const double R = g.radius;
    const double u = s / R;
    const double u2 = u * u;
    auto poly = [](double x, std::initializer_list<double> c) {
        double acc = 0.0;
        for (auto it = std::rbegin(c); it != std::rend(c); ++it) acc = acc * x + *it;
        return acc;
    };
    const double head = u * poly(u2, {875.0 / 81.0, 500.0 / 3.0, 7400.0 / 21.0, 400.0 / 3.0, 10.0});
    const double f1 = u2 * poly(u2, {14875.0 / 162.0, 92500.0 / 243.0, 553985.0 / 1701.0});
    const double u8 = u2 * u2 * u2 * u2;
    const double f2 = u8 * u2 * poly(u2 * u2, {260315.0 / 10206.0, 113693.0 / 47628.0, 2509.0 / 142884.0});
    const double f3 = u8 * poly(u2 * u2, {2725.0 / 1134.0, 1438825.0 / 142884.0, 89189.0 / 285768.0});
    const double arc = u * poly(u2, {1750.0 / 81.0, 1000.0 / 3.0, 14800.0 / 21.0, 800.0 / 3.0, 20.0});
    const double root = std::sqrt(std::max(0.0, (2.0 - u) * (2.0 + u)));
    const double v = head - root / detail::pi * (f1 + f2 - f3) - std::asin(std::min(1.0, 0.5 * u)) / detail::pi * arc;
    return v / R;
}

// rho ~ x^2 y^2 z^2, n = 3
inline double pdf_example_3d(const BallGeometry& g, double s)
{
    detail::check_separation(g, s);
    if (g.dimension != 3) fail(ErrorKind::unsupported, "example needs n = 3");
    static constexpr std::array<std::pair<double, int>, 12> terms{{
        {1701.0 / 143.0, 2}, {-25515.0 / 572.0, 3}, {8505.0 / 143.0, 4}, {-8505.0 / 208.0, 5},
        {567.0 / 11.0, 6}, {-6237.0 / 104.0, 7}, {9.0, 8}, {201285.0 / 9152.0, 9},
        {-181629.0 / 18304.0, 11}, {16443.0 / 6656.0, 13}, {-6075.0 / 18304.0, 15}, {10899.0 / 585728.0, 17},
    }};
    const double u = s / g.radius;
    double v = 0.0;
    for (auto [c, k] : terms) v += c * ipow(u, k);
    return v / g.radius;
}

// rho ~ x_1^4, n = 4
inline double pdf_example_4d(const BallGeometry& g, double s)
{
    detail::check_separation(g, s);
    if (g.dimension != 4) fail(ErrorKind::unsupported, "example needs n = 4");
    const double R = g.radius;
    const double u = s / R;
    const double u2 = u * u, u3 = u2 * u, u4 = u2 * u2;
    const double head = 56.0 / 3.0 * u3 + 48.0 * u3 * u2 + 8.0 * u3 * u4;
    const double rootp = u4 * (196.0 / 3.0 + u2 * (114.0 / 5.0 + u2 * (28.0 / 15.0 + u2 * (-4.0 / 5.0 + u2 * (2.0 / 9.0 - u2 / 45.0)))));
    const double arcp = u3 * (112.0 / 3.0 + 96.0 * u2 + 16.0 * u4);
    const double root = std::sqrt(std::max(0.0, (2.0 - u) * (2.0 + u)));
    return (head - rootp * root / detail::pi - arcp * std::asin(std::min(1.0, 0.5 * u)) / detail::pi) / R;
}

} // namespace ballpdf
