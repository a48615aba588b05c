#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "arbitrary.hpp"
#include "density.hpp"
#include "error.hpp"
#include "quadrature.hpp"
#include "random.hpp"
#include "special.hpp"
#include "uniform.hpp"

namespace ballpdf {

// <s^m> for the uniform n-ball
inline double moment_uniform(const BallGeometry& g, int m)
{
    g.validate();
    const int n = g.dimension;
    if (m < -(n - 1)) fail(ErrorKind::divergent_moment, "<s^m> diverges for m < -(n-1)");
    if (m == 0) return 1.0;
    const double p = 0.5 * (n + 1);
    const double lv = (n + m) * std::log(2.0) + log_beta(p, p + 0.5 * m) - log_beta(p, 0.5) + m * std::log(g.radius);
    return static_cast<double>(n) / (n + m) * std::exp(lv);
}

// the two equivalent gamma-function forms of <s^m>
inline std::array<double, 2> moment_uniform_gamma_forms(const BallGeometry& g, int m)
{
    g.validate();
    const int n = g.dimension;
    if (m < -(n - 1)) fail(ErrorKind::divergent_moment, "<s^m> diverges for m < -(n-1)");
    const double R = g.radius;
    const double r = static_cast<double>(n) / (m + n);
    const double a = m * std::log(2.0 * R) + log_gamma(0.5 * (n + m + 1)) + log_gamma(n + 1.0)
        - log_gamma(n + 1.0 + 0.5 * m) - log_gamma(0.5 * (n + 1));
    const double b = log_gamma(n + m + 1.0) + log_gamma(0.5 * n) - log_gamma(0.5 * (n + m)) - log_gamma(n + 1.0 + 0.5 * m)
        + m * std::log(R);
    return {r * std::exp(a), r * r * std::exp(b)};
}

inline double moment_gaussian(int n, double sigma, int m)
{
    if (n < 1) fail(ErrorKind::domain, "dimension must be >= 1");
    if (!(sigma > 0)) fail(ErrorKind::domain, "sigma must be positive");
    if (n + m <= 0) fail(ErrorKind::divergent_moment, "Gaussian <s^m> diverges for n + m <= 0");
    if (m == 0) return 1.0;
    return std::exp(m * std::log(2.0 * sigma) + log_gamma(0.5 * (n + m)) - log_gamma(0.5 * n));
}

// H(R, r_c; m, n) = int_{r_c}^{2R} s^m T_n(s) ds
inline double hardcore_H(const BallGeometry& g, double rc, int m)
{
    g.validate();
    const int n = g.dimension;
    const double R = g.radius;
    if (!(rc > 0)) fail(ErrorKind::domain, "hard-core radius must be positive");
    if (rc >= 2.0 * R) fail(ErrorKind::empty_support, "hard-core radius must be below 2R");
    const int M = m + n;
    const double p = 0.5 * (M + 1);
    const double tc = (rc / (2.0 * R)) * (rc / (2.0 * R));
    if (M == 0 || (p <= 0 && p == std::floor(p))) {
        auto f = [&](double s) { return std::pow(s, M - 1) * overlap_kernels(g, s).Q; };
        return integrate(f, rc, 2.0 * R, 0.0, 1e-14).value;
    }
    const double first = std::pow(2.0, M - 1) * std::pow(R, n + M) * upper_inc_beta(p, 0.5 * (n + 1), tc);
    const double second = std::pow(rc, M) * 0.5 * std::pow(R, n) * inc_beta(1.0 - tc, 0.5 * (n + 1), 0.5);
    return (first - second) / M;
}

inline double moment_hardcore(const BallGeometry& g, double rc, int m)
{
    if (m == 0) {
        hardcore_H(g, rc, 0);
        return 1.0;
    }
    return hardcore_H(g, rc, m) / hardcore_H(g, rc, 0);
}

struct SelfEnergySpec {
    int count = 2;
    double coupling = 1.0;
    BallGeometry geometry{3, 1.0};
};

inline double pair_count(int count)
{
    if (count < 2) fail(ErrorKind::invalid_input, "particle count must be >= 2");
    return 0.5 * count * (count - 1.0);
}

// q^2 <1/s^{n-2}> for the uniform ball
inline double coulomb_pair_energy(const BallGeometry& g, double q2)
{
    g.validate();
    const int n = g.dimension;
    if (n < 3) fail(ErrorKind::unsupported, "the 1/s^{n-2} potential needs n >= 3");
    return q2 * 2.0 * n / ((n + 2.0) * std::pow(g.radius, n - 2));
}

inline double coulomb_self_energy(const SelfEnergySpec& spec)
{
    return pair_count(spec.count) * coulomb_pair_energy(spec.geometry, spec.coupling);
}

// q^2 <1/s^{n-2}> for the Gaussian ball
inline double coulomb_gaussian_pair_energy(int n, double sigma, double q2)
{
    if (n < 3) fail(ErrorKind::unsupported, "the 1/s^{n-2} potential needs n >= 3");
    if (!(sigma > 0)) fail(ErrorKind::domain, "sigma must be positive");
    return q2 * std::exp((2.0 - n) * std::log(2.0) - log_gamma(0.5 * n) - (n - 2.0) * std::log(sigma));
}

inline double coulomb_gaussian(int n, double sigma, int count, double q2)
{
    return pair_count(count) * coulomb_gaussian_pair_energy(n, sigma, q2);
}

// nu-nubar exchange self-energy, uniform n = 3 ball with hard core
inline double neutrino_self_energy_uniform(double R, double rc, int count, double gf2, double a2)
{
    if (!(R > 0)) fail(ErrorKind::domain, "radius must be positive");
    if (!(rc > 0 && rc < 2.0 * R)) fail(ErrorKind::domain, "hard-core radius must lie in (0, 2R)");
    const double R3 = R * R * R;
    const double bracket = 3.0 / (2.0 * rc * rc * R3) - 9.0 / (4.0 * rc * R3 * R) + 9.0 / (8.0 * R3 * R * R)
        - 3.0 * rc / (16.0 * R3 * R3);
    return pair_count(count) * bracket * gf2 * a2 / (4.0 * detail::pi * detail::pi * detail::pi);
}

// nu-nubar exchange self-energy, Gaussian n = 3 density with hard core
inline double neutrino_self_energy_gaussian(double sigma, double rc, int count, double gf2, double a2)
{
    if (!(sigma > 0)) fail(ErrorKind::domain, "sigma must be positive");
    if (!(rc > 0)) fail(ErrorKind::domain, "hard-core radius must be positive");
    const double u = rc * rc / (4.0 * sigma * sigma);
    const double bracket = std::exp(-u) / (rc * rc) - inc_gamma_upper(0.0, u) / (4.0 * sigma * sigma);
    return bracket * 2.0 * pair_count(count) * gf2 * a2 / (32.0 * sigma * sigma * sigma * std::pow(detail::pi, 3.5));
}

enum class DotKind { UniformBall, Gaussian };

// <r12 . r23> = -<s^2>/2
inline double dot_constant(int n, double scale, DotKind kind)
{
    if (n < 1) fail(ErrorKind::domain, "dimension must be >= 1");
    if (!(scale > 0)) fail(ErrorKind::domain, "R or sigma must be positive");
    if (kind == DotKind::UniformBall) return -static_cast<double>(n) / (n + 2.0) * scale * scale;
    return -n * scale * scale;
}

// Monte Carlo estimate of <r12 . r23> from independent point triples
inline ValueWithError dot_constant_mc(int n, double scale, DotKind kind, const SamplerConfig& cfg)
{
    if (n < 1) fail(ErrorKind::domain, "dimension must be >= 1");
    if (!(scale > 0)) fail(ErrorKind::domain, "R or sigma must be positive");
    if (cfg.count < 2) fail(ErrorKind::invalid_input, "need at least 2 triples");
    const std::uint64_t chunks = (cfg.count + chunk_size - 1) / chunk_size;
    std::vector<std::array<double, 2>> parts(chunks);
    for_each_chunk(cfg.count, cfg.threads, [&](std::uint64_t c, std::uint64_t, std::uint64_t cnt) {
        CounterRng rng = chunk_rng(cfg.seed, cfg.stream, c);
        std::vector<double> p(3 * n);
        double s1 = 0.0, s2 = 0.0;
        for (std::uint64_t i = 0; i < cnt; ++i) {
            for (int k = 0; k < 3; ++k) {
                double* x = p.data() + k * n;
                if (kind == DotKind::Gaussian) {
                    for (int j = 0; j < n; ++j) x[j] = scale * rng.normal();
                } else {
                    double r2 = 0.0;
                    for (int j = 0; j < n; ++j) {
                        x[j] = rng.normal();
                        r2 += x[j] * x[j];
                    }
                    const double f = scale * std::pow(rng.uniform(), 1.0 / n) / std::sqrt(r2);
                    for (int j = 0; j < n; ++j) x[j] *= f;
                }
            }
            double d = 0.0;
            for (int j = 0; j < n; ++j) d += (p[n + j] - p[j]) * (p[2 * n + j] - p[n + j]);
            s1 += d;
            s2 += d * d;
        }
        parts[c] = {s1, s2};
    });
    double s1 = 0.0, s2 = 0.0;
    for (const auto& q : parts) {
        s1 += q[0];
        s2 += q[1];
    }
    const double N = static_cast<double>(cfg.count);
    const double mean = s1 / N;
    const double var = std::max(0.0, (s2 / N - mean * mean) * N / (N - 1.0));
    return {mean, std::sqrt(var / N)};
}

} // namespace ballpdf
