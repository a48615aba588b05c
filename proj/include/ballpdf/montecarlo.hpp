#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "density.hpp"
#include "error.hpp"
#include "quadrature.hpp"
#include "random.hpp"
#include "special.hpp"

namespace ballpdf {

struct PointBatch {
    int dimension = 0;
    std::vector<double> coords;

    std::size_t size() const { return dimension > 0 ? coords.size() / dimension : 0; }
    std::span<const double> point(std::size_t i) const
    {
        return {coords.data() + i * dimension, static_cast<std::size_t>(dimension)};
    }
};

struct PdfCurve {
    std::vector<double> s;
    std::vector<double> density;
    std::string method;

    // piecewise-linear interpolation, zero outside the grid
    double operator()(double x) const
    {
        if (s.empty() || x < s.front() || x > s.back()) return 0.0;
        const auto it = std::upper_bound(s.begin(), s.end(), x);
        if (it == s.end()) return density.back();
        const std::size_t i = static_cast<std::size_t>(it - s.begin());
        if (i == 0) return density.front();
        const double t = (x - s[i - 1]) / (s[i] - s[i - 1]);
        return density[i - 1] + t * (density[i] - density[i - 1]);
    }
};

inline PdfCurve tabulate(const std::function<double(double)>& f, double lo, double hi, std::size_t points, std::string method)
{
    if (points < 2) fail(ErrorKind::invalid_input, "a curve needs at least 2 grid points");
    PdfCurve c;
    c.method = std::move(method);
    c.s.resize(points);
    c.density.resize(points);
    for (std::size_t i = 0; i < points; ++i) {
        c.s[i] = i + 1 == points ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
        c.density[i] = f(c.s[i]);
    }
    return c;
}

namespace detail {

// isotropic direction scaled to radius r
inline void random_direction(CounterRng& rng, double r, double* x, int n)
{
    double r2 = 0.0;
    do {
        r2 = 0.0;
        for (int i = 0; i < n; ++i) {
            x[i] = rng.normal();
            r2 += x[i] * x[i];
        }
    } while (r2 == 0.0);
    const double scale = r / std::sqrt(r2);
    for (int i = 0; i < n; ++i) x[i] *= scale;
}

inline void uniform_ball_point(CounterRng& rng, const BallGeometry& g, double* x)
{
    const int n = g.dimension;
    random_direction(rng, g.radius * std::pow(rng.uniform(), 1.0 / n), x, n);
}

// draws one point of the density; returns the number of proposals used
class PointSampler {
public:
    PointSampler(const BallGeometry& g, const DensityModel& rho) : g_(g), rho_(rho)
    {
        validate_density(rho_, g_);
        const int n = g_.dimension;
        if (const auto* m = std::get_if<density::MultiShell>(&rho_)) {
            double lo = 0.0, acc = 0.0;
            for (std::size_t k = 0; k < m->radii.size(); ++k) {
                acc += m->densities[k] * (std::pow(m->radii[k], n) - std::pow(lo, n));
                shell_cdf_.push_back(acc);
                lo = m->radii[k];
            }
            for (auto& v : shell_cdf_) v /= acc;
            return;
        }
        if (std::holds_alternative<density::Uniform>(rho_) || std::holds_alternative<density::Gaussian>(rho_)) return;
        auto b = density_bound(rho_, g_);
        if (!b || !(*b > 0) || !std::isfinite(*b)) fail(ErrorKind::invalid_input, "rejection sampling needs a finite positive density bound");
        bound_ = *b;
    }

    std::uint64_t draw(CounterRng& rng, double* x) const
    {
        const int n = g_.dimension;
        const double R = g_.radius;
        if (std::holds_alternative<density::Uniform>(rho_)) {
            uniform_ball_point(rng, g_, x);
            return 1;
        }
        if (const auto* m = std::get_if<density::MultiShell>(&rho_)) {
            const double u = rng.uniform();
            std::size_t k = 0;
            while (k + 1 < shell_cdf_.size() && u > shell_cdf_[k]) ++k;
            const double lo = k == 0 ? 0.0 : std::pow(m->radii[k - 1], n);
            const double hi = std::pow(m->radii[k], n);
            random_direction(rng, std::pow(lo + rng.uniform() * (hi - lo), 1.0 / n), x, n);
            return 1;
        }
        if (const auto* gs = std::get_if<density::Gaussian>(&rho_)) {
            for (std::uint64_t tries = 1;; ++tries) {
                double r2 = 0.0;
                for (int i = 0; i < n; ++i) {
                    x[i] = gs->sigma * rng.normal();
                    r2 += x[i] * x[i];
                }
                if (r2 <= R * R) return tries;
            }
        }
        for (std::uint64_t tries = 1;; ++tries) {
            uniform_ball_point(rng, g_, x);
            const double v = density_value(rho_, std::span<const double>(x, static_cast<std::size_t>(n)), R);
            if (!(v >= 0.0)) fail(ErrorKind::invalid_input, "density is negative or undefined at a sample point");
            if (v > bound_ * (1.0 + 1e-12)) fail(ErrorKind::invalid_input, "density exceeds its declared upper bound");
            if (rng.uniform() * bound_ < v) return tries;
        }
    }

    // acceptance rate from a fixed pilot run; throws below 1e-6
    void check_efficiency(std::uint64_t seed, std::uint64_t stream) const
    {
        if (bound_ == 0.0 && !std::holds_alternative<density::Gaussian>(rho_)) return;
        constexpr std::uint64_t pilot = 65536;
        CounterRng rng = chunk_rng(seed, stream, 0xffffffffULL);
        const int n = g_.dimension;
        const double R = g_.radius;
        std::vector<double> x(n);
        std::uint64_t accepted = 0;
        for (std::uint64_t i = 0; i < pilot; ++i) {
            if (const auto* gs = std::get_if<density::Gaussian>(&rho_)) {
                double r2 = 0.0;
                for (int j = 0; j < n; ++j) {
                    const double v = gs->sigma * rng.normal();
                    r2 += v * v;
                }
                accepted += r2 <= R * R;
                continue;
            }
            uniform_ball_point(rng, g_, x.data());
            const double v = density_value(rho_, x, R);
            if (!(v >= 0.0)) fail(ErrorKind::invalid_input, "density is negative or undefined at a sample point");
            if (v > bound_ * (1.0 + 1e-12)) fail(ErrorKind::invalid_input, "density exceeds its declared upper bound");
            accepted += rng.uniform() * bound_ < v;
        }
        const double rate = static_cast<double>(accepted) / pilot;
        if (rate < 1e-6)
            fail(ErrorKind::efficiency, "rejection acceptance rate " + std::to_string(rate) + " from a pilot of "
                                            + std::to_string(pilot) + " proposals is below 1e-6");
    }

private:
    BallGeometry g_;
    const DensityModel& rho_;
    double bound_ = 0.0;
    std::vector<double> shell_cdf_;
};

} // namespace detail

inline PointBatch sample_density(const BallGeometry& g, const DensityModel& rho, const SamplerConfig& cfg)
{
    detail::PointSampler sampler(g, rho);
    sampler.check_efficiency(cfg.seed, cfg.stream);
    PointBatch batch{g.dimension, std::vector<double>(cfg.count * g.dimension)};
    for_each_chunk(cfg.count, cfg.threads, [&](std::uint64_t c, std::uint64_t first, std::uint64_t cnt) {
        CounterRng rng = chunk_rng(cfg.seed, cfg.stream, c);
        for (std::uint64_t i = 0; i < cnt; ++i) sampler.draw(rng, batch.coords.data() + (first + i) * g.dimension);
    });
    return batch;
}

inline PointBatch sample_uniform_ball(const BallGeometry& g, const SamplerConfig& cfg)
{
    return sample_density(g, density::Uniform{}, cfg);
}

struct DistanceHistogram {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;

    double width() const { return (hi - lo) / static_cast<double>(counts.size()); }
    double edge(std::size_t i) const { return i == counts.size() ? hi : lo + width() * static_cast<double>(i); }
    double empirical_density(std::size_t i) const
    {
        return static_cast<double>(counts[i]) / (static_cast<double>(total) * width());
    }
};

inline DistanceHistogram empirical_pair_pdf(const BallGeometry& g, const DensityModel& rho, std::uint64_t pairs,
                                            std::size_t bins, const SamplerConfig& cfg)
{
    if (pairs < 1000) fail(ErrorKind::invalid_input, "empirical pair PDF needs at least 1000 pairs");
    if (bins < 8) fail(ErrorKind::invalid_input, "empirical pair PDF needs at least 8 bins");
    detail::PointSampler sampler(g, rho);
    sampler.check_efficiency(cfg.seed, cfg.stream);
    const int n = g.dimension;
    DistanceHistogram h{0.0, 2.0 * g.radius, std::vector<std::uint64_t>(bins, 0), pairs};
    const std::uint64_t chunks = (pairs + chunk_size - 1) / chunk_size;
    std::vector<std::vector<std::uint64_t>> partial(chunks);
    const double scale = static_cast<double>(bins) / (2.0 * g.radius);
    for_each_chunk(pairs, cfg.threads, [&](std::uint64_t c, std::uint64_t, std::uint64_t cnt) {
        CounterRng rng = chunk_rng(cfg.seed, cfg.stream, c);
        std::vector<std::uint64_t> local(bins, 0);
        std::vector<double> a(n), b(n);
        for (std::uint64_t i = 0; i < cnt; ++i) {
            sampler.draw(rng, a.data());
            sampler.draw(rng, b.data());
            double d2 = 0.0;
            for (int j = 0; j < n; ++j) d2 += (a[j] - b[j]) * (a[j] - b[j]);
            const auto k = static_cast<std::size_t>(std::sqrt(d2) * scale);
            ++local[std::min(k, bins - 1)];
        }
        partial[c] = std::move(local);
    });
    for (const auto& p : partial)
        for (std::size_t k = 0; k < bins; ++k) h.counts[k] += p[k];
    return h;
}

struct ComparisonReport {
    double chi_square = 0.0;
    int dof = 0;
    double p_value = 0.0;
    double max_abs_deviation = 0.0;
    std::vector<double> expected_density;
};

inline ComparisonReport compare(const DistanceHistogram& h, const std::function<double(double)>& analytic)
{
    const double N = static_cast<double>(h.total);
    const double w = h.width();
    ComparisonReport r;
    int used = 0;
    bool impossible = false;
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        const double a = h.edge(i), b = h.edge(i + 1);
        const double mass = integrate(analytic, a, b, 1e-13, 1e-11).value;
        const double E = N * mass;
        r.expected_density.push_back(mass / w);
        r.max_abs_deviation = std::max(r.max_abs_deviation, std::fabs(h.empirical_density(i) - mass / w));
        const double O = static_cast<double>(h.counts[i]);
        if (E <= 0.0 && O > 0.0) impossible = true;
        if (E >= 5.0) {
            r.chi_square += (O - E) * (O - E) / E;
            ++used;
        }
    }
    if (impossible) {
        r.chi_square = std::numeric_limits<double>::infinity();
        r.dof = std::max(0, used - 1);
        r.p_value = 0.0;
        return r;
    }
    if (used == 0) fail(ErrorKind::insufficient_data, "no bin has an expected count of at least 5");
    r.dof = used - 1;
    r.p_value = r.dof > 0 ? gamma_q(0.5 * r.dof, 0.5 * r.chi_square) : (r.chi_square > 0 ? 0.0 : 1.0);
    return r;
}

inline std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string histogram_csv(const DistanceHistogram& h, const ComparisonReport& r)
{
    std::string out = "s_lo,s_hi,count,empirical_density,analytic_density\n";
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        out += format_double(h.edge(i)) + ',' + format_double(h.edge(i + 1)) + ',' + std::to_string(h.counts[i]) + ','
            + format_double(h.empirical_density(i)) + ','
            + format_double(i < r.expected_density.size() ? r.expected_density[i] : 0.0) + '\n';
    }
    return out;
}

} // namespace ballpdf
