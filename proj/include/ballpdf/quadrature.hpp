#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "special.hpp"

namespace ballpdf {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
    bool converged = true;
};

namespace detail {

// Kronrod 15 abscissae, weights; Gauss 7 weights on the even-indexed nodes
constexpr double xgk15[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk15[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg7[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
};

template <class F>
Panel gk15(F& f, double a, double b)
{
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double rk = fc * wgk15[7];
    double rg = fc * wg7[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk15[j];
        const double f1 = f(c - dx), f2 = f(c + dx);
        rk += wgk15[j] * (f1 + f2);
        if (j % 2 == 1) rg += wg7[j / 2] * (f1 + f2);
    }
    rk *= h;
    rg *= h;
    return {a, b, rk, std::fabs(rk - rg)};
}

} // namespace detail

// global adaptive Gauss-Kronrod: bisect the panel with the largest error estimate
template <class F>
QuadResult integrate(F&& f, double a, double b, double abs_tol, double rel_tol = 0.0, int max_panels = 4000)
{
    QuadResult r;
    if (a == b) return r;
    auto cmp = [](const detail::Panel& x, const detail::Panel& y) { return x.error < y.error; };
    std::vector<detail::Panel> heap;
    heap.push_back(detail::gk15(f, a, b));
    r.evaluations = 15;
    double total = heap.front().value, err = heap.front().error;
    while (err > std::max(abs_tol, rel_tol * std::fabs(total))) {
        if (static_cast<int>(heap.size()) >= max_panels) {
            r.converged = false;
            break;
        }
        std::pop_heap(heap.begin(), heap.end(), cmp);
        const detail::Panel p = heap.back();
        heap.pop_back();
        const double m = 0.5 * (p.a + p.b);
        if (!(m > p.a && m < p.b)) {
            r.converged = false;
            heap.push_back(p);
            std::push_heap(heap.begin(), heap.end(), cmp);
            break;
        }
        detail::Panel l = detail::gk15(f, p.a, m), h = detail::gk15(f, m, p.b);
        r.evaluations += 30;
        heap.push_back(l);
        std::push_heap(heap.begin(), heap.end(), cmp);
        heap.push_back(h);
        std::push_heap(heap.begin(), heap.end(), cmp);
        total = 0.0;
        err = 0.0;
        for (const auto& q : heap) {
            total += q.value;
            err += q.error;
        }
    }
    r.value = total;
    r.error = err;
    return r;
}

// integrate over consecutive sub-intervals split at sorted interior points
template <class F>
QuadResult integrate_split(F&& f, std::vector<double> points, double abs_tol, double rel_tol = 0.0)
{
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    QuadResult r;
    const std::size_t pieces = points.size() > 1 ? points.size() - 1 : 0;
    for (std::size_t i = 0; i < pieces; ++i) {
        auto q = integrate(f, points[i], points[i + 1], abs_tol / static_cast<double>(pieces), rel_tol);
        r.value += q.value;
        r.error += q.error;
        r.evaluations += q.evaluations;
        r.converged = r.converged && q.converged;
    }
    return r;
}

// int_a^inf f via x = a + t/(1-t)
template <class F>
QuadResult integrate_to_infinity(F&& f, double a, double abs_tol, double rel_tol = 0.0)
{
    auto g = [&](double t) {
        if (t >= 1.0) return 0.0;
        const double u = 1.0 - t;
        const double v = f(a + t / u) / (u * u);
        return std::isfinite(v) ? v : 0.0;
    };
    return integrate(g, 0.0, 1.0, abs_tol, rel_tol);
}

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre on [-1, 1] by Newton iteration on P_m
inline GaussRule gauss_legendre(int m)
{
    GaussRule g;
    g.nodes.resize(m);
    g.weights.resize(m);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double z = std::cos(detail::pi * (i + 0.75) / (m + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= m; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = m * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::fabs(z - z1) < 1e-16) break;
        }
        {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= m; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = m * (z * p1 - p2) / (z * z - 1.0);
        }
        g.nodes[i] = -z;
        g.nodes[m - 1 - i] = z;
        g.weights[i] = g.weights[m - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    return g;
}

} // namespace ballpdf
