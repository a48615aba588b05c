#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "arbitrary.hpp"
#include "density.hpp"
#include "montecarlo.hpp"
#include "symmetric.hpp"
#include "uniform.hpp"

namespace ballpdf {

struct AnalyticOptions {
    std::optional<Representation> representation;
    MasterBudget budget;
    std::size_t table_points = 129;
};

struct AnalyticPdf {
    std::function<double(double)> f;
    std::string method;
    // true when f interpolates a precomputed table rather than evaluating pointwise
    bool tabulated = false;
    std::function<double(double)> pointwise;
};

namespace detail {

inline bool exponents_equal(const density::CartesianMonomial& m, std::initializer_list<int> e)
{
    return std::equal(m.exponents.begin(), m.exponents.end(), e.begin(), e.end());
}

} // namespace detail

// best available evaluator of P_n(s) for a density: closed form, exact piecewise polynomial, radial reduction or master formula
inline AnalyticPdf analytic_pdf(const BallGeometry& g, const DensityModel& rho, const AnalyticOptions& opt = {})
{
    validate_density(rho, g);
    const int n = g.dimension;
    const double R = g.radius;
    if (opt.representation && !std::holds_alternative<density::Uniform>(rho))
        fail(ErrorKind::unsupported, "a representation applies only to the uniform density");

    auto direct = [](std::function<double(double)> f, std::string method) {
        return AnalyticPdf{f, std::move(method), false, f};
    };
    auto radial = [&] {
        return direct([g, rho](double s) { return pdf_radial_numeric(g, rho, s); }, "radial-numeric");
    };

    if (std::holds_alternative<density::Uniform>(rho)) {
        if (opt.representation) {
            const Representation r = *opt.representation;
            if (!representation_valid(n, r)) fail(ErrorKind::invalid_representation, "representation not valid for this n");
            return direct([g, r](double s) { return pdf_uniform_repr(g, s, r); }, std::string("uniform/") + to_string(r));
        }
        return direct([g](double s) { return pdf_uniform(g, s); }, "uniform/reg-inc-beta");
    }
    if (const auto* p = std::get_if<density::RadialPolynomial>(&rho)) {
        const auto& c = p->coefficients;
        const bool r2 = c.size() == 3 && c[0] == 0.0 && c[1] == 0.0 && c[2] > 0.0;
        if (n == 3 && r2) return direct([g](double s) { return pdf_radial_r2(g, s); }, "closed-form-r2");
        return radial();
    }
    if (const auto* p = std::get_if<density::ParabolicRadial>(&rho)) {
        const double a = p->alpha;
        if (n == 3) return direct([g, a](double s) { return pdf_radial_parabolic(g, a, s); }, "closed-form-parabolic");
        return radial();
    }
    if (const auto* p = std::get_if<density::Gaussian>(&rho)) {
        // truncation at R is below double precision once R >= 8 sigma
        if (R >= 8.0 * p->sigma) {
            const GaussianBall gb{n, p->sigma};
            return direct([gb](double s) { return pdf_gaussian(gb, s); }, "gaussian-closed");
        }
        return radial();
    }
    if (const auto* m = std::get_if<density::MultiShell>(&rho)) {
        if (n == 3) {
            auto poly = std::make_shared<PiecewisePolynomial<double>>(multishell_polynomial(g, *m));
            return direct([poly](double s) { return (*poly)(s); }, "shells-piecewise");
        }
        return radial();
    }
    if (const auto* m = std::get_if<density::CartesianMonomial>(&rho)) {
        if (n == 2 && detail::exponents_equal(*m, {4, 4}))
            return direct([g](double s) { return pdf_example_2d(g, s); }, "closed-form-x4y4");
        if (n == 3 && detail::exponents_equal(*m, {2, 2, 2}))
            return direct([g](double s) { return pdf_example_3d(g, s); }, "closed-form-x2y2z2");
        if (n == 4 && detail::exponents_equal(*m, {4, 0, 0, 0}))
            return direct([g](double s) { return pdf_example_4d(g, s); }, "closed-form-x1^4");
    }
    if (n < 2) fail(ErrorKind::unsupported, "no evaluator for a non-radial density with n = 1");
    const MasterMethod method = n == 2 ? MasterMethod::Quadrature : MasterMethod::MonteCarlo;
    auto master = std::make_shared<MasterPdf>(g, rho, method, opt.budget);
    std::function<double(double)> point = [master](double s) { return master->evaluate(s).value; };
    const std::string name = n == 2 ? "master-quadrature" : "master-monte-carlo";
    struct LazyTable {
        std::once_flag once;
        PdfCurve curve;
    };
    auto table = std::make_shared<LazyTable>();
    const std::size_t points = opt.table_points;
    auto interp = [table, point, points, R, name](double s) {
        std::call_once(table->once, [&] { table->curve = tabulate(point, 0.0, 2.0 * R, points, name); });
        return table->curve(s);
    };
    return AnalyticPdf{interp, name + "-table", true, point};
}

} // namespace ballpdf
