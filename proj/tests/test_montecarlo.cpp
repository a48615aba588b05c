#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include <ballpdf/analytic.hpp>
#include <ballpdf/applications.hpp>
#include <ballpdf/montecarlo.hpp>

using namespace ballpdf;

TEST(CounterRng, ReproducibleAndStreamDependent)
{
    CounterRng a(5, 0), b(5, 0), c(5, 1), d(6, 0);
    for (int i = 0; i < 1000; ++i) {
        const auto x = a.next_u64();
        EXPECT_EQ(x, b.next_u64());
        EXPECT_NE(x, c.next_u64());
        EXPECT_NE(x, d.next_u64());
    }
}

TEST(CounterRng, UniformMomentsAndRange)
{
    CounterRng r(1, 0);
    double s = 0.0, s2 = 0.0;
    const int N = 1000000;
    for (int i = 0; i < N; ++i) {
        const double u = r.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        s += u;
        s2 += u * u;
    }
    EXPECT_NEAR(s / N, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / N));
    EXPECT_NEAR(s2 / N, 1.0 / 3.0, 5.0 * std::sqrt(4.0 / 45.0 / N));
}

TEST(CounterRng, NormalMoments)
{
    CounterRng r(2, 0);
    double s = 0.0, s2 = 0.0, s4 = 0.0;
    const int N = 1000000;
    for (int i = 0; i < N; ++i) {
        const double z = r.normal();
        s += z;
        s2 += z * z;
        s4 += z * z * z * z;
    }
    EXPECT_NEAR(s / N, 0.0, 5.0 / std::sqrt(N));
    EXPECT_NEAR(s2 / N, 1.0, 5.0 * std::sqrt(2.0 / N));
    EXPECT_NEAR(s4 / N, 3.0, 5.0 * std::sqrt(96.0 / N));
}

TEST(Chunks, EveryItemOnceForAnyThreadCount)
{
    for (unsigned t : {1u, 2u, 5u}) {
        std::vector<int> hits(1000, 0);
        for_each_chunk(1000, t, [&](std::uint64_t, std::uint64_t first, std::uint64_t cnt) {
            for (std::uint64_t i = 0; i < cnt; ++i) ++hits[first + i];
        }, 64);
        EXPECT_TRUE(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    }
}

TEST(Chunks, ExceptionPropagates)
{
    EXPECT_THROW(for_each_chunk(1000, 3, [](std::uint64_t c, std::uint64_t, std::uint64_t) {
        if (c == 4) throw std::runtime_error("x");
    }, 64), std::runtime_error);
}

TEST(Sampler, PointsInsideBallAndRadialLaw)
{
    const auto g = make_geometry(4, 2.0);
    const auto pts = sample_uniform_ball(g, {3, 0, 200000, 1});
    ASSERT_EQ(pts.size(), 200000u);
    double mean_rn = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto p = pts.point(i);
        const double r = std::sqrt(std::inner_product(p.begin(), p.end(), p.begin(), 0.0));
        ASSERT_LE(r, 2.0);
        mean_rn += std::pow(r / 2.0, 4);
    }
    // (r/R)^n is uniform on (0,1)
    EXPECT_NEAR(mean_rn / pts.size(), 0.5, 5.0 * std::sqrt(1.0 / 12.0 / pts.size()));
}

TEST(Sampler, ThreadInvariant)
{
    const auto g = make_geometry(3, 1.0);
    const DensityModel rho = density::ParabolicRadial{0.5};
    const auto a = sample_density(g, rho, {17, 0, 300000, 1});
    const auto b = sample_density(g, rho, {17, 0, 300000, 4});
    EXPECT_EQ(a.coords, b.coords);
}

TEST(Sampler, ShellOccupancyFollowsMass)
{
    const auto g = make_geometry(3, 1.0);
    const DensityModel rho = density::MultiShell{{0.5, 1.0}, {4.0, 1.0}};
    const auto pts = sample_density(g, rho, {1, 0, 400000, 1});
    std::size_t inner = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto p = pts.point(i);
        inner += std::inner_product(p.begin(), p.end(), p.begin(), 0.0) < 0.25;
    }
    const double expect = 4.0 * 0.125 / (4.0 * 0.125 + 0.875);
    const double frac = static_cast<double>(inner) / pts.size();
    EXPECT_NEAR(frac, expect, 5.0 * std::sqrt(expect * (1 - expect) / pts.size()));
}

TEST(Sampler, EfficiencyFailure)
{
    const auto g = make_geometry(10, 1.0);
    const DensityModel rho = density::Gaussian{50.0};
    try {
        sample_density(g, rho, {0, 0, 10, 1});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::efficiency);
    }
}

TEST(Histogram, CountsAndLayout)
{
    const auto g = make_geometry(3, 1.5);
    const auto h = empirical_pair_pdf(g, density::Uniform{}, 100000, 40, {4, 0, 0, 1});
    EXPECT_EQ(h.counts.size(), 40u);
    EXPECT_EQ(std::accumulate(h.counts.begin(), h.counts.end(), std::uint64_t{0}), 100000u);
    EXPECT_DOUBLE_EQ(h.edge(40), 3.0);
    double integral = 0.0;
    for (std::size_t i = 0; i < 40; ++i) integral += h.empirical_density(i) * h.width();
    EXPECT_NEAR(integral, 1.0, 1e-12);
    EXPECT_THROW(empirical_pair_pdf(g, density::Uniform{}, 10, 40, {}), Error);
    EXPECT_THROW(empirical_pair_pdf(g, density::Uniform{}, 10000, 4, {}), Error);
}

TEST(Histogram, ThreadInvariant)
{
    const auto g = make_geometry(3, 1.0);
    const DensityModel rho = density::Gaussian{0.4};
    const auto a = empirical_pair_pdf(g, rho, 300000, 32, {8, 0, 0, 1});
    const auto b = empirical_pair_pdf(g, rho, 300000, 32, {8, 0, 0, 3});
    EXPECT_EQ(a.counts, b.counts);
}

TEST(Compare, UniformAcceptsTrueDensity)
{
    const auto g = make_geometry(3, 1.0);
    const auto h = empirical_pair_pdf(g, density::Uniform{}, 1000000, 64, {42, 0, 0, 1});
    const auto r = compare(h, [&](double s) { return pdf_uniform(g, s); });
    EXPECT_GT(r.p_value, 0.001);
    EXPECT_EQ(r.dof, 63);
    EXPECT_LT(r.max_abs_deviation, 0.02);
}

TEST(Compare, RejectsWrongDimension)
{
    const auto h = empirical_pair_pdf(make_geometry(3), density::Uniform{}, 200000, 64, {42, 0, 0, 1});
    const auto g4 = make_geometry(4);
    EXPECT_LT(compare(h, [&](double s) { return pdf_uniform(g4, s); }).p_value, 1e-10);
}

TEST(Compare, ImpossibleBinGivesZeroP)
{
    DistanceHistogram h{0.0, 2.0, std::vector<std::uint64_t>(8, 1000), 8000};
    const auto r = compare(h, [](double s) { return s < 1.0 ? 1.0 : 0.0; });
    EXPECT_EQ(r.p_value, 0.0);
    EXPECT_TRUE(std::isinf(r.chi_square));
}

TEST(Compare, InsufficientData)
{
    DistanceHistogram h{0.0, 2.0, std::vector<std::uint64_t>(8, 1), 8};
    try {
        compare(h, [](double) { return 0.5; });
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::insufficient_data);
    }
}

TEST(PairMoments, AgreeWithClosedForms)
{
    const auto g = make_geometry(3, 1.0);
    const auto pts = sample_uniform_ball(g, {99, 0, 2000000, 1});
    const std::size_t N = pts.size() / 2;
    double m[3] = {}, q[3] = {};
    for (std::size_t i = 0; i < N; ++i) {
        const auto a = pts.point(2 * i), b = pts.point(2 * i + 1);
        double d2 = 0.0;
        for (int j = 0; j < 3; ++j) d2 += (a[j] - b[j]) * (a[j] - b[j]);
        const double v[3] = {std::sqrt(d2), d2, 1.0 / std::sqrt(d2)};
        for (int k = 0; k < 3; ++k) {
            m[k] += v[k];
            q[k] += v[k] * v[k];
        }
    }
    const int orders[3] = {1, 2, -1};
    for (int k = 0; k < 3; ++k) {
        const double mean = m[k] / N;
        const double se = std::sqrt((q[k] / N - mean * mean) / N);
        EXPECT_LT(std::fabs(mean - moment_uniform(g, orders[k])), 3.0 * se) << orders[k];
    }
}

TEST(Tabulate, InterpolatesAndClamps)
{
    const auto c = tabulate([](double s) { return s * (2.0 - s); }, 0.0, 2.0, 201, "test");
    EXPECT_EQ(c.s.size(), 201u);
    EXPECT_NEAR(c(0.5), 0.75, 1e-4);
    EXPECT_EQ(c(2.5), 0.0);
    EXPECT_THROW(tabulate([](double) { return 0.0; }, 0.0, 1.0, 1, "x"), Error);
}

TEST(AnalyticDispatch, MethodNames)
{
    const auto g3 = make_geometry(3);
    EXPECT_EQ(analytic_pdf(g3, density::Uniform{}).method, "uniform/reg-inc-beta");
    EXPECT_EQ(analytic_pdf(g3, density::RadialPolynomial{{0, 0, 2}}).method, "closed-form-r2");
    EXPECT_EQ(analytic_pdf(g3, density::ParabolicRadial{0.3}).method, "closed-form-parabolic");
    EXPECT_EQ(analytic_pdf(g3, density::Gaussian{0.1}).method, "gaussian-closed");
    EXPECT_EQ(analytic_pdf(g3, density::Gaussian{0.4}).method, "radial-numeric");
    EXPECT_EQ(analytic_pdf(g3, density::MultiShell{{0.5, 1.0}, {2.0, 1.0}}).method, "shells-piecewise");
    EXPECT_EQ(analytic_pdf(make_geometry(2), density::CartesianMonomial{{4, 4}}).method, "closed-form-x4y4");
    EXPECT_EQ(analytic_pdf(make_geometry(2), density::CartesianMonomial{{2, 0}}).method, "master-quadrature-table");
    EXPECT_TRUE(analytic_pdf(make_geometry(2), density::CartesianMonomial{{2, 0}}).tabulated);
    EXPECT_THROW(analytic_pdf(g3, density::Gaussian{0.1}, {Representation::OddSeries, {}, 129}), Error);
}
