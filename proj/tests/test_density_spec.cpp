#include <gtest/gtest.h>

#include <ballpdf/density_spec.hpp>
#include <ballpdf/error.hpp>

using namespace ballpdf;

TEST(DensitySpec, ParsesEveryKind)
{
    EXPECT_TRUE(std::holds_alternative<density::Uniform>(parse_density("uniform")));
    EXPECT_TRUE(std::holds_alternative<density::Uniform>(parse_density("  uniform ")));
    const auto p = std::get<density::RadialPolynomial>(parse_density("radial-poly:1, 0,-0.5"));
    EXPECT_EQ(p.coefficients, (std::vector<double>{1.0, 0.0, -0.5}));
    EXPECT_EQ(std::get<density::ParabolicRadial>(parse_density("parabolic:0.25")).alpha, 0.25);
    EXPECT_EQ(std::get<density::Gaussian>(parse_density("gauss:1e-1")).sigma, 0.1);
    const auto s = std::get<density::MultiShell>(parse_density("shells:0.5,1;2,1"));
    EXPECT_EQ(s.radii, (std::vector<double>{0.5, 1.0}));
    EXPECT_EQ(s.densities, (std::vector<double>{2.0, 1.0}));
    EXPECT_EQ(std::get<density::CartesianMonomial>(parse_density("monomial:4,4")).exponents, (std::vector<int>{4, 4}));
}

TEST(DensitySpec, RoundTripIsExact)
{
    for (const char* text : {"uniform", "radial-poly:0,0,1", "parabolic:0.10000000000000001", "gauss:0.29999999999999999",
             "shells:0.33333333333333331,0.66666666666666663,1;3,2,1", "monomial:2,2,2"}) {
        const auto d = parse_density(text);
        EXPECT_EQ(format_density(d), text);
        EXPECT_EQ(format_density(parse_density(format_density(d))), format_density(d));
    }
}

TEST(DensitySpec, RejectsMalformedInput)
{
    for (const char* text : {"", "gaussian:1", "gauss", "gauss:", "gauss:abc", "gauss:1,2", "parabolic:", "uniform:1",
             "shells:1;", "shells:1,2;1", "shells:1", "monomial:1.5", "radial-poly:1,,2", "gauss:inf"}) {
        try {
            parse_density(text);
            ADD_FAILURE() << text;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::invalid_input) << text;
            EXPECT_NE(std::string(e.what()).find("cannot parse density"), std::string::npos);
        }
    }
}
