#include "ballpdf/density_spec.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <vector>

#include "ballpdf/error.hpp"

namespace ballpdf {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

[[noreturn]] void bad(std::string_view spec, const std::string& why)
{
    fail(ErrorKind::invalid_input, "cannot parse density '" + std::string(spec) + "': " + why);
}

double parse_real(std::string_view tok, std::string_view spec)
{
    tok = trim(tok);
    double v = 0.0;
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || p != tok.data() + tok.size() || !std::isfinite(v))
        bad(spec, "'" + std::string(tok) + "' is not a number");
    return v;
}

int parse_int(std::string_view tok, std::string_view spec)
{
    tok = trim(tok);
    int v = 0;
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || p != tok.data() + tok.size())
        bad(spec, "'" + std::string(tok) + "' is not an integer");
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

std::vector<double> real_list(std::string_view s, std::string_view spec)
{
    std::vector<double> v;
    for (auto t : split(s, ',')) v.push_back(parse_real(t, spec));
    return v;
}

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class T, class F>
std::string join(const std::vector<T>& v, F f)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + f(v[i]);
    return out;
}

} // namespace

DensityModel parse_density(std::string_view spec)
{
    const std::string_view s = trim(spec);
    const auto colon = s.find(':');
    const std::string_view head = trim(s.substr(0, colon));
    const std::string_view args = colon == std::string_view::npos ? std::string_view{} : s.substr(colon + 1);
    const bool has_args = colon != std::string_view::npos;

    if (head == "uniform") {
        if (has_args) bad(spec, "uniform takes no arguments");
        return density::Uniform{};
    }
    if (!has_args || trim(args).empty()) bad(spec, "missing arguments");
    if (head == "radial-poly") return density::RadialPolynomial{real_list(args, spec)};
    if (head == "parabolic") {
        const auto v = real_list(args, spec);
        if (v.size() != 1) bad(spec, "parabolic takes one value");
        return density::ParabolicRadial{v[0]};
    }
    if (head == "gauss") {
        const auto v = real_list(args, spec);
        if (v.size() != 1) bad(spec, "gauss takes one value");
        return density::Gaussian{v[0]};
    }
    if (head == "shells") {
        const auto parts = split(args, ';');
        if (parts.size() != 2) bad(spec, "shells needs 'radii;densities'");
        density::MultiShell m{real_list(parts[0], spec), real_list(parts[1], spec)};
        if (m.radii.size() != m.densities.size()) bad(spec, "radii and densities differ in length");
        return m;
    }
    if (head == "monomial") {
        density::CartesianMonomial m;
        for (auto t : split(args, ',')) m.exponents.push_back(parse_int(t, spec));
        return m;
    }
    bad(spec, "unknown density kind '" + std::string(head) + "'");
}

std::string format_density(const DensityModel& d)
{
    return std::visit(overloaded{
                          [](const density::Uniform&) { return std::string("uniform"); },
                          [](const density::RadialPolynomial& p) { return "radial-poly:" + join(p.coefficients, num); },
                          [](const density::ParabolicRadial& p) { return "parabolic:" + num(p.alpha); },
                          [](const density::Gaussian& p) { return "gauss:" + num(p.sigma); },
                          [](const density::MultiShell& m) {
                              return "shells:" + join(m.radii, num) + ";" + join(m.densities, num);
                          },
                          [](const density::CartesianMonomial& m) {
                              return "monomial:" + join(m.exponents, [](int e) { return std::to_string(e); });
                          },
                          [](const density::GeneralCartesian&) { return std::string("general"); },
                      },
                      d);
}

} // namespace ballpdf
