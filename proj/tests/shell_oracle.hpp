#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include <ballpdf/symmetric.hpp>

namespace shell_oracle {

using Q = boost::multiprecision::cpp_rational;

struct Entry {
    int shells, region, power, i, j;
    std::int64_t num, den;
};

inline const std::vector<Entry>& reference_table()
{
    static const std::vector<Entry> t{
#include "data/reference_shells.inc"
    };
    return t;
}

// (region, power, i, j) -> coefficient, i <= j, 1-based
using Form = std::map<std::tuple<int, int, int, int>, Q>;

inline Form reference_form(int K)
{
    Form f;
    for (const auto& e : reference_table())
        if (e.shells == K) f[{e.region, e.power, e.i, e.j}] = Q(e.num, e.den);
    return f;
}

inline Q form_at(const Form& f, int region, int power, int i, int j)
{
    const auto it = f.find({region, power, i, j});
    return it == f.end() ? Q(0) : it->second;
}

// D^2 times the generated pieces, for equal-thickness shells in the unit ball
inline std::vector<std::vector<Q>> scaled_pieces(int K, const std::vector<Q>& rho)
{
    std::vector<Q> radii;
    for (int k = 1; k <= K; ++k) radii.emplace_back(k, K);
    const auto p = ballpdf::multishell_polynomial<Q>(radii, rho);
    Q D = 0;
    for (int k = 1; k <= K; ++k) D += rho[k - 1] * Q(k * k * k - (k - 1) * (k - 1) * (k - 1));
    auto out = p.pieces;
    for (auto& piece : out)
        for (auto& c : piece) c *= D * D;
    return out;
}

// quadratic-form coefficients of the generated pieces, by polarization on unit density vectors
inline Form generated_form(int K)
{
    Form f;
    auto unit = [K](int i, int j) {
        std::vector<Q> r(K, Q(0));
        r[i - 1] += 1;
        r[j - 1] += 1;
        return r;
    };
    std::map<int, std::vector<std::vector<Q>>> diag;
    for (int i = 1; i <= K; ++i) {
        std::vector<Q> r(K, Q(0));
        r[i - 1] = 1;
        diag[i] = scaled_pieces(K, r);
    }
    for (int i = 1; i <= K; ++i)
        for (int j = i; j <= K; ++j) {
            const auto both = i == j ? diag[i] : scaled_pieces(K, unit(i, j));
            for (std::size_t reg = 0; reg < both.size(); ++reg)
                for (std::size_t pw = 0; pw < both[reg].size(); ++pw) {
                    Q v = i == j ? both[reg][pw] : both[reg][pw] - diag[i][reg][pw] - diag[j][reg][pw];
                    if (v != 0) f[{static_cast<int>(reg) + 1, static_cast<int>(pw), i, j}] = v;
                }
        }
    return f;
}

struct Mismatch {
    int region, power, i, j;
    Q generated, reference;
};

inline std::vector<Mismatch> compare_forms(int K)
{
    const Form g = generated_form(K), r = reference_form(K);
    std::vector<Mismatch> out;
    for (int reg = 1; reg <= 2 * K; ++reg)
        for (int pw = 0; pw <= 5; ++pw)
            for (int i = 1; i <= K; ++i)
                for (int j = i; j <= K; ++j) {
                    const Q a = form_at(g, reg, pw, i, j), b = form_at(r, reg, pw, i, j);
                    if (a != b) out.push_back({reg, pw, i, j, a, b});
                }
    return out;
}

// corrections to the reference 4-shell table: s^5 in region 3 carries 2 rho1 rho2 (not 2 rho1 rho3),
// region 7 carries 2 rho3 rho4 (not 2 rho2 rho4)
inline bool is_documented_erratum(const Mismatch& m)
{
    if (m.power != 5) return false;
    const std::array<std::tuple<int, int, int, int, int>, 4> known{{
        {3, 1, 2, 1536, 0}, {3, 1, 3, 0, 1536}, {7, 2, 4, 0, 1536}, {7, 3, 4, 1536, 0},
    }};
    for (auto [reg, i, j, gen, ref] : known)
        if (m.region == reg && m.i == i && m.j == j && m.generated == gen && m.reference == ref) return true;
    return false;
}

} // namespace shell_oracle
