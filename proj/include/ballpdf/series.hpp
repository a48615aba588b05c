#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "error.hpp"

namespace ballpdf {

// power series in h truncated at a fixed order N (N+1 coefficients)
template <class T>
class TruncatedSeries {
public:
    explicit TruncatedSeries(int order, T constant = T(0)) : c_(static_cast<std::size_t>(order) + 1, T(0))
    {
        if (order < 0) fail(ErrorKind::domain, "negative series order");
        c_[0] = constant;
    }

    static TruncatedSeries variable(int order, T scale = T(1))
    {
        TruncatedSeries s(order);
        if (order >= 1) s.c_[1] = scale;
        return s;
    }

    int order() const { return static_cast<int>(c_.size()) - 1; }
    const T& operator[](std::size_t k) const { return c_[k]; }
    T& operator[](std::size_t k) { return c_[k]; }
    const std::vector<T>& coefficients() const { return c_; }

    TruncatedSeries& operator+=(const TruncatedSeries& o)
    {
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
        return *this;
    }
    TruncatedSeries& operator-=(const TruncatedSeries& o)
    {
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
        return *this;
    }
    TruncatedSeries& operator*=(const T& a)
    {
        for (auto& v : c_) v *= a;
        return *this;
    }

    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
    friend TruncatedSeries operator*(TruncatedSeries a, const T& b) { return a *= b; }
    friend TruncatedSeries operator*(const T& b, TruncatedSeries a) { return a *= b; }

    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b)
    {
        TruncatedSeries r(a.order());
        const std::size_t n = r.c_.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (a.c_[i] == T(0)) continue;
            for (std::size_t j = 0; i + j < n; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
        }
        return r;
    }

    // g^alpha for g(0) > 0 (J.C.P. Miller recurrence)
    TruncatedSeries pow(T alpha) const
    {
        using std::pow;
        if (!(c_[0] > T(0))) fail(ErrorKind::domain, "series power needs a positive constant term");
        TruncatedSeries r(order());
        r.c_[0] = pow(c_[0], alpha);
        for (std::size_t k = 1; k < c_.size(); ++k) {
            T acc = T(0);
            for (std::size_t j = 1; j <= k; ++j)
                acc += ((alpha + T(1)) * T(j) - T(k)) * c_[j] * r.c_[k - j];
            r.c_[k] = acc / (T(k) * c_[0]);
        }
        return r;
    }

    TruncatedSeries reciprocal() const
    {
        if (c_[0] == T(0)) fail(ErrorKind::domain, "series reciprocal needs a non-zero constant term");
        TruncatedSeries r(order());
        r.c_[0] = T(1) / c_[0];
        for (std::size_t k = 1; k < c_.size(); ++k) {
            T acc = T(0);
            for (std::size_t j = 1; j <= k; ++j) acc += c_[j] * r.c_[k - j];
            r.c_[k] = -acc / c_[0];
        }
        return r;
    }

    TruncatedSeries derivative() const
    {
        TruncatedSeries r(order());
        for (std::size_t k = 1; k < c_.size(); ++k) r.c_[k - 1] = T(k) * c_[k];
        return r;
    }

    // antiderivative with the given constant; the top coefficient of *this is dropped
    TruncatedSeries integral(T constant = T(0)) const
    {
        TruncatedSeries r(order(), constant);
        for (std::size_t k = 1; k < c_.size(); ++k) r.c_[k] = c_[k - 1] / T(k);
        return r;
    }

    T evaluate(T h) const
    {
        T acc = T(0);
        for (std::size_t k = c_.size(); k-- > 0;) acc = acc * h + c_[k];
        return acc;
    }

private:
    std::vector<T> c_;
};

// arcsin(u) = arcsin(u0) + int u' (1-u^2)^{-1/2}; asin_u0 supplied by the caller for accuracy
template <class T>
TruncatedSeries<T> series_asin(const TruncatedSeries<T>& u, T asin_u0, T one_minus_u0_sq)
{
    bool constant = true;
    for (int k = 1; k <= u.order(); ++k)
        if (u[k] != T(0)) constant = false;
    if (constant) return TruncatedSeries<T>(u.order(), asin_u0);
    TruncatedSeries<T> w = TruncatedSeries<T>(u.order(), T(1)) - u * u;
    w[0] = one_minus_u0_sq;
    return (u.derivative() * w.pow(T(-0.5))).integral(asin_u0);
}

} // namespace ballpdf
