#pragma once

#include <algorithm>
#include <vector>

namespace jacfac {

// Power series in z truncated below order T (coefficients 0..T-1).
template <class C>
using Series = std::vector<C>;

template <class C>
int valuation(const Series<C>& s) {
    for (std::size_t i = 0; i < s.size(); ++i)
        if (!s[i].is_zero()) return static_cast<int>(i);
    return -1;  // zero up to truncation
}

template <class C>
Series<C> series_add(const Series<C>& a, const Series<C>& b) {
    Series<C> r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] = a[i];
        if (i < b.size()) r[i] = r[i] + b[i];
    }
    return r;
}

template <class C>
Series<C> series_sub(const Series<C>& a, const Series<C>& b) {
    Series<C> r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] = a[i];
        if (i < b.size()) r[i] = r[i] - b[i];
    }
    return r;
}

template <class C, class S>
Series<C> series_scale(const Series<C>& a, const S& c) {
    Series<C> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_zero()) r[i] = a[i] * c;
    return r;
}

// Product truncated at T; coefficient types may differ (e.g. scalar times polynomial).
template <class C, class D>
Series<C> series_mul(const Series<C>& a, const Series<D>& b, std::size_t T) {
    Series<C> r(T);
    for (std::size_t i = 0; i < a.size() && i < T; ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size() && i + j < T; ++j) {
            if (b[j].is_zero()) continue;
            r[i + j] = r[i + j] + a[i] * b[j];
        }
    }
    return r;
}

// z^k * a, truncated at T.
template <class C>
Series<C> series_shift(const Series<C>& a, int k, std::size_t T) {
    Series<C> r(T);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (i + k < T) r[i + k] = a[i];
    return r;
}

}  // namespace jacfac
