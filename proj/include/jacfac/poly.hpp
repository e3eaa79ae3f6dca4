#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace jacfac {

// Monomial in at most kCap distinct variables, factors packed as (var << 8 | exponent)
// in ascending variable order and zero padded.
struct Mono {
    static constexpr int kCap = 15;
    uint8_t n = 0;
    std::array<uint32_t, kCap> f{};

    static Mono var(int v, int e = 1) {
        Mono m;
        m.n = 1;
        m.f[0] = (static_cast<uint32_t>(v) << 8) | static_cast<uint32_t>(e);
        return m;
    }
    static int var_of(uint32_t fac) { return static_cast<int>(fac >> 8); }
    static int exp_of(uint32_t fac) { return static_cast<int>(fac & 0xffu); }

    bool is_one() const { return n == 0; }
    int degree() const {
        int d = 0;
        for (int i = 0; i < n; ++i) d += exp_of(f[i]);
        return d;
    }
    int exponent(int v) const {
        for (int i = 0; i < n; ++i)
            if (var_of(f[i]) == v) return exp_of(f[i]);
        return 0;
    }
    // Monomial with variable v removed.
    Mono without(int v) const {
        Mono m;
        for (int i = 0; i < n; ++i)
            if (var_of(f[i]) != v) m.f[m.n++] = f[i];
        return m;
    }

    friend bool operator==(const Mono& a, const Mono& b) {
        if (a.n != b.n) return false;
        for (int i = 0; i < a.n; ++i)
            if (a.f[i] != b.f[i]) return false;
        return true;
    }
    friend bool operator<(const Mono& a, const Mono& b) {
        int k = std::max(a.n, b.n);
        for (int i = 0; i < k; ++i)
            if (a.f[i] != b.f[i]) return a.f[i] < b.f[i];
        return false;
    }
    friend Mono operator*(const Mono& a, const Mono& b) {
        Mono m;
        int i = 0, j = 0;
        while (i < a.n || j < b.n) {
            uint32_t fac;
            if (j >= b.n || (i < a.n && var_of(a.f[i]) < var_of(b.f[j]))) {
                fac = a.f[i++];
            } else if (i >= a.n || var_of(b.f[j]) < var_of(a.f[i])) {
                fac = b.f[j++];
            } else {
                int e = exp_of(a.f[i]) + exp_of(b.f[j]);
                if (e > 255) throw std::overflow_error("monomial exponent overflow");
                fac = (a.f[i] & ~0xffu) | static_cast<uint32_t>(e);
                ++i;
                ++j;
            }
            if (m.n == kCap) throw std::overflow_error("monomial has too many variables");
            m.f[m.n++] = fac;
        }
        return m;
    }
};

// Sparse multivariate polynomial over an exact scalar K (Rat or Fq).
template <class K>
class Poly {
public:
    struct Term {
        Mono m;
        K c;
    };

    Poly() = default;
    Poly(const K& c) {
        if (!c.is_zero()) t_.push_back({Mono{}, c});
    }
    static Poly variable(int v) {
        Poly p;
        p.t_.push_back({Mono::var(v), K(1)});
        return p;
    }
    static Poly monomial(const Mono& m, const K& c) {
        Poly p;
        if (!c.is_zero()) p.t_.push_back({m, c});
        return p;
    }
    // Builds from arbitrary terms (unsorted, possibly repeated).
    static Poly from_terms(std::vector<Term> terms) {
        Poly p;
        p.t_ = std::move(terms);
        p.canonicalize();
        return p;
    }

    const std::vector<Term>& terms() const { return t_; }
    std::size_t size() const { return t_.size(); }
    bool is_zero() const { return t_.empty(); }
    bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_[0].m.is_one()); }
    K constant_term() const {
        if (!t_.empty() && t_[0].m.is_one()) return t_[0].c;
        return K(0);
    }
    int degree() const {
        int d = 0;
        for (const auto& t : t_) d = std::max(d, t.m.degree());
        return d;
    }
    bool contains(int v) const {
        for (const auto& t : t_)
            if (t.m.exponent(v) > 0) return true;
        return false;
    }
    std::vector<int> variables() const {
        std::vector<int> vs;
        for (const auto& t : t_)
            for (int i = 0; i < t.m.n; ++i) vs.push_back(Mono::var_of(t.m.f[i]));
        std::sort(vs.begin(), vs.end());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
        return vs;
    }

    // Variables v for which the polynomial is c*v + (terms free of v) with c a nonzero constant.
    std::vector<std::pair<int, K>> linear_pivots() const {
        std::map<int, std::pair<int, bool>> seen;  // var -> (occurrences, pure linear seen)
        std::map<int, K> coef;
        for (const auto& t : t_) {
            for (int i = 0; i < t.m.n; ++i) {
                int v = Mono::var_of(t.m.f[i]);
                auto& s = seen[v];
                ++s.first;
                if (t.m.n == 1 && Mono::exp_of(t.m.f[0]) == 1) {
                    s.second = true;
                    coef[v] = t.c;
                }
            }
        }
        std::vector<std::pair<int, K>> out;
        for (const auto& [v, s] : seen)
            if (s.first == 1 && s.second) out.emplace_back(v, coef[v]);
        return out;
    }

    Poly operator-() const {
        Poly r = *this;
        for (auto& t : r.t_) t.c = -t.c;
        return r;
    }
    friend Poly operator+(const Poly& a, const Poly& b) { return merge(a, b, false); }
    friend Poly operator-(const Poly& a, const Poly& b) { return merge(a, b, true); }
    Poly& operator+=(const Poly& b) { return *this = merge(*this, b, false); }
    Poly& operator-=(const Poly& b) { return *this = merge(*this, b, true); }

    Poly scaled(const K& c) const {
        if (c.is_zero()) return Poly();
        Poly r = *this;
        for (auto& t : r.t_) t.c = t.c * c;
        return r;
    }
    Poly times_mono(const Mono& m, const K& c) const {
        if (c.is_zero()) return Poly();
        Poly r;
        r.t_.reserve(t_.size());
        for (const auto& t : t_) r.t_.push_back({t.m * m, t.c * c});
        std::sort(r.t_.begin(), r.t_.end(), [](const Term& x, const Term& y) { return x.m < y.m; });
        return r;
    }

    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        if (a.size() == 1) return b.times_mono(a.t_[0].m, a.t_[0].c);
        if (b.size() == 1) return a.times_mono(b.t_[0].m, b.t_[0].c);
        std::vector<Term> out;
        out.reserve(a.size() * b.size());
        for (const auto& x : a.t_)
            for (const auto& y : b.t_) out.push_back({x.m * y.m, x.c * y.c});
        return from_terms(std::move(out));
    }
    Poly& operator*=(const Poly& b) { return *this = *this * b; }
    friend Poly operator*(const Poly& a, const K& c) { return a.scaled(c); }
    friend Poly operator*(const K& c, const Poly& a) { return a.scaled(c); }

    // Replace variable v by the polynomial e.
    Poly substitute(int v, const Poly& e) const {
        std::vector<Term> keep;
        std::map<int, std::vector<Term>> groups;
        for (const auto& t : t_) {
            int ex = t.m.exponent(v);
            if (ex == 0)
                keep.push_back(t);
            else
                groups[ex].push_back({t.m.without(v), t.c});
        }
        if (groups.empty()) return *this;
        Poly r;
        r.t_ = std::move(keep);
        Poly power = e;
        int have = 1;
        for (auto& [ex, terms] : groups) {
            while (have < ex) {
                power = power * e;
                ++have;
            }
            r += from_terms(std::move(terms)) * power;
        }
        return r;
    }

    // Replace each listed variable by a value (all others untouched).
    Poly evaluate(const std::map<int, K>& values) const {
        std::vector<Term> out;
        out.reserve(t_.size());
        for (const auto& t : t_) {
            Mono m;
            K c = t.c;
            for (int i = 0; i < t.m.n; ++i) {
                int v = Mono::var_of(t.m.f[i]);
                auto it = values.find(v);
                if (it == values.end()) {
                    m.f[m.n++] = t.m.f[i];
                } else {
                    for (int k = 0; k < Mono::exp_of(t.m.f[i]); ++k) c = c * it->second;
                }
            }
            if (!c.is_zero()) out.push_back({m, c});
        }
        return from_terms(std::move(out));
    }

    template <class K2, class F>
    Poly<K2> map_coefficients(F&& f) const {
        std::vector<typename Poly<K2>::Term> out;
        out.reserve(t_.size());
        for (const auto& t : t_) {
            K2 c = f(t.c);
            if (!c.is_zero()) out.push_back({t.m, c});
        }
        return Poly<K2>::from_terms(std::move(out));
    }

    friend bool operator==(const Poly& a, const Poly& b) {
        if (a.t_.size() != b.t_.size()) return false;
        for (std::size_t i = 0; i < a.t_.size(); ++i)
            if (!(a.t_[i].m == b.t_[i].m) || a.t_[i].c != b.t_[i].c) return false;
        return true;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    std::string str(const std::function<std::string(int)>& name) const {
        if (t_.empty()) return "0";
        std::string s;
        for (std::size_t i = 0; i < t_.size(); ++i) {
            const auto& t = t_[i];
            std::string c = t.c.str();
            bool neg = !c.empty() && c[0] == '-';
            if (neg) c = c.substr(1);
            if (i == 0)
                s += neg ? "-" : "";
            else
                s += neg ? " - " : " + ";
            std::string mono;
            for (int k = 0; k < t.m.n; ++k) {
                if (!mono.empty()) mono += "*";
                mono += name(Mono::var_of(t.m.f[k]));
                if (Mono::exp_of(t.m.f[k]) > 1) mono += "^" + std::to_string(Mono::exp_of(t.m.f[k]));
            }
            if (mono.empty())
                s += c;
            else if (c == "1")
                s += mono;
            else
                s += c + "*" + mono;
        }
        return s;
    }

private:
    void canonicalize() {
        std::sort(t_.begin(), t_.end(), [](const Term& x, const Term& y) { return x.m < y.m; });
        std::size_t w = 0;
        for (std::size_t i = 0; i < t_.size();) {
            Term acc = t_[i];
            std::size_t j = i + 1;
            while (j < t_.size() && t_[j].m == acc.m) acc.c = acc.c + t_[j++].c;
            if (!acc.c.is_zero()) t_[w++] = acc;
            i = j;
        }
        t_.resize(w);
    }

    static Poly merge(const Poly& a, const Poly& b, bool subtract) {
        Poly r;
        r.t_.reserve(a.size() + b.size());
        std::size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            if (j >= b.size() || (i < a.size() && a.t_[i].m < b.t_[j].m)) {
                r.t_.push_back(a.t_[i++]);
            } else if (i >= a.size() || b.t_[j].m < a.t_[i].m) {
                r.t_.push_back({b.t_[j].m, subtract ? -b.t_[j].c : b.t_[j].c});
                ++j;
            } else {
                K c = subtract ? a.t_[i].c - b.t_[j].c : a.t_[i].c + b.t_[j].c;
                if (!c.is_zero()) r.t_.push_back({a.t_[i].m, c});
                ++i;
                ++j;
            }
        }
        return r;
    }

    std::vector<Term> t_;
};

}  // namespace jacfac
