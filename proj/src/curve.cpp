#include "jacfac/curve.hpp"

#include <cctype>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace jacfac {

std::set<long> small_prime_factors(const mpz_class& n, long limit) {
    std::set<long> out;
    mpz_class m = abs(n);
    for (long p = 2; p <= limit && m > 1; ++p) {
        if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            out.insert(p);
            while (mpz_divisible_ui_p(m.get_mpz_t(), p)) m /= p;
        }
    }
    return out;
}

namespace {

std::string poly_text(const std::vector<long long>& c) {
    std::string s;
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k] == 0) continue;
        long long a = c[k];
        if (!s.empty()) s += a < 0 ? "-" : "+";
        else if (a < 0) s += "-";
        long long b = a < 0 ? -a : a;
        if (k == 0) {
            s += std::to_string(b);
            continue;
        }
        if (b != 1) s += std::to_string(b) + "*";
        s += "z";
        if (k > 1) s += "^" + std::to_string(k);
    }
    return s.empty() ? "0" : s;
}

std::vector<long long> parse_poly(const std::string& src) {
    std::string t;
    for (char ch : src)
        if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    if (t.empty()) throw std::invalid_argument("empty polynomial in curve spec");
    std::vector<long long> c;
    std::size_t i = 0;
    while (i < t.size()) {
        int sign = 1;
        if (t[i] == '+' || t[i] == '-') {
            sign = t[i] == '-' ? -1 : 1;
            ++i;
        }
        long long coef = 1;
        bool have_num = false;
        if (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) {
            std::size_t j = i;
            while (j < t.size() && std::isdigit(static_cast<unsigned char>(t[j]))) ++j;
            coef = std::stoll(t.substr(i, j - i));
            have_num = true;
            i = j;
            if (i < t.size() && t[i] == '*') ++i;
        }
        int power = 0;
        if (i < t.size() && t[i] == 'z') {
            ++i;
            power = 1;
            if (i < t.size() && t[i] == '^') {
                ++i;
                std::size_t j = i;
                while (j < t.size() && std::isdigit(static_cast<unsigned char>(t[j]))) ++j;
                if (j == i) throw std::invalid_argument("malformed exponent in curve spec: " + src);
                power = std::stoi(t.substr(i, j - i));
                i = j;
            }
        } else if (!have_num) {
            throw std::invalid_argument("malformed term in curve spec: " + src);
        }
        if (i < t.size() && t[i] != '+' && t[i] != '-') throw std::invalid_argument("malformed curve spec: " + src);
        if (static_cast<int>(c.size()) <= power) c.resize(power + 1, 0);
        c[power] += sign * coef;
    }
    return c;
}

template <class K>
Series<K> to_series(const std::vector<long long>& c, int T, const std::function<K(long long)>& conv) {
    Series<K> s(T);
    for (std::size_t k = 0; k < c.size() && static_cast<int>(k) < T; ++k) s[k] = conv(c[k]);
    return s;
}

std::vector<char> semigroup_table(const std::vector<int>& gens, int T) {
    std::vector<char> mem(T, 0);
    mem[0] = 1;
    for (int n = 1; n < T; ++n)
        for (int g : gens)
            if (g <= n && mem[n - g]) {
                mem[n] = 1;
                break;
            }
    return mem;
}

void factorizations(const std::vector<int>& vals, int sigma, std::size_t idx, std::vector<int>& cur,
                    std::vector<std::vector<int>>& out) {
    if (idx == vals.size()) {
        if (sigma == 0) out.push_back(cur);
        return;
    }
    for (int k = 0; k * vals[idx] <= sigma; ++k) {
        cur[idx] = k;
        factorizations(vals, sigma - k * vals[idx], idx + 1, cur, out);
    }
    cur[idx] = 0;
}

template <class K>
struct Builder {
    int T;
    std::vector<BasisElement<K>> basis;
    std::set<long>* excluded;
    std::vector<std::vector<Series<K>>> powers;

    const Series<K>& power(std::size_t i, int k) {
        if (powers.size() < basis.size()) powers.resize(basis.size());
        auto& p = powers[i];
        if (p.empty()) {
            Series<K> one(T);
            one[0] = K(1);
            p.push_back(one);
        }
        while (static_cast<int>(p.size()) <= k) p.push_back(series_mul(p.back(), basis[i].series, T));
        return p[k];
    }

    Series<K> product(const std::vector<int>& ex) {
        Series<K> r(T);
        r[0] = K(1);
        for (std::size_t i = 0; i < ex.size(); ++i)
            if (ex[i] > 0) r = series_mul(r, power(i, ex[i]), T);
        return r;
    }

    void add(Series<K> s) {
        int v = valuation(s);
        K lc = s[v];
        if constexpr (std::is_same_v<K, Rat>) {
            if (excluded) {
                for (long p : small_prime_factors(lc.num())) excluded->insert(p);
                for (long p : small_prime_factors(lc.den())) excluded->insert(p);
            }
        }
        K inv = K(1) / lc;
        basis.push_back({v, series_scale(s, inv)});
        powers.clear();
    }

    std::vector<int> valuations() const {
        std::vector<int> v;
        for (const auto& b : basis) v.push_back(b.valuation);
        return v;
    }

    // Reduces s by products of basis elements while its valuation lies in the current semigroup.
    Series<K> subduct(Series<K> s, const std::vector<char>& mem) {
        auto vals = valuations();
        while (true) {
            int v = valuation(s);
            if (v < 0 || !mem[v]) return s;
            std::vector<std::vector<int>> f;
            std::vector<int> cur(vals.size(), 0);
            factorizations(vals, v, 0, cur, f);
            K lc = s[v];
            s = series_sub(s, series_scale(product(f.front()), lc));
        }
    }

    void run(bool reverse) {
        while (true) {
            auto vals = valuations();
            int g = 0;
            for (int v : vals) g = std::gcd(g, v);
            auto mem = semigroup_table(vals, T);
            int bound = T;
            if (g == 1) {
                int c = T;
                while (c > 0 && mem[c - 1]) --c;
                if (c < T) bound = c;
            }
            std::vector<int> sigmas;
            for (int s = 1; s < bound; ++s) sigmas.push_back(s);
            if (reverse) std::reverse(sigmas.begin(), sigmas.end());
            bool added = false;
            for (int sigma : sigmas) {
                std::vector<std::vector<int>> f;
                std::vector<int> cur(vals.size(), 0);
                factorizations(vals, sigma, 0, cur, f);
                if (f.size() < 2) continue;
                if (reverse) std::reverse(f.begin(), f.end());
                Series<K> base = product(f.front());
                for (std::size_t k = 1; k < f.size() && !added; ++k) {
                    Series<K> r = subduct(series_sub(base, product(f[k])), mem);
                    if (valuation(r) >= 0) {
                        add(r);
                        added = true;
                    }
                }
                if (added) break;
            }
            if (!added) break;
        }
        std::sort(basis.begin(), basis.end(), [](const auto& a, const auto& b) { return a.valuation < b.valuation; });
    }
};

template <class K>
CurveRing<K> build_ring(const CurveSpec& spec, int T, bool reverse, const std::function<K(long long)>& conv,
                        bool record_primes) {
    CurveRing<K> ring;
    ring.truncation = T;
    ring.x = to_series<K>(spec.x, T, conv);
    ring.y = to_series<K>(spec.y, T, conv);
    if (valuation(ring.x) <= 0 || valuation(ring.y) <= 0)
        throw std::invalid_argument("curve components must vanish at z=0 and be nonzero");
    Builder<K> b{T, {}, record_primes ? &ring.excluded_primes : nullptr, {}};
    if (valuation(ring.x) > valuation(ring.y)) throw std::invalid_argument("curve spec must have v(x) <= v(y)");
    b.add(ring.x);
    b.add(ring.y);
    b.run(reverse);
    ring.basis = b.basis;
    std::vector<int> vals = b.valuations();
    int g = 0;
    for (int v : vals) g = std::gcd(g, v);
    if (g != 1) throw std::runtime_error("truncation too small or curve not unibranch: valuations stay non-coprime below T");
    ring.semigroup = semigroup_generate(vals);
    if (ring.semigroup.conductor * 2 > T)
        throw std::runtime_error("truncation too small for this curve (T=" + std::to_string(T) + ")");
    // Keep only elements whose valuations are minimal generators.
    std::vector<BasisElement<K>> minimal;
    for (const auto& e : ring.basis)
        for (int gen : ring.semigroup.generators)
            if (gen == e.valuation) {
                minimal.push_back(e);
                break;
            }
    ring.basis = minimal;
    return ring;
}

}  // namespace

std::string CurveSpec::text() const { return "x=" + poly_text(x) + ", y=" + poly_text(y); }

std::string CurveSpec::hash() const {
    unsigned long long h = 1469598103934665603ULL;
    for (char ch : text()) {
        h ^= static_cast<unsigned char>(ch);
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", h);
    return buf;
}

CurveSpec parse_curve(const std::string& text) {
    CurveSpec spec;
    bool have_x = false, have_y = false;
    std::size_t start = 0;
    std::vector<std::string> parts;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        parts.push_back(text.substr(start, comma - start));
        start = comma + 1;
    }
    for (auto& part : parts) {
        std::size_t eq = part.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("curve spec must read 'x=<poly>, y=<poly>'");
        std::string lhs;
        for (char ch : part.substr(0, eq))
            if (!std::isspace(static_cast<unsigned char>(ch))) lhs += ch;
        auto poly = parse_poly(part.substr(eq + 1));
        if (lhs == "x") {
            spec.x = poly;
            have_x = true;
        } else if (lhs == "y") {
            spec.y = poly;
            have_y = true;
        } else {
            throw std::invalid_argument("unknown variable in curve spec: " + lhs);
        }
    }
    if (!have_x || !have_y) throw std::invalid_argument("curve spec must define both x and y");
    return spec;
}

CurveSpec curve_from_exponents(const std::vector<int>& ex) {
    exponents_to_newton(ex);
    CurveSpec spec;
    spec.x.assign(ex[0] + 1, 0);
    spec.x[ex[0]] = 1;
    spec.y.assign(ex.back() + 1, 0);
    for (std::size_t i = 1; i < ex.size(); ++i) spec.y[ex[i]] = 1;
    return spec;
}

CurveSpec canonical_curve(const std::vector<int>& gens) {
    std::vector<int> g = gens;
    std::sort(g.begin(), g.end());
    return curve_from_exponents(exponents_from_semigroup_generators(g));
}

CurveRing<Rat> valuation_basis(const CurveSpec& spec, int truncation, bool reverse_order) {
    auto conv = [](long long v) { return Rat(v); };
    if (truncation > 0) return build_ring<Rat>(spec, truncation, reverse_order, conv, true);
    int T = 64;
    while (true) {
        try {
            auto ring = build_ring<Rat>(spec, T, reverse_order, conv, true);
            int want = 3 * ring.semigroup.conductor;
            if (want <= T) {
                if (want < T && want > 0) return build_ring<Rat>(spec, std::max(want, 8), reverse_order, conv, true);
                return ring;
            }
            T = want;
        } catch (const std::runtime_error&) {
            if (T >= 4096) throw;
            T *= 2;
        }
    }
}

CurveRing<Fq> valuation_basis_mod(const CurveSpec& spec, const FiniteField& f, int truncation) {
    FieldScope scope(f);
    auto conv = [](long long v) { return Fq(v); };
    return build_ring<Fq>(spec, truncation, false, conv, false);
}

bool good_reduction(const CurveSpec& spec, const CurveRing<Rat>& ring, int p, int ell) {
    FiniteField f(p, ell);
    try {
        auto r = valuation_basis_mod(spec, f, ring.truncation);
        return r.semigroup.generators == ring.semigroup.generators;
    } catch (const std::exception&) {
        return false;
    }
}

std::vector<int> phi_decomposition(const Semigroup& sg, int gamma) {
    if (!sg.contains(gamma)) throw std::invalid_argument("phi_element: " + std::to_string(gamma) + " is not in the semigroup");
    std::vector<int> out;
    int rem = gamma;
    std::vector<int> gens = sg.generators;
    std::sort(gens.rbegin(), gens.rend());
    while (rem > 0) {
        bool step = false;
        for (int g : gens)
            if (g <= rem && sg.contains(rem - g)) {
                out.push_back(g);
                rem -= g;
                step = true;
                break;
            }
        if (!step) throw std::logic_error("phi decomposition failed");
    }
    return out;
}

Series<Rat> phi_element(const CurveRing<Rat>& ring, int gamma) {
    int T = ring.truncation;
    Series<Rat> r(T);
    r[0] = Rat(1);
    for (int g : phi_decomposition(ring.semigroup, gamma)) {
        for (const auto& b : ring.basis)
            if (b.valuation == g) {
                r = series_mul(r, b.series, T);
                break;
            }
    }
    return r;
}

}  // namespace jacfac
