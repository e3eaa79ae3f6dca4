#include "jacfac/superpoly.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace jacfac {

Superpoly Superpoly::one() { return monomial(0, 0, 0); }

Superpoly Superpoly::monomial(int q, int t, int a, const mpz_class& coef) {
    Superpoly p;
    p.add({a, t, q}, coef);
    return p;
}

void Superpoly::add(const Exp& e, const mpz_class& c) {
    if (c == 0) return;
    auto it = terms.find(e);
    if (it == terms.end()) {
        terms.emplace(e, c);
        return;
    }
    it->second += c;
    if (it->second == 0) terms.erase(it);
}

Superpoly& Superpoly::operator+=(const Superpoly& o) {
    for (const auto& [e, c] : o.terms) add(e, c);
    return *this;
}

Superpoly& Superpoly::operator-=(const Superpoly& o) {
    for (const auto& [e, c] : o.terms) add(e, -c);
    return *this;
}

Superpoly operator*(const Superpoly& x, const Superpoly& y) {
    Superpoly r;
    r.names = x.names;
    for (const auto& [ex, cx] : x.terms)
        for (const auto& [ey, cy] : y.terms) r.add({ex[0] + ey[0], ex[1] + ey[1], ex[2] + ey[2]}, cx * cy);
    return r;
}

int Superpoly::degree_a() const {
    int d = -1;
    for (const auto& [e, c] : terms) d = std::max(d, e[0]);
    return d;
}

mpz_class Superpoly::coeff(int q, int t, int a) const {
    auto it = terms.find({a, t, q});
    return it == terms.end() ? mpz_class(0) : it->second;
}

mpz_class Superpoly::coefficient_sum() const {
    mpz_class s = 0;
    for (const auto& [e, c] : terms) s += c;
    return s;
}

bool Superpoly::nonnegative() const {
    return std::all_of(terms.begin(), terms.end(), [](const auto& kv) { return kv.second > 0; });
}

std::string Superpoly::str() const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms) {
        mpz_class mag = abs(c);
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        std::vector<std::string> factors;
        // print order a, q, t matches the usual way of writing a*q^i*t^j
        const int order[3] = {0, 2, 1};
        for (int v : order) {
            if (e[v] == 0) continue;
            factors.push_back(e[v] == 1 ? names[v] : names[v] + "^" + std::to_string(e[v]));
        }
        if (factors.empty()) {
            os << mag.get_str();
            continue;
        }
        if (mag != 1) os << mag.get_str() << "*";
        for (size_t i = 0; i < factors.size(); ++i) os << (i ? "*" : "") << factors[i];
    }
    return os.str();
}

Superpoly Superpoly::at_t1() const {
    Superpoly r;
    r.names = names;
    for (const auto& [e, c] : terms) r.add({e[0], 0, e[2]}, c);
    return r;
}

Superpoly Superpoly::at_q1() const {
    Superpoly r;
    r.names = names;
    for (const auto& [e, c] : terms) r.add({e[0], e[1], 0}, c);
    return r;
}

Superpoly Superpoly::a_part(int k) const {
    Superpoly r;
    r.names = names;
    for (const auto& [e, c] : terms)
        if (e[0] == k) r.add(e, c);
    return r;
}

namespace {

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    Superpoly parse() {
        Superpoly r = expr();
        skip();
        if (i_ != s_.size()) fail("unexpected character");
        return r;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("polynomial parse error at offset " + std::to_string(i_) + ": " + what);
    }

    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }

    char peek() {
        skip();
        return i_ < s_.size() ? s_[i_] : '\0';
    }

    Superpoly expr() {
        Superpoly r;
        bool neg = false;
        char c = peek();
        if (c == '+' || c == '-') {
            neg = c == '-';
            ++i_;
        }
        for (;;) {
            Superpoly t = term();
            if (neg) r -= t;
            else r += t;
            c = peek();
            if (c != '+' && c != '-') break;
            neg = c == '-';
            ++i_;
        }
        return r;
    }

    static bool starts_factor(char c) {
        return std::isdigit(static_cast<unsigned char>(c)) || c == '(' || c == 'q' || c == 't' || c == 'a';
    }

    Superpoly term() {
        Superpoly r = factor();
        for (;;) {
            char c = peek();
            if (c == '*') {
                ++i_;
                r = r * factor();
            } else if (starts_factor(c)) {
                r = r * factor();
            } else {
                break;
            }
        }
        return r;
    }

    int exponent() {
        char c = peek();
        bool brace = c == '{';
        if (brace) ++i_;
        skip();
        size_t start = i_;
        if (i_ < s_.size() && s_[i_] == '-') ++i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (start == i_) fail("expected exponent");
        int v = std::stoi(s_.substr(start, i_ - start));
        if (brace) {
            if (peek() != '}') fail("expected }");
            ++i_;
        }
        return v;
    }

    Superpoly power(const Superpoly& base, int n) {
        if (n < 0) {
            if (base.terms.size() != 1 || base.terms.begin()->second != 1) fail("negative power of a non-monomial");
            const auto& e = base.terms.begin()->first;
            Superpoly r;
            r.add({e[0] * n, e[1] * n, e[2] * n}, 1);
            return r;
        }
        Superpoly r = Superpoly::one();
        for (int k = 0; k < n; ++k) r = r * base;
        return r;
    }

    Superpoly factor() {
        char c = peek();
        Superpoly base;
        if (c == '(') {
            ++i_;
            base = expr();
            if (peek() != ')') fail("expected )");
            ++i_;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            base.add({0, 0, 0}, mpz_class(s_.substr(start, i_ - start)));
        } else if (c == 'q' || c == 't' || c == 'a') {
            ++i_;
            base = c == 'q' ? Superpoly::monomial(1, 0, 0) : c == 't' ? Superpoly::monomial(0, 1, 0) : Superpoly::monomial(0, 0, 1);
        } else {
            fail("expected factor");
        }
        if (peek() == '^') {
            ++i_;
            base = power(base, exponent());
        }
        return base;
    }

    const std::string& s_;
    size_t i_ = 0;
};

}  // namespace

Superpoly parse_superpoly(const std::string& text) { return Parser(text).parse(); }

Superpoly apply_slice(const Superpoly& h, const std::string& slice) {
    if (slice == "full") return h;
    if (slice == "t1") return h.at_t1();
    if (slice == "betti") return betti(h);
    if (slice.size() >= 2 && slice[0] == 'a' && std::isdigit(static_cast<unsigned char>(slice[1]))) {
        size_t pos = 1;
        while (pos < slice.size() && std::isdigit(static_cast<unsigned char>(slice[pos]))) ++pos;
        int k = std::stoi(slice.substr(1, pos - 1));
        std::string rest = slice.substr(pos);
        if (rest.empty()) return h.a_part(k);
        if (rest == "_t1") return h.a_part(k).at_t1();
    }
    throw std::invalid_argument("unknown slice " + slice);
}

Superpoly assemble(const std::vector<FlagCount>& flags, int delta) {
    Superpoly h;
    for (const auto& f : flags) {
        if (!f.count) continue;
        for (int k = 0; k <= f.count->degree(); ++k) {
            const mpz_class& c = f.count->c[k];
            if (c != 0) h.add({f.m, delta - k, f.d0_size + f.m}, c);
        }
    }
    return h;
}

Superpoly betti(const Superpoly& h) { return h.a_part(0).at_q1(); }

Superpoly to_standard_params(const Superpoly& h) {
    Superpoly r;
    r.names = {"a_st", "t_st", "q_st"};
    for (const auto& [e, c] : h.terms) {
        int a = e[0], t = e[1], q = e[2];
        r.add({2 * a, 2 * q + a, 2 * q + 2 * t}, c);
    }
    return r;
}

std::optional<std::pair<int, int>> superduality_check(const Superpoly& h) {
    if (h.is_zero()) return std::pair<int, int>{0, 0};
    int qmin = INT_MAX, qmax = INT_MIN, tmin = INT_MAX, tmax = INT_MIN;
    for (const auto& [e, c] : h.terms) {
        qmin = std::min(qmin, e[2]);
        qmax = std::max(qmax, e[2]);
        tmin = std::min(tmin, e[1]);
        tmax = std::max(tmax, e[1]);
    }
    int alpha = qmax + tmin, beta = tmax + qmin;
    for (const auto& [e, c] : h.terms) {
        if (h.coeff(alpha - e[1], beta - e[2], e[0]) != c) return std::nullopt;
    }
    return std::pair<int, int>{alpha, beta};
}

std::vector<DiffEntry> compare_polys(const Superpoly& computed, const Superpoly& expected) {
    std::vector<DiffEntry> out;
    Superpoly d = computed;
    d -= expected;
    for (const auto& [e, c] : d.terms) {
        auto ic = computed.terms.find(e);
        auto ie = expected.terms.find(e);
        out.push_back({e, ic == computed.terms.end() ? mpz_class(0) : ic->second,
                       ie == expected.terms.end() ? mpz_class(0) : ie->second});
    }
    return out;
}

std::string format_diff(const std::vector<DiffEntry>& diff, const std::array<std::string, 3>& names) {
    std::ostringstream os;
    for (const auto& d : diff) {
        os << names[0] << "^" << d.exp[0] << " " << names[2] << "^" << d.exp[2] << " " << names[1] << "^" << d.exp[1]
           << ": computed " << d.computed.get_str() << ", expected " << d.expected.get_str() << "\n";
    }
    return os.str();
}

std::string fixtures_dir(const std::string& override_dir) {
    if (!override_dir.empty()) return override_dir;
    if (const char* env = std::getenv("JACFAC_FIXTURES")) return env;
#ifdef JACFAC_DEFAULT_FIXTURES
    return JACFAC_DEFAULT_FIXTURES;
#else
    return "fixtures";
#endif
}

std::string fixture_path(const std::string& dir, const std::string& gamma_id, const std::string& slice) {
    return (std::filesystem::path(dir) / gamma_id / (slice + ".poly")).string();
}

Superpoly load_fixture(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open fixture " + path);
    std::string line, body;
    while (std::getline(in, line)) {
        auto p = line.find_first_not_of(" \t");
        if (p == std::string::npos || line[p] == '#') continue;
        body += line + " ";
    }
    return parse_superpoly(body);
}

std::vector<std::string> list_fixture_slices(const std::string& dir, const std::string& gamma_id) {
    std::vector<std::string> out;
    std::filesystem::path d = std::filesystem::path(dir) / gamma_id;
    if (!std::filesystem::is_directory(d)) return out;
    for (const auto& ent : std::filesystem::directory_iterator(d))
        if (ent.path().extension() == ".poly") out.push_back(ent.path().stem().string());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace jacfac
