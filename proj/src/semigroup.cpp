#include "jacfac/semigroup.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace jacfac {

std::string CableParams::link() const {
    std::ostringstream os;
    for (int i = static_cast<int>(a.size()) - 1; i >= 1; --i) os << "Cab(" << a[i] << "," << r[i] << ")";
    if (!a.empty()) os << "T(" << std::max(a[0], r[0]) << "," << std::min(a[0], r[0]) << ")";
    return os.str();
}

std::string Semigroup::id() const {
    std::string s;
    for (std::size_t i = 0; i < generators.size(); ++i) s += (i ? "-" : "") + std::to_string(generators[i]);
    return s;
}

nlohmann::json Semigroup::to_json(const CableParams* cable) const {
    nlohmann::json j;
    j["generators"] = generators;
    j["gaps"] = gaps;
    j["delta"] = delta;
    j["conductor"] = conductor;
    if (cable) {
        nlohmann::json c = nlohmann::json::array();
        for (std::size_t i = 0; i < cable->a.size(); ++i) c.push_back({cable->a[i], cable->r[i]});
        j["cable"] = c;
    }
    return j;
}

void validate(const NewtonPairs& p) {
    if (p.r.empty() || p.r.size() != p.s.size()) throw std::invalid_argument("Newton pairs: r and s must be nonempty and of equal length");
    for (std::size_t i = 0; i < p.r.size(); ++i) {
        if (p.r[i] <= 0 || p.s[i] <= 0) throw std::invalid_argument("Newton pairs: entries must be positive");
        if (std::gcd(p.r[i], p.s[i]) != 1) throw std::invalid_argument("Newton pairs: gcd(r_i, s_i) must be 1");
    }
}

CableParams newton_to_cable(const NewtonPairs& p) {
    validate(p);
    CableParams c;
    c.r = p.r;
    c.a.push_back(p.s[0]);
    for (std::size_t i = 1; i < p.r.size(); ++i) c.a.push_back(c.a[i - 1] * p.r[i - 1] * p.r[i] + p.s[i]);
    return c;
}

NewtonPairs exponents_to_newton(const std::vector<int>& ex) {
    if (ex.size() < 2) throw std::invalid_argument("exponents: need multiplicity and at least one characteristic exponent");
    int e = ex[0];
    if (e <= 0) throw std::invalid_argument("exponents: multiplicity must be positive");
    std::vector<int> eg{e};
    for (std::size_t i = 1; i < ex.size(); ++i) {
        if (ex[i] <= ex[i - 1] && i > 1) throw std::invalid_argument("exponents: beta must be strictly increasing");
        int g = std::gcd(eg.back(), ex[i]);
        if (g == eg.back()) throw std::invalid_argument("exponents: each beta must drop the gcd chain");
        eg.push_back(g);
    }
    if (eg.back() != 1) throw std::invalid_argument("exponents: gcd chain does not terminate at 1");
    NewtonPairs p;
    std::size_t l = ex.size() - 1;
    for (std::size_t i = 1; i <= l; ++i) p.r.push_back(eg[i - 1] / eg[i]);
    for (std::size_t i = 1; i <= l; ++i) {
        int tail = 1;
        for (std::size_t k = i + 1; k <= l; ++k) tail *= p.r[k - 1];
        int diff = ex[i] - (i == 1 ? 0 : ex[i - 1]);
        p.s.push_back(diff / tail);
    }
    validate(p);
    return p;
}

std::vector<int> newton_to_exponents(const NewtonPairs& p) {
    validate(p);
    int e = 1;
    for (int r : p.r) e *= r;
    std::vector<int> ex{e};
    int beta = 0;
    for (std::size_t i = 0; i < p.r.size(); ++i) {
        int tail = 1;
        for (std::size_t k = i + 1; k < p.r.size(); ++k) tail *= p.r[k];
        beta += p.s[i] * tail;
        ex.push_back(beta);
    }
    return ex;
}

NewtonPairs normalize_first_pair(const NewtonPairs& p, bool* swapped) {
    NewtonPairs q = p;
    bool sw = q.r[0] < q.s[0];
    if (sw) std::swap(q.r[0], q.s[0]);
    if (swapped) *swapped = sw;
    return q;
}

std::vector<int> semigroup_generators_from_exponents(const std::vector<int>& ex) {
    exponents_to_newton(ex);  // validates the chain
    std::vector<int> g{ex[0], ex[1]};
    int eprev = ex[0];
    for (std::size_t i = 1; i + 1 < ex.size(); ++i) {
        int ei = std::gcd(eprev, ex[i]);
        int n = eprev / ei;
        g.push_back(n * g.back() + ex[i + 1] - ex[i]);
        eprev = ei;
    }
    return g;
}

std::vector<int> exponents_from_semigroup_generators(const std::vector<int>& gens) {
    if (gens.size() < 2) throw std::invalid_argument("need at least two generators");
    std::vector<int> ex{gens[0], gens[1]};
    int eprev = gens[0];
    for (std::size_t i = 1; i + 1 < gens.size(); ++i) {
        int ei = std::gcd(eprev, gens[i]);
        int n = eprev / ei;
        if (gens[i + 1] <= n * gens[i]) throw std::invalid_argument("generators do not form a plane-curve semigroup");
        ex.push_back(gens[i + 1] - n * gens[i] + ex[i]);
        eprev = ei;
    }
    exponents_to_newton(ex);
    return ex;
}

Semigroup semigroup_generate(const std::vector<int>& input) {
    std::vector<int> gens;
    for (int g : input) {
        if (g <= 0) throw std::invalid_argument("semigroup generators must be positive");
        gens.push_back(g);
    }
    if (gens.empty()) throw std::invalid_argument("no generators");
    int g0 = 0;
    for (int g : gens) g0 = std::gcd(g0, g);
    if (g0 != 1) throw std::invalid_argument("generators have gcd > 1: no conductor");
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    int m = gens.front();
    std::vector<char> mem{1};
    int run = 1, n = 0;
    while (run < m) {
        ++n;
        char in = 0;
        for (int g : gens)
            if (n - g >= 0 && mem[n - g]) in = 1;
        mem.push_back(in);
        run = in ? run + 1 : 0;
    }
    int c = n - m + 1;  // first index of the final run of m members
    while (c > 0 && mem[c - 1]) --c;
    Semigroup s;
    s.conductor = c;
    s.members.assign(mem.begin(), mem.begin() + c + 1);
    for (int i = 0; i < c; ++i)
        if (!mem[i]) s.gaps.push_back(i);
    s.delta = static_cast<int>(s.gaps.size());
    // Minimal generators: members not a sum of two nonzero members.
    for (int g : gens) {
        bool redundant = false;
        for (int a = 1; a < g && !redundant; ++a)
            if (s.contains(a) && s.contains(g - a)) redundant = true;
        if (!redundant) s.generators.push_back(g);
    }
    return s;
}

int a_degree_bound(const NewtonPairs& p) {
    NewtonPairs q = normalize_first_pair(p);
    validate(q);
    int b = q.s[0];
    for (std::size_t i = 1; i < q.r.size(); ++i) b *= q.r[i];
    return b - 1;
}

}  // namespace jacfac
