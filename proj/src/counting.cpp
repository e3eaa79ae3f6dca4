#include "jacfac/counting.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace jacfac {

CountPoly CountPoly::monomial(int deg, const mpz_class& coef) {
    CountPoly p;
    if (coef == 0) return p;
    p.c.assign(deg + 1, 0);
    p.c[deg] = coef;
    return p;
}

bool CountPoly::is_monomial() const {
    int n = 0;
    for (const auto& v : c) n += v != 0;
    return n == 1;
}

mpz_class CountPoly::eval(long q) const {
    mpz_class r = 0;
    for (int i = degree(); i >= 0; --i) r = r * q + c[i];
    return r;
}

void CountPoly::trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

std::string CountPoly::str() const {
    if (c.empty()) return "0";
    std::string s;
    for (int i = degree(); i >= 0; --i) {
        if (c[i] == 0) continue;
        mpz_class a = abs(c[i]);
        if (!s.empty()) s += c[i] < 0 ? " - " : " + ";
        else if (c[i] < 0) s += "-";
        std::string mono = i == 0 ? "" : (i == 1 ? "q" : "q^" + std::to_string(i));
        if (mono.empty())
            s += a.get_str();
        else if (a == 1)
            s += mono;
        else
            s += a.get_str() + "*" + mono;
    }
    return s;
}

const std::vector<int>& field_size_schedule() {
    static const std::vector<int> s = {2,  3,  4,  5,  7,  8,  9,  11, 13, 16, 17, 19,
                                       23, 25, 27, 29, 31, 32, 37, 41, 43, 47, 49, 53};
    return s;
}

std::vector<int> good_field_sizes(const CurveSpec& spec, const CurveRing<Rat>& ring) {
    std::vector<int> out;
    std::map<int, bool> good;
    for (int q : field_size_schedule()) {
        auto [p, ell] = *prime_power(q);
        if (ring.excluded_primes.count(p)) continue;
        auto key = q;
        if (!good.count(key)) good[key] = good_reduction(spec, ring, p, ell);
        if (good[key]) out.push_back(q);
    }
    return out;
}

namespace {

mpz_class qpow(long q, int n) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(n));
    return r;
}

mpz_class count_rec(std::vector<Poly<Fq>> eqs, std::vector<int> vars, int q) {
    while (true) {
        eqs.erase(std::remove_if(eqs.begin(), eqs.end(), [](const Poly<Fq>& p) { return p.is_zero(); }), eqs.end());
        for (const auto& e : eqs)
            if (e.is_constant()) return 0;
        if (eqs.empty()) return qpow(q, static_cast<int>(vars.size()));
        bool solved = false;
        for (std::size_t i = 0; i < eqs.size() && !solved; ++i) {
            auto piv = eqs[i].linear_pivots();
            if (piv.empty()) continue;
            auto [v, coef] = piv.front();
            Poly<Fq> e = eqs[i];
            eqs.erase(eqs.begin() + i);
            Poly<Fq> expr = (e - Poly<Fq>::variable(v).scaled(coef)).scaled(-(Fq(1) / coef));
            for (auto& o : eqs)
                if (o.contains(v)) o = o.substitute(v, expr);
            vars.erase(std::find(vars.begin(), vars.end(), v));
            solved = true;
        }
        if (!solved) break;
    }
    // Independent groups of equations are counted separately.
    std::map<int, int> parent;
    std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
    for (const auto& e : eqs) {
        auto vs = e.variables();
        for (int v : vs)
            if (!parent.count(v)) parent[v] = v;
        for (std::size_t i = 1; i < vs.size(); ++i) parent[find(vs[i])] = find(vs[0]);
    }
    std::map<int, std::vector<Poly<Fq>>> groups;
    for (auto& e : eqs) groups[find(e.variables().front())].push_back(e);
    if (groups.size() > 1) {
        mpz_class total = qpow(q, static_cast<int>(vars.size() - parent.size()));
        for (auto& [root, g] : groups) {
            std::vector<int> gv;
            for (const auto& [v, pv] : parent)
                if (find(v) == root) gv.push_back(v);
            total *= count_rec(std::move(g), gv, q);
            if (total == 0) break;
        }
        return total;
    }
    // A variable x occurring only in E = A x + B: N = N(S) - N(S, A) + q N(S, A, B) with S the other equations.
    {
        std::map<int, int> occurs;
        for (const auto& e : eqs)
            for (int v : e.variables()) ++occurs[v];
        int best_eq = -1, best_var = -1;
        std::size_t best_size = 0;
        for (std::size_t i = 0; i < eqs.size(); ++i) {
            std::map<int, bool> linear;
            for (const auto& t : eqs[i].terms())
                for (int k = 0; k < t.m.n; ++k) {
                    int v = Mono::var_of(t.m.f[k]);
                    bool lin = Mono::exp_of(t.m.f[k]) == 1;
                    auto it = linear.find(v);
                    linear[v] = it == linear.end() ? lin : it->second && lin;
                }
            for (const auto& [v, lin] : linear) {
                if (!lin || occurs[v] != 1) continue;
                std::size_t size = 0;
                for (const auto& t : eqs[i].terms()) size += t.m.exponent(v) == 1;
                if (best_var < 0 || size < best_size) best_eq = static_cast<int>(i), best_var = v, best_size = size;
            }
        }
        if (best_var >= 0) {
            std::vector<typename Poly<Fq>::Term> at, bt;
            for (const auto& t : eqs[best_eq].terms()) {
                if (t.m.exponent(best_var) == 1) at.push_back({t.m.without(best_var), t.c});
                else bt.push_back(t);
            }
            Poly<Fq> A = Poly<Fq>::from_terms(std::move(at)), B = Poly<Fq>::from_terms(std::move(bt));
            std::vector<Poly<Fq>> rest_eqs;
            for (std::size_t i = 0; i < eqs.size(); ++i)
                if (static_cast<int>(i) != best_eq) rest_eqs.push_back(eqs[i]);
            std::vector<int> rest_vars = vars;
            rest_vars.erase(std::find(rest_vars.begin(), rest_vars.end(), best_var));
            mpz_class total = count_rec(rest_eqs, rest_vars, q);
            rest_eqs.push_back(A);
            mpz_class on_a = count_rec(rest_eqs, rest_vars, q);
            total -= on_a;
            if (on_a != 0) {
                rest_eqs.push_back(B);
                total += q * count_rec(std::move(rest_eqs), rest_vars, q);
            }
            return total;
        }
    }
    // Branch on the variable that turns the most linear coefficients into constants, then on occurrences.
    std::map<int, std::pair<int, int>> score;
    for (const auto& e : eqs) {
        std::map<int, std::set<int>> coef_vars;
        std::set<int> nonlinear;
        for (const auto& t : e.terms())
            for (int i = 0; i < t.m.n; ++i) {
                int w = Mono::var_of(t.m.f[i]);
                if (Mono::exp_of(t.m.f[i]) > 1) nonlinear.insert(w);
                auto& cv = coef_vars[w];
                for (int j = 0; j < t.m.n; ++j)
                    if (j != i) cv.insert(Mono::var_of(t.m.f[j]));
            }
        for (const auto& [w, cv] : coef_vars) {
            ++score[w].second;
            if (!nonlinear.count(w) && cv.size() == 1) ++score[*cv.begin()].first;
        }
    }
    int branch = std::max_element(score.begin(), score.end(), [](const auto& a, const auto& b) {
                     return a.second < b.second;
                 })->first;
    std::vector<int> rest = vars;
    rest.erase(std::find(rest.begin(), rest.end(), branch));
    mpz_class total = 0;
    for (int val = 0; val < q; ++val) {
        std::map<int, Fq> at{{branch, Fq(static_cast<uint32_t>(val))}};
        std::vector<Poly<Fq>> next;
        next.reserve(eqs.size());
        for (const auto& e : eqs) next.push_back(e.evaluate(at));
        total += count_rec(std::move(next), rest, q);
    }
    return total;
}

// Solves the Vandermonde system for the polynomial through the points (exact rationals).
std::vector<mpq_class> interpolate(const std::vector<long>& xs, const std::vector<mpz_class>& ys) {
    std::size_t n = xs.size();
    std::vector<std::vector<mpq_class>> A(n, std::vector<mpq_class>(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        mpq_class p = 1;
        for (std::size_t j = 0; j < n; ++j) {
            A[i][j] = p;
            p *= xs[i];
        }
        A[i][n] = ys[i];
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t r = col;
        while (A[r][col] == 0) ++r;
        std::swap(A[r], A[col]);
        for (std::size_t k = 0; k < n; ++k) {
            if (k == col || A[k][col] == 0) continue;
            mpq_class f = A[k][col] / A[col][col];
            for (std::size_t j = col; j <= n; ++j) A[k][j] -= f * A[col][j];
        }
    }
    std::vector<mpq_class> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = A[i][n] / A[i][i];
    return out;
}

}  // namespace

mpz_class residual_count(const CellAnalysis& a, const FiniteField& f) {
    if (a.status == CellStatus::empty) return 0;
    if (a.status == CellStatus::affine) return 1;
    if (a.excluded_primes.count(f.p())) throw std::invalid_argument("bad field " + f.name() + " for this cell");
    FieldScope scope(f);
    std::vector<Poly<Fq>> eqs;
    for (const auto& p : a.residual)
        eqs.push_back(p.map_coefficients<Fq>([&](const Rat& c) {
            auto v = f.from_rat(c);
            if (!v) throw std::invalid_argument("bad field " + f.name() + ": coefficient does not reduce");
            return Fq(*v);
        }));
    return count_rec(std::move(eqs), a.residual_vars, f.size());
}

mpz_class cell_count(const CellAnalysis& a, const FiniteField& f) {
    if (a.status == CellStatus::empty) return 0;
    int free = a.dim - static_cast<int>(a.residual_vars.size());
    return qpow(f.size(), free) * residual_count(a, f);
}

CountPoly cell_count_poly(const CellAnalysis& a, const std::vector<int>& sizes) {
    if (a.status == CellStatus::empty) return {};
    if (a.status == CellStatus::affine) return CountPoly::monomial(a.dim);
    int r = static_cast<int>(a.residual_vars.size());
    std::vector<long> xs;
    std::vector<mpz_class> ys;
    for (int q : sizes) {
        auto [p, ell] = *prime_power(q);
        if (a.excluded_primes.count(p)) continue;
        FiniteField f(p, ell);
        xs.push_back(q);
        ys.push_back(residual_count(a, f));
        if (static_cast<int>(xs.size()) == r + 3) break;
    }
    if (static_cast<int>(xs.size()) < r + 3)
    {
        std::string primes;
        for (long p : a.excluded_primes) primes += (primes.empty() ? "" : ",") + std::to_string(p);
        throw std::runtime_error("not enough good field sizes to interpolate a cell count: " + std::to_string(r) +
                                 " residual variables, " + std::to_string(xs.size()) + " usable sizes, excluded primes {" +
                                 primes + "} for D=" + format_dset(a.d0) + " gaps=" + format_dset(a.gaps));
    }
    std::vector<long> fit_x(xs.begin(), xs.end() - 1);
    std::vector<mpz_class> fit_y(ys.begin(), ys.end() - 1);
    auto coef = interpolate(fit_x, fit_y);
    CountPoly res;
    for (const auto& c : coef) {
        if (c.get_den() != 1) {
            std::string pts;
            for (std::size_t i = 0; i < xs.size(); ++i) pts += " (" + std::to_string(xs[i]) + "," + ys[i].get_str() + ")";
            throw std::runtime_error("interpolation inconsistency: non-integral count polynomial; points" + pts);
        }
        res.c.push_back(c.get_num());
    }
    res.trim();
    if (res.eval(xs.back()) != ys.back()) {
        std::string pts;
        for (std::size_t i = 0; i < xs.size(); ++i) pts += " (" + std::to_string(xs[i]) + "," + ys[i].get_str() + ")";
        throw std::runtime_error("interpolation inconsistency: witness point disagrees; points" + pts);
    }
    if (res.degree() > r) throw std::runtime_error("interpolation inconsistency: degree exceeds residual variables");
    int free = a.dim - r;
    CountPoly out;
    if (res.is_zero()) return out;
    out.c.assign(free, 0);
    out.c.insert(out.c.end(), res.c.begin(), res.c.end());
    return out;
}

namespace {

using Vec = std::vector<uint8_t>;

struct Arith {
    const FiniteField& f;
    uint8_t add(uint8_t a, uint8_t b) const { return static_cast<uint8_t>(f.add(a, b)); }
    uint8_t sub(uint8_t a, uint8_t b) const { return static_cast<uint8_t>(f.sub(a, b)); }
    uint8_t mul(uint8_t a, uint8_t b) const { return static_cast<uint8_t>(f.mul(a, b)); }
    uint8_t inv(uint8_t a) const { return static_cast<uint8_t>(f.inv(a)); }

    Vec times(const Vec& a, const Vec& b) const {
        int c = static_cast<int>(a.size());
        Vec r(c, 0);
        for (int i = 0; i < c; ++i) {
            if (!a[i]) continue;
            for (int j = 0; i + j < c; ++j)
                if (b[j]) r[i + j] = add(r[i + j], mul(a[i], b[j]));
        }
        return r;
    }
};

// Row echelon form keyed by pivot position; rows are normalized to leading coefficient 1.
struct Echelon {
    const Arith* ar;
    std::vector<Vec> rows;  // rows[p] empty unless p is a pivot
    int rank = 0;

    Echelon(const Arith& a, int c) : ar(&a), rows(c) {}

    // Returns the new pivot position, or -1 if v was already in the span.
    int insert(Vec v) {
        int c = static_cast<int>(v.size());
        for (int i = 0; i < c; ++i) {
            if (!v[i]) continue;
            if (rows[i].empty()) {
                uint8_t inv = ar->inv(v[i]);
                for (int k = i; k < c; ++k) v[k] = ar->mul(v[k], inv);
                rows[i] = std::move(v);
                ++rank;
                return i;
            }
            uint8_t f = v[i];
            const Vec& r = rows[i];
            for (int k = i; k < c; ++k)
                if (r[k]) v[k] = ar->sub(v[k], ar->mul(f, r[k]));
        }
        return -1;
    }
};

}  // namespace

OracleReport brute_force_flags(const CurveSpec& spec, int q, int m_max, long budget) {
    auto pp = prime_power(q);
    if (!pp) throw std::invalid_argument("field size must be a prime power");
    auto ring = valuation_basis(spec);
    const Semigroup& sg = ring.semigroup;
    int c = sg.conductor;
    FiniteField F(pp->first, pp->second);
    FieldScope scope(F);
    auto rq = valuation_basis_mod(spec, F, ring.truncation);
    if (rq.semigroup.generators != sg.generators) throw std::invalid_argument("bad reduction at " + F.name());
    Arith ar{F};
    auto to_vec = [&](const Series<Fq>& s) {
        Vec v(c, 0);
        for (int i = 0; i < c && i < static_cast<int>(s.size()); ++i) v[i] = static_cast<uint8_t>(s[i].value());
        return v;
    };
    Vec x = to_vec(rq.x), y = to_vec(rq.y);
    // Monomials x^a y^b of valuation below c span R modulo z^c.
    std::vector<Vec> mons;
    {
        Vec one(c, 0);
        one[0] = 1;
        Vec xa = one;
        for (int a = 0; a * sg.multiplicity() < c; ++a) {
            Vec m = xa;
            while (true) {
                int v = -1;
                for (int i = 0; i < c; ++i)
                    if (m[i]) {
                        v = i;
                        break;
                    }
                if (v < 0) break;
                mons.push_back(m);
                m = ar.times(m, y);
            }
            xa = ar.times(xa, x);
        }
    }

    auto modules = enumerate_standard_modules(sg);
    OracleReport rep;
    rep.q = q;
    for (const auto& md : modules) {
        Frame f = build_frame(sg, md);
        double w = 1;
        for (std::size_t i = 0; i < f.vars.size(); ++i) w *= q;
        rep.work += static_cast<long>(w);
        if (rep.work > budget) throw std::runtime_error("brute force budget exceeded");
    }

    struct Mod {
        Echelon ech;
        DSet d;
    };
    std::vector<std::vector<Mod>> valid(modules.size());

    auto pivots_match = [&](const Echelon& e, const std::vector<char>& delta) {
        for (int i = 0; i < c; ++i)
            if ((!e.rows[i].empty()) != (delta[i] != 0)) return false;
        return true;
    };
    // Adds R*g to the echelon form; fails fast on a pivot outside delta.
    auto add_generator = [&](Echelon& e, const Vec& g, const std::vector<char>& delta) {
        for (const auto& m : mons) {
            int p = e.insert(ar.times(m, g));
            if (p >= 0 && !delta[p]) return false;
        }
        return true;
    };

    for (std::size_t mi = 0; mi < modules.size(); ++mi) {
        const auto& md = modules[mi];
        Frame f = build_frame(sg, md);
        int n = static_cast<int>(f.vars.size());
        std::vector<int> assign(n, 0);
        long count = 0;
        while (true) {
            Echelon e(ar, c);
            bool ok = true;
            for (int j = 0; j < f.e && ok; ++j) {
                if (f.apery[j] >= c) continue;
                Vec g(c, 0);
                g[f.apery[j]] = 1;
                for (int v : f.m_vars[j]) g[f.vars[v].pos] = static_cast<uint8_t>(assign[v]);
                ok = add_generator(e, g, f.delta);
            }
            if (ok && pivots_match(e, f.delta)) {
                ++count;
                if (m_max > 0) valid[mi].push_back({e, md.d});
            }
            int k = 0;
            while (k < n && ++assign[k] == q) assign[k++] = 0;
            if (k == n) break;
        }
        rep.counts[{md.d, {}}] = count;
    }
    if (m_max == 0) return rep;

    // Extends a chain by h = z^g + (free coefficients at positions above g outside the current module).
    std::function<void(const Echelon&, const DSet&, const DSet&, std::vector<int>&, int)> extend =
        [&](const Echelon& cur, const DSet& d_cur, const DSet& d0, std::vector<int>& gaps, int depth) {
            int last = gaps.empty() ? -1 : gaps.back();
            for (int g : sg.gaps) {
                if (g <= last || !cur.rows[g].empty()) continue;
                DSet d1 = d_cur;
                d1.insert(std::lower_bound(d1.begin(), d1.end(), g), g);
                if (!is_module(sg, d1)) continue;
                std::vector<char> delta(c, 0);
                for (int i = 0; i < c; ++i) delta[i] = (!cur.rows[i].empty() || i == g) ? 1 : 0;
                std::vector<int> pos;
                for (int k = g + 1; k < c; ++k)
                    if (!delta[k]) pos.push_back(k);
                std::vector<int> assign(pos.size(), 0);
                gaps.push_back(g);
                while (true) {
                    ++rep.work;
                    if (rep.work > budget) throw std::runtime_error("brute force budget exceeded");
                    Vec h(c, 0);
                    h[g] = 1;
                    for (std::size_t i = 0; i < pos.size(); ++i) h[pos[i]] = static_cast<uint8_t>(assign[i]);
                    Echelon e = cur;
                    if (add_generator(e, h, delta) && pivots_match(e, delta)) {
                        ++rep.counts[{d0, gaps}];
                        if (depth + 1 < m_max) extend(e, d1, d0, gaps, depth + 1);
                    }
                    std::size_t k = 0;
                    while (k < pos.size() && ++assign[k] == q) assign[k++] = 0;
                    if (k == pos.size()) break;
                }
                gaps.pop_back();
            }
        };
    for (std::size_t mi = 0; mi < modules.size(); ++mi)
        for (const auto& mod : valid[mi]) {
            std::vector<int> gaps;
            extend(mod.ech, mod.d, mod.d, gaps, 0);
        }
    // Flags that never occurred still get an explicit zero.
    for (const auto& md : modules)
        for (int m = 1; m <= m_max; ++m)
            for (const auto& fl : dflags_over(sg, md.d, m)) rep.counts.emplace(FlagKey{fl.d0, fl.gaps}, 0);
    return rep;
}

}  // namespace jacfac
