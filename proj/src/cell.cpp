#include "jacfac/cell.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace jacfac {

std::string status_name(CellStatus s) {
    switch (s) {
        case CellStatus::affine: return "affine";
        case CellStatus::nonaffine: return "nonaffine";
        case CellStatus::empty: return "empty";
    }
    return "?";
}

int Frame::module_var_count() const {
    int n = 0;
    for (const auto& v : m_vars) n += static_cast<int>(v.size());
    return n;
}

std::string Frame::var_name(int v) const {
    const auto& info = vars.at(v);
    return std::string(info.is_h ? "h" : "m") + std::to_string(info.owner) + "_" + std::to_string(info.pos);
}

Frame build_frame(const Semigroup& sg, const GammaModule& d0, const std::vector<int>& flag_gaps) {
    Frame f;
    f.c = sg.conductor;
    f.e = sg.multiplicity();
    f.delta.assign(f.c, 0);
    for (int k = 0; k < f.c; ++k) f.delta[k] = d0.contains(k) ? 1 : 0;
    f.flag_gaps = flag_gaps;
    f.apery.assign(f.e, -1);
    for (int k = 0; k < f.c + f.e; ++k)
        if ((k >= f.c || f.delta[k]) && f.apery[k % f.e] < 0) f.apery[k % f.e] = k;
    f.m_vars.resize(f.e);
    for (int j = 0; j < f.e; ++j)
        for (int k = f.apery[j] + 1; k < f.c; ++k)
            if (!f.delta[k]) {
                f.m_vars[j].push_back(static_cast<int>(f.vars.size()));
                f.vars.push_back({false, j, k, k - f.apery[j]});
            }
    for (std::size_t i = 0; i < flag_gaps.size(); ++i) {
        int g = flag_gaps[i];
        if (g < 0 || g >= f.c || f.delta[g]) throw std::invalid_argument("flag gap is not a gap of the base module");
        if (i > 0 && g <= flag_gaps[i - 1]) throw std::invalid_argument("flag gaps must increase");
        f.h_vars.emplace_back();
        for (int k = g + 1; k < f.c; ++k)
            if (!f.delta[k]) {
                f.h_vars.back().push_back(static_cast<int>(f.vars.size()));
                f.vars.push_back({true, static_cast<int>(i) + 1, k, k - g});
            }
    }
    return f;
}

std::vector<Key> pivot_keys(const Frame& f, PivotRule rule) {
    std::vector<Key> keys;
    keys.reserve(f.vars.size());
    for (const auto& v : f.vars) {
        int cls = v.is_h ? 0 : (v.owner == 0 ? 2 : 1);
        if (rule == PivotRule::offset) cls = 0;
        int owner = rule == PivotRule::permuted ? v.owner : -v.owner;
        keys.push_back({cls, v.offset, owner});
    }
    return keys;
}

namespace {

template <class K>
RingData<K> ring_data_impl(const CurveRing<K>& ring) {
    RingData<K> d;
    d.c = ring.semigroup.conductor;
    auto cut = [&](const Series<K>& s) {
        Series<K> r(d.c);
        for (int i = 0; i < d.c && i < static_cast<int>(s.size()); ++i) r[i] = s[i];
        return r;
    };
    d.x = cut(ring.basis.front().series);
    d.y = cut(ring.y);
    for (int g = 1; g < d.c; ++g) {
        if (!ring.semigroup.contains(g)) continue;
        Series<K> r(d.c);
        r[0] = K(1);
        for (int gen : phi_decomposition(ring.semigroup, g))
            for (const auto& b : ring.basis)
                if (b.valuation == gen) {
                    r = series_mul(r, cut(b.series), d.c);
                    break;
                }
        d.phi[g] = r;
    }
    return d;
}

template <class K>
void add_primes(const K& c, std::set<long>& primes) {
    if constexpr (std::is_same_v<K, Rat>) {
        if (c.is_integer() && (c == Rat(1) || c == Rat(-1))) return;
        for (long p : small_prime_factors(c.num(), 64)) primes.insert(p);
        for (long p : small_prime_factors(c.den(), 64)) primes.insert(p);
    } else {
        (void)c;
        (void)primes;
    }
}

template <class K>
void add_coefficient_primes(const Poly<K>& p, std::set<long>& primes) {
    for (const auto& t : p.terms()) add_primes(t.c, primes);
}


// Looks for a relation sum c_v*v + f, linear in a set V of variables whose coefficients c_v avoid V,
// together with constants alpha making sum alpha_v*c_v a nonzero constant. The change of coordinates
// v -> v + (alpha_v/alpha_w)*w (v in V, v != w) then leaves w with a constant coefficient.
template <class K>
bool linear_change(std::vector<Poly<K>>& eqs, const std::vector<Key>& keys,
                   std::vector<std::pair<int, Poly<K>>>* subs, std::set<long>& primes) {
    for (const auto& E : eqs) {
        std::map<int, int> degree;
        for (const auto& t : E.terms())
            for (int i = 0; i < t.m.n; ++i) {
                int v = Mono::var_of(t.m.f[i]);
                degree[v] = std::max(degree[v], Mono::exp_of(t.m.f[i]));
            }
        std::vector<int> linear;
        for (const auto& [v, d] : degree)
            if (d == 1) linear.push_back(v);
        std::sort(linear.begin(), linear.end(), [&](int a, int b) { return keys.at(a) < keys.at(b); });
        std::map<int, Poly<K>> coef;
        for (int v : linear) {
            std::vector<typename Poly<K>::Term> ts;
            for (const auto& t : E.terms())
                if (t.m.exponent(v) == 1) ts.push_back({t.m.without(v), t.c});
            coef[v] = Poly<K>::from_terms(std::move(ts));
        }
        std::vector<int> V;
        for (int v : linear) {
            bool ok = true;
            for (int w : V)
                if (coef[v].contains(w) || coef[w].contains(v)) ok = false;
            if (ok) V.push_back(v);
        }
        if (V.size() < 2) continue;
        // Columns are the variables of V; rows are the non-constant monomials of their coefficients.
        std::map<Mono, std::vector<K>> rows;
        std::vector<K> constant(V.size(), K(0));
        for (std::size_t i = 0; i < V.size(); ++i)
            for (const auto& t : coef[V[i]].terms()) {
                if (t.m.is_one()) {
                    constant[i] = t.c;
                    continue;
                }
                auto& r = rows[t.m];
                if (r.empty()) r.assign(V.size(), K(0));
                r[i] = t.c;
            }
        std::vector<std::vector<K>> M;
        for (auto& [m, r] : rows) M.push_back(r);
        // Reduced row echelon form of M, then scan its nullspace basis.
        std::size_t n = V.size();
        std::vector<int> pivot_col;
        std::size_t row = 0;
        for (std::size_t col = 0; col < n && row < M.size(); ++col) {
            std::size_t r = row;
            while (r < M.size() && M[r][col].is_zero()) ++r;
            if (r == M.size()) continue;
            std::swap(M[r], M[row]);
            K inv = K(1) / M[row][col];
            for (auto& x : M[row]) x = x * inv;
            for (std::size_t k = 0; k < M.size(); ++k)
                if (k != row && !M[k][col].is_zero()) {
                    K f = M[k][col];
                    for (std::size_t c2 = 0; c2 < n; ++c2) M[k][c2] = M[k][c2] - f * M[row][c2];
                }
            pivot_col.push_back(static_cast<int>(col));
            ++row;
        }
        std::vector<char> is_pivot(n, 0);
        for (int c2 : pivot_col) is_pivot[c2] = 1;
        for (std::size_t fcol = 0; fcol < n; ++fcol) {
            if (is_pivot[fcol]) continue;
            std::vector<K> alpha(n, K(0));
            alpha[fcol] = K(1);
            for (std::size_t r = 0; r < pivot_col.size(); ++r) alpha[pivot_col[r]] = -M[r][fcol];
            K total(0);
            for (std::size_t i = 0; i < n; ++i) total = total + alpha[i] * constant[i];
            if (total.is_zero()) continue;
            std::size_t w = n;
            for (std::size_t i = 0; i < n; ++i)
                if (!alpha[i].is_zero()) {
                    w = i;
                    break;
                }
            int wv = V[w];
            add_primes(alpha[w], primes);
            for (std::size_t i = 0; i < n; ++i) {
                if (i == w || alpha[i].is_zero()) continue;
                K beta = alpha[i] / alpha[w];
                add_primes(beta, primes);
                Poly<K> repl = Poly<K>::variable(V[i]) + Poly<K>::variable(wv).scaled(beta);
                for (auto& q : eqs)
                    if (q.contains(V[i])) q = q.substitute(V[i], repl);
                if (subs) subs->emplace_back(V[i], repl);
            }
            return true;
        }
    }
    return false;
}

}  // namespace

RingData<Rat> ring_data(const CurveRing<Rat>& ring) { return ring_data_impl(ring); }
RingData<Fq> ring_data(const CurveRing<Fq>& ring) { return ring_data_impl(ring); }

template <class K>
FrameSeries<K> frame_series(const Frame& f, const RingData<K>& ring) {
    FrameSeries<K> fs;
    int c = f.c;
    fs.m.resize(f.e);
    for (int j = 0; j < f.e; ++j) {
        PSeries<K> s(c);
        if (f.apery[j] < c) s[f.apery[j]] = Poly<K>(K(1));
        for (int v : f.m_vars[j]) s[f.vars[v].pos] = Poly<K>::variable(v);
        fs.m[j] = std::move(s);
    }
    for (std::size_t i = 0; i < f.flag_gaps.size(); ++i) {
        PSeries<K> s(c);
        s[f.flag_gaps[i]] = Poly<K>(K(1));
        for (int v : f.h_vars[i]) s[f.vars[v].pos] = Poly<K>::variable(v);
        fs.h.push_back(std::move(s));
    }
    fs.W.assign(c, PSeries<K>());
    for (int j = 0; j < f.e; ++j) {
        PSeries<K> s = fs.m[j];
        for (int g = f.apery[j]; g < c; g += f.e) {
            fs.W[g] = s;
            s = series_mul(s, ring.x, c);
        }
    }
    return fs;
}

template <class K>
PSeries<K> reduce_dagger(const PSeries<K>& in, const FrameSeries<K>& fs, const Frame& f) {
    PSeries<K> s = in;
    s.resize(f.c);
    for (int i = 0; i < f.c; ++i) {
        if (!f.delta[i] || s[i].is_zero()) continue;
        Poly<K> coef = s[i];
        const auto& w = fs.W[i];
        for (int k = i; k < f.c; ++k)
            if (!w[k].is_zero()) s[k] -= coef * w[k];
    }
    return s;
}

template <class K>
std::vector<Poly<K>> dagger_equations(const PSeries<K>& s, const FrameSeries<K>& fs, const Frame& f) {
    PSeries<K> r = reduce_dagger(s, fs, f);
    std::vector<Poly<K>> out;
    for (int i = 0; i < f.c; ++i)
        if (!f.delta[i] && !r[i].is_zero()) out.push_back(r[i]);
    return out;
}

template <class K>
std::vector<Syzygy<K>> syzygy_generators(const Frame& f, const FrameSeries<K>& fs, const RingData<K>& ring,
                                         SyzygyMode mode, bool module_part) {
    std::vector<Syzygy<K>> out;
    int c = f.c;
    auto emit = [&](std::string label, int level, const PSeries<K>& gen, const Series<K>& mult) {
        out.push_back({std::move(label), level, series_mul(gen, mult, c)});
    };
    if (mode == SyzygyMode::closure) {
        if (module_part)
            for (int j = 0; j < f.e; ++j)
                if (f.apery[j] < c) emit("y*m" + std::to_string(j), 0, fs.m[j], ring.y);
        for (std::size_t i = 0; i < fs.h.size(); ++i) {
            emit("x*h" + std::to_string(i + 1), static_cast<int>(i) + 1, fs.h[i], ring.x);
            emit("y*h" + std::to_string(i + 1), static_cast<int>(i) + 1, fs.h[i], ring.y);
        }
        return out;
    }
    for (const auto& [g, phi] : ring.phi) {
        if (module_part)
            for (int j = 0; j < f.e; ++j)
                if (f.apery[j] + g < c) emit("phi" + std::to_string(g) + "*m" + std::to_string(j), 0, fs.m[j], phi);
        for (std::size_t i = 0; i < fs.h.size(); ++i)
            if (f.flag_gaps[i] + g < c)
                emit("phi" + std::to_string(g) + "*h" + std::to_string(i + 1), static_cast<int>(i) + 1, fs.h[i], phi);
    }
    return out;
}

template <class K>
void eliminate(Elimination<K>& st, const std::vector<Key>& keys, bool keep_subs) {
    auto& eqs = st.eqs;
    std::size_t budget = st.term_limit;
    for (const auto& e : eqs) budget += e.size();
    while (true) {
        eqs.erase(std::remove_if(eqs.begin(), eqs.end(), [](const Poly<K>& p) { return p.is_zero(); }), eqs.end());
        for (const auto& e : eqs)
            if (e.is_constant()) {
                add_primes(e.constant_term(), st.primes);
                st.empty = true;
                return;
            }
        int best_eq = -1, best_var = -1;
        K best_coef;
        Key best_key{};
        for (std::size_t i = 0; i < eqs.size(); ++i)
            for (const auto& [v, coef] : eqs[i].linear_pivots()) {
                const Key& k = keys.at(v);
                if (best_eq < 0 || k < best_key) {
                    best_eq = static_cast<int>(i);
                    best_var = v;
                    best_coef = coef;
                    best_key = k;
                }
            }
        if (best_eq < 0) {
            if (linear_change(eqs, keys, keep_subs ? &st.subs : nullptr, st.primes)) continue;
            return;
        }
        Poly<K> e = std::move(eqs[best_eq]);
        eqs.erase(eqs.begin() + best_eq);
        add_primes(best_coef, st.primes);
        Poly<K> expr = (e - Poly<K>::variable(best_var).scaled(best_coef)).scaled(-(K(1) / best_coef));
        std::size_t total = 0;
        for (auto& q : eqs) {
            if (q.contains(best_var)) q = q.substitute(best_var, expr);
            total += q.size();
            if (st.term_limit && total > budget) {
                st.aborted = true;
                return;
            }
        }
        if (keep_subs) st.subs.emplace_back(best_var, std::move(expr));
        ++st.pivots;
    }
}

std::string CellAnalysis::residual_text() const {
    std::string s;
    for (const auto& p : residual) {
        if (!s.empty()) s += "; ";
        s += p.str([&](int v) { return var_names.at(v); });
    }
    return s;
}

nlohmann::json CellAnalysis::to_json(const Semigroup& sg) const {
    nlohmann::json j;
    j["d0"] = d0;
    j["d0_primitive"] = primitive(sg, d0);
    j["gaps"] = gaps;
    j["status"] = status_name(status);
    j["vars"] = vars;
    j["dim"] = dim;
    j["free"] = dim - static_cast<int>(residual_vars.size());
    std::vector<std::string> res;
    for (const auto& p : residual) res.push_back(p.str([&](int v) { return var_names.at(v); }));
    j["residual"] = res;
    j["excluded_primes"] = excluded_primes;
    return j;
}

CellSolver::CellSolver(const CurveRing<Rat>& ring, SolveOptions opts)
    : sg_(ring.semigroup), ring_(ring_data(ring)), ring_primes_(ring.excluded_primes), opts_(opts) {}

std::shared_ptr<const CellSolver::Base> CellSolver::base(const DSet& d0) {
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(d0);
        if (it != cache_.end()) return it->second;
    }
    auto b = std::make_shared<Base>();
    b->frame = build_frame(sg_, make_module(sg_, d0));
    b->fs = frame_series(b->frame, ring_);
    for (const auto& syz : syzygy_generators(b->frame, b->fs, ring_, opts_.mode))
        for (auto& eq : dagger_equations(syz.value, b->fs, b->frame)) b->raw.push_back(std::move(eq));
    b->elim.eqs = b->raw;
    b->elim.term_limit = opts_.term_limit;
    eliminate(b->elim, pivot_keys(b->frame, opts_.rule), true);
    std::lock_guard<std::mutex> lock(mu_);
    auto [it, inserted] = cache_.emplace(d0, b);
    return it->second;
}

CellAnalysis CellSolver::solve(const DFlag& flag) {
    CellAnalysis a;
    a.d0 = flag.d0;
    a.gaps = flag.gaps;
    a.excluded_primes = ring_primes_;
    if (!is_module(sg_, flag.d0)) {
        a.status = CellStatus::empty;
        return a;
    }
    for (int i = 1; i <= flag.m(); ++i)
        if (!is_module(sg_, flag.level(i))) {
            a.status = CellStatus::empty;
            return a;
        }
    auto b = base(flag.d0);
    Frame f = flag.gaps.empty() ? b->frame : build_frame(sg_, make_module(sg_, flag.d0), flag.gaps);
    a.vars = static_cast<int>(f.vars.size());
    for (int v = 0; v < a.vars; ++v) a.var_names.push_back(f.var_name(v));
    std::vector<Poly<Rat>> flag_eqs;
    if (!flag.gaps.empty()) {
        FrameSeries<Rat> fs = frame_series(f, ring_);
        for (const auto& syz : syzygy_generators(f, fs, ring_, opts_.mode, false))
            for (auto& eq : dagger_equations(syz.value, b->fs, f)) flag_eqs.push_back(std::move(eq));
    }
    Elimination<Rat> st;
    st.primes = b->elim.primes;
    st.pivots = b->elim.pivots;
    st.empty = b->elim.empty;
    st.aborted = b->elim.aborted;
    st.term_limit = opts_.term_limit;
    if (!st.empty && !st.aborted) {
        st.eqs = b->elim.eqs;
        for (const auto& eq : flag_eqs) {
            Poly<Rat> q = eq;
            for (const auto& [v, expr] : b->elim.subs)
                if (q.contains(v)) q = q.substitute(v, expr);
            if (!q.is_zero()) st.eqs.push_back(std::move(q));
        }
        if (!flag_eqs.empty()) eliminate(st, pivot_keys(f, opts_.rule), false);
    }
    // A leftover residual or a blown-up system may be an artifact of the pivot order; retry the whole
    // system with the other orders, then with all orders under larger term budgets.
    auto from_raw = [&](PivotRule rule, std::size_t limit) {
        Elimination<Rat> alt;
        alt.term_limit = limit;
        alt.eqs = b->raw;
        alt.eqs.insert(alt.eqs.end(), flag_eqs.begin(), flag_eqs.end());
        eliminate(alt, pivot_keys(f, rule), false);
        return alt;
    };
    for (int round = 0; round < 3; ++round) {
        std::size_t limit = opts_.term_limit << (3 * round);
        for (PivotRule rule : {PivotRule::standard, PivotRule::permuted, PivotRule::offset}) {
            if (!st.aborted && (st.empty || st.eqs.empty())) break;
            if (round == 0 && rule == opts_.rule) continue;
            Elimination<Rat> alt = from_raw(rule, limit);
            if (alt.aborted) continue;
            if (st.aborted || alt.empty || alt.eqs.size() < st.eqs.size()) st = std::move(alt);
        }
        if (!st.aborted || !opts_.term_limit) break;
    }
    if (st.aborted)
        throw std::runtime_error("elimination grows by more than " + std::to_string(opts_.term_limit << 6) +
                                 " terms for D=" + format_dset(flag.d0) + " gaps=" + format_dset(flag.gaps));
    a.excluded_primes.insert(st.primes.begin(), st.primes.end());
    if (st.empty) {
        a.status = CellStatus::empty;
        return a;
    }
    a.dim = a.vars - st.pivots;
    a.residual = st.eqs;
    if (a.residual.empty()) {
        a.status = CellStatus::affine;
        return a;
    }
    a.status = CellStatus::nonaffine;
    std::set<int> rv;
    for (const auto& p : a.residual) {
        for (int v : p.variables()) rv.insert(v);
        add_coefficient_primes(p, a.excluded_primes);
    }
    a.residual_vars.assign(rv.begin(), rv.end());
    if (static_cast<int>(a.residual_vars.size()) > opts_.residual_cap)
        throw std::runtime_error("residual too large: " + std::to_string(a.residual_vars.size()) + " variables for D=" +
                                 format_dset(flag.d0) + " gaps=" + format_dset(flag.gaps));
    return a;
}

int closed_form_mu(const Semigroup& sg, const DSet& d, int g, int u, int v) {
    if (sg.multiplicity() != 4 || u % 2 == 0 || v % 2 == 0 || v <= 2 * u)
        throw std::invalid_argument("closed_form_mu: family precondition violated");
    if (g % 4 == 0) throw std::invalid_argument("closed_form_mu: g must not be divisible by 4");
    GammaModule m = make_module(sg, d);
    auto in_delta1 = [&](int k) { return k == g || m.contains(k); };
    auto gamma = [&](int l) {
        int n = 0;
        for (int k = std::max(l, 0); k < sg.conductor; ++k)
            if (!in_delta1(k)) ++n;
        return n;
    };
    int mu = gamma(g) - gamma(g + 4);
    if (g % 4 == 2) {
        int n = -1;
        for (int k = 2 * u; n < 0; ++k)
            if (k % 2 == 1 && (m.contains(k) || k == v)) n = k;
        mu -= gamma(g + n) - gamma(g + 4 + n);
    }
    return mu;
}

template FrameSeries<Rat> frame_series(const Frame&, const RingData<Rat>&);
template FrameSeries<Fq> frame_series(const Frame&, const RingData<Fq>&);
template PSeries<Rat> reduce_dagger(const PSeries<Rat>&, const FrameSeries<Rat>&, const Frame&);
template PSeries<Fq> reduce_dagger(const PSeries<Fq>&, const FrameSeries<Fq>&, const Frame&);
template std::vector<Poly<Rat>> dagger_equations(const PSeries<Rat>&, const FrameSeries<Rat>&, const Frame&);
template std::vector<Poly<Fq>> dagger_equations(const PSeries<Fq>&, const FrameSeries<Fq>&, const Frame&);
template std::vector<Syzygy<Rat>> syzygy_generators(const Frame&, const FrameSeries<Rat>&, const RingData<Rat>&,
                                                    SyzygyMode, bool);
template std::vector<Syzygy<Fq>> syzygy_generators(const Frame&, const FrameSeries<Fq>&, const RingData<Fq>&,
                                                   SyzygyMode, bool);
template void eliminate(Elimination<Rat>&, const std::vector<Key>&, bool);
template void eliminate(Elimination<Fq>&, const std::vector<Key>&, bool);

}  // namespace jacfac
