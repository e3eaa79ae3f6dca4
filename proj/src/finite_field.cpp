#include "jacfac/finite_field.hpp"

#include <map>
#include <stdexcept>

namespace jacfac {

bool is_prime(long long n) {
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::optional<std::pair<int, int>> prime_power(int q) {
    if (q < 2) return std::nullopt;
    int p = 2;
    while (q % p != 0) ++p;
    int ell = 0, r = q;
    while (r % p == 0) {
        r /= p;
        ++ell;
    }
    if (r != 1) return std::nullopt;
    return std::make_pair(p, ell);
}

namespace {

using Digits = std::vector<int>;

Digits to_digits(uint32_t v, int p, int ell) {
    Digits d(ell);
    for (int i = 0; i < ell; ++i) {
        d[i] = static_cast<int>(v % p);
        v /= p;
    }
    return d;
}

uint32_t from_digits(const Digits& d, int p) {
    uint32_t v = 0;
    for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) v = v * p + d[i];
    return v;
}

// Low-to-high coefficients of a monic irreducible polynomial of degree ell (leading 1 omitted).
const std::map<std::pair<int, int>, Digits>& irreducible_table() {
    static const std::map<std::pair<int, int>, Digits> t = {
        {{2, 2}, {1, 1}},        // x^2 + x + 1
        {{2, 3}, {1, 1, 0}},     // x^3 + x + 1
        {{3, 2}, {1, 0}},        // x^2 + 1
        {{2, 4}, {1, 1, 0, 0}},  // x^4 + x + 1
        {{5, 2}, {3, 0}},        // x^2 + 3
        {{3, 3}, {1, 2, 0}},     // x^3 + 2x + 1
        {{2, 5}, {1, 0, 1, 0, 0}},  // x^5 + x^2 + 1
    };
    return t;
}

// Remainder of a monic-free polynomial a by monic f (coefficients mod p).
Digits poly_mod(Digits a, const Digits& f, int p) {
    int n = static_cast<int>(f.size()) - 1;
    for (int i = static_cast<int>(a.size()) - 1; i >= n; --i) {
        int c = a[i] % p;
        if (c == 0) continue;
        for (int j = 0; j <= n; ++j) a[i - n + j] = ((a[i - n + j] - c * f[j]) % p + p) % p;
    }
    a.resize(std::min<std::size_t>(a.size(), n));
    for (auto& v : a) v = ((v % p) + p) % p;
    return a;
}

bool is_irreducible(const Digits& low, int p) {
    int ell = static_cast<int>(low.size());
    Digits f = low;
    f.push_back(1);
    for (int deg = 1; deg <= ell / 2; ++deg) {
        int count = 1;
        for (int i = 0; i < deg; ++i) count *= p;
        for (int code = 0; code < count; ++code) {
            Digits g(deg + 1);
            int c = code;
            for (int i = 0; i < deg; ++i) {
                g[i] = c % p;
                c /= p;
            }
            g[deg] = 1;
            Digits r = poly_mod(f, g, p);
            bool zero = true;
            for (int v : r) zero = zero && v == 0;
            if (zero) return false;
        }
    }
    return true;
}

Digits find_irreducible(int p, int ell) {
    auto it = irreducible_table().find({p, ell});
    if (it != irreducible_table().end()) return it->second;
    int count = 1;
    for (int i = 0; i < ell; ++i) count *= p;
    for (int code = 0; code < count; ++code) {
        Digits low(ell);
        int c = code;
        for (int i = 0; i < ell; ++i) {
            low[i] = c % p;
            c /= p;
        }
        if (low[0] != 0 && is_irreducible(low, p)) return low;
    }
    throw std::runtime_error("no irreducible polynomial found");
}

thread_local const FiniteField* g_current = nullptr;

}  // namespace

FiniteField::FiniteField(int p, int ell) : p_(p), ell_(ell) {
    if (!is_prime(p) || ell < 1) throw std::invalid_argument("field size must be a prime power");
    long long q = 1;
    for (int i = 0; i < ell; ++i) q *= p;
    if (q > 1024) throw std::invalid_argument("field size above 1024 is not supported");
    q_ = static_cast<int>(q);
    add_.assign(q_ * q_, 0);
    mul_.assign(q_ * q_, 0);
    neg_.assign(q_, 0);
    inv_.assign(q_, 0);
    Digits f;
    if (ell > 1) {
        f = find_irreducible(p, ell);
        f.push_back(1);
    }
    std::vector<Digits> dig(q_);
    for (int a = 0; a < q_; ++a) dig[a] = to_digits(a, p, ell);
    for (int a = 0; a < q_; ++a) {
        Digits n(ell);
        for (int i = 0; i < ell; ++i) n[i] = (p - dig[a][i]) % p;
        neg_[a] = from_digits(n, p);
        for (int b = 0; b < q_; ++b) {
            Digits s(ell);
            for (int i = 0; i < ell; ++i) s[i] = (dig[a][i] + dig[b][i]) % p;
            add_[a * q_ + b] = from_digits(s, p);
            if (ell == 1) {
                mul_[a * q_ + b] = static_cast<uint32_t>((static_cast<long long>(a) * b) % p);
            } else {
                Digits prod(2 * ell - 1, 0);
                for (int i = 0; i < ell; ++i)
                    for (int j = 0; j < ell; ++j) prod[i + j] = (prod[i + j] + dig[a][i] * dig[b][j]) % p;
                mul_[a * q_ + b] = from_digits(poly_mod(prod, f, p), p);
            }
        }
    }
    for (int a = 1; a < q_; ++a)
        for (int b = 1; b < q_; ++b)
            if (mul_[a * q_ + b] == 1) {
                inv_[a] = b;
                break;
            }
}

uint32_t FiniteField::inv(uint32_t a) const {
    if (a == 0) throw std::domain_error("inverse of zero in finite field");
    return inv_[a];
}

uint32_t FiniteField::from_int(long long v) const {
    long long r = v % p_;
    if (r < 0) r += p_;
    return static_cast<uint32_t>(r);
}

std::optional<uint32_t> FiniteField::from_rat(const Rat& r) const {
    mpz_class n = r.num(), d = r.den();
    unsigned long nm = mpz_fdiv_ui(n.get_mpz_t(), p_);
    unsigned long dm = mpz_fdiv_ui(d.get_mpz_t(), p_);
    if (dm == 0) return std::nullopt;
    return mul(static_cast<uint32_t>(nm), inv(static_cast<uint32_t>(dm)));
}

std::string FiniteField::name() const {
    return "GF(" + std::to_string(q_) + ")";
}

Fq::Fq(long long v) : v_(field().from_int(v)) {}

const FiniteField& Fq::field() {
    if (!g_current) throw std::logic_error("no finite field bound to this thread");
    return *g_current;
}

std::ostream& operator<<(std::ostream& os, Fq a) { return os << a.value(); }

FieldScope::FieldScope(const FiniteField& f) : prev_(g_current) { g_current = &f; }
FieldScope::~FieldScope() { g_current = prev_; }

}  // namespace jacfac
