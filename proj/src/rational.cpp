#include "jacfac/rational.hpp"

#include <limits>
#include <stdexcept>

namespace jacfac {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

bool fits64(__int128 v) {
    return v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max();
}

mpz_class mpz_from_ll(long long v) {
    mpz_class z;
    mpz_set_si(z.get_mpz_t(), v);
    return z;
}

}  // namespace

Rat::Rat(long long n, long long d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    *this = from_i128(n, d);
}

Rat::Rat(const mpq_class& q) { *this = normalize(q); }

Rat Rat::from_i128(__int128 n, __int128 d) {
    if (d < 0) {
        n = -n;
        d = -d;
    }
    __int128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    if (n == 0) d = 1;
    Rat r;
    if (fits64(n) && fits64(d)) {
        r.n_ = static_cast<long long>(n);
        r.d_ = static_cast<long long>(d);
        return r;
    }
    // Rare: build through strings of the 128-bit halves.
    auto to_mpz = [](__int128 v) {
        bool neg = v < 0;
        unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
        mpz_class hi, lo;
        mpz_set_ui(hi.get_mpz_t(), static_cast<unsigned long>(u >> 64));
        mpz_set_ui(lo.get_mpz_t(), static_cast<unsigned long>(u & 0xffffffffffffffffULL));
        mpz_class z = (hi << 64) + lo;
        return neg ? mpz_class(-z) : z;
    };
    mpq_class q(to_mpz(n), to_mpz(d));
    q.canonicalize();
    return normalize(q);
}

Rat Rat::normalize(const mpq_class& q) {
    Rat r;
    if (mpz_fits_slong_p(q.get_num_mpz_t()) && mpz_fits_slong_p(q.get_den_mpz_t())) {
        r.n_ = mpz_get_si(q.get_num_mpz_t());
        r.d_ = mpz_get_si(q.get_den_mpz_t());
        return r;
    }
    r.big_ = std::make_shared<const mpq_class>(q);
    return r;
}

int Rat::sign() const {
    if (big_) return sgn(*big_);
    return (n_ > 0) - (n_ < 0);
}

bool Rat::is_integer() const {
    if (big_) return mpz_cmp_ui(big_->get_den_mpz_t(), 1) == 0;
    return d_ == 1;
}

mpq_class Rat::to_mpq() const {
    if (big_) return *big_;
    return mpq_class(mpz_from_ll(n_), mpz_from_ll(d_));
}

mpz_class Rat::num() const { return big_ ? mpz_class(big_->get_num()) : mpz_from_ll(n_); }
mpz_class Rat::den() const { return big_ ? mpz_class(big_->get_den()) : mpz_from_ll(d_); }

std::string Rat::str() const {
    if (big_) return big_->get_str();
    if (d_ == 1) return std::to_string(n_);
    return std::to_string(n_) + "/" + std::to_string(d_);
}

Rat operator+(const Rat& a, const Rat& b) {
    if (!a.big_ && !b.big_) {
        if (a.d_ == 1 && b.d_ == 1) {
            long long s;
            if (!__builtin_add_overflow(a.n_, b.n_, &s)) return Rat(s);
        }
        return Rat::from_i128(static_cast<__int128>(a.n_) * b.d_ + static_cast<__int128>(b.n_) * a.d_,
                              static_cast<__int128>(a.d_) * b.d_);
    }
    return Rat::normalize(a.to_mpq() + b.to_mpq());
}

Rat operator-(const Rat& a, const Rat& b) { return a + (-b); }

Rat operator*(const Rat& a, const Rat& b) {
    if (!a.big_ && !b.big_) {
        if (a.d_ == 1 && b.d_ == 1) {
            long long s;
            if (!__builtin_mul_overflow(a.n_, b.n_, &s)) return Rat(s);
        }
        return Rat::from_i128(static_cast<__int128>(a.n_) * b.n_, static_cast<__int128>(a.d_) * b.d_);
    }
    return Rat::normalize(a.to_mpq() * b.to_mpq());
}

Rat operator/(const Rat& a, const Rat& b) {
    if (b.is_zero()) throw std::domain_error("division by zero");
    if (!a.big_ && !b.big_)
        return Rat::from_i128(static_cast<__int128>(a.n_) * b.d_, static_cast<__int128>(a.d_) * b.n_);
    return Rat::normalize(a.to_mpq() / b.to_mpq());
}

Rat Rat::operator-() const {
    if (big_) return normalize(-*big_);
    if (n_ == std::numeric_limits<long long>::min()) return from_i128(-static_cast<__int128>(n_), d_);
    Rat r;
    r.n_ = -n_;
    r.d_ = d_;
    return r;
}

bool operator==(const Rat& a, const Rat& b) {
    if (!a.big_ && !b.big_) return a.n_ == b.n_ && a.d_ == b.d_;
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false;  // canonical form: a value representable in int64 is never stored big
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

}  // namespace jacfac
