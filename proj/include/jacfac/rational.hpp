#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <ostream>
#include <string>

namespace jacfac {

// Exact rational with an int64 fast path; values that do not fit spill to GMP.
class Rat {
public:
    Rat() = default;
    Rat(long long n) : n_(n), d_(1) {}
    Rat(long long n, long long d);
    explicit Rat(const mpq_class& q);

    bool is_zero() const { return !big_ && n_ == 0; }
    bool is_one() const { return !big_ && n_ == 1 && d_ == 1; }
    int sign() const;
    bool is_integer() const;

    mpq_class to_mpq() const;
    mpz_class num() const;
    mpz_class den() const;
    std::string str() const;

    friend Rat operator+(const Rat& a, const Rat& b);
    friend Rat operator-(const Rat& a, const Rat& b);
    friend Rat operator*(const Rat& a, const Rat& b);
    friend Rat operator/(const Rat& a, const Rat& b);
    Rat operator-() const;
    Rat& operator+=(const Rat& b) { return *this = *this + b; }
    Rat& operator-=(const Rat& b) { return *this = *this - b; }
    Rat& operator*=(const Rat& b) { return *this = *this * b; }
    Rat& operator/=(const Rat& b) { return *this = *this / b; }
    friend bool operator==(const Rat& a, const Rat& b);
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }

private:
    static Rat from_i128(__int128 n, __int128 d);
    static Rat normalize(const mpq_class& q);

    long long n_ = 0;
    long long d_ = 1;
    std::shared_ptr<const mpq_class> big_;
};

std::ostream& operator<<(std::ostream& os, const Rat& r);

}  // namespace jacfac
