#pragma once

#include "jacfac/rational.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace jacfac {

// GF(p^ell) with table arithmetic. Elements are integers in [0, q) encoding
// base-p digit vectors; the prime subfield is {0, ..., p-1}.
class FiniteField {
public:
    FiniteField(int p, int ell);

    int p() const { return p_; }
    int ell() const { return ell_; }
    int size() const { return q_; }

    uint32_t add(uint32_t a, uint32_t b) const { return add_[a * q_ + b]; }
    uint32_t mul(uint32_t a, uint32_t b) const { return mul_[a * q_ + b]; }
    uint32_t neg(uint32_t a) const { return neg_[a]; }
    uint32_t inv(uint32_t a) const;
    uint32_t sub(uint32_t a, uint32_t b) const { return add(a, neg(b)); }

    // Image of a rational in the prime subfield; nullopt if p divides the denominator.
    std::optional<uint32_t> from_rat(const Rat& r) const;
    uint32_t from_int(long long v) const;

    std::string name() const;

private:
    int p_, ell_, q_;
    std::vector<uint32_t> add_, mul_, neg_, inv_;
};

// Smallest prime-power factorisation helper: returns (p, ell) or nullopt if q is not a prime power.
std::optional<std::pair<int, int>> prime_power(int q);
bool is_prime(long long n);

// Scalar bound to a thread-local current field, so that Poly<Fq> can use operators.
class Fq {
public:
    Fq() = default;
    explicit Fq(uint32_t v) : v_(v) {}
    Fq(long long v);
    Fq(int v) : Fq(static_cast<long long>(v)) {}

    uint32_t value() const { return v_; }
    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    friend Fq operator+(Fq a, Fq b) { return Fq(field().add(a.v_, b.v_)); }
    friend Fq operator-(Fq a, Fq b) { return Fq(field().sub(a.v_, b.v_)); }
    friend Fq operator*(Fq a, Fq b) { return Fq(field().mul(a.v_, b.v_)); }
    friend Fq operator/(Fq a, Fq b) { return Fq(field().mul(a.v_, field().inv(b.v_))); }
    Fq operator-() const { return Fq(field().neg(v_)); }
    Fq& operator+=(Fq b) { return *this = *this + b; }
    Fq& operator-=(Fq b) { return *this = *this - b; }
    Fq& operator*=(Fq b) { return *this = *this * b; }
    friend bool operator==(Fq a, Fq b) { return a.v_ == b.v_; }
    friend bool operator!=(Fq a, Fq b) { return a.v_ != b.v_; }
    std::string str() const { return std::to_string(v_); }

    static const FiniteField& field();

private:
    uint32_t v_ = 0;
};

std::ostream& operator<<(std::ostream& os, Fq a);

// RAII binding of the thread-local field used by Fq.
class FieldScope {
public:
    explicit FieldScope(const FiniteField& f);
    ~FieldScope();
    FieldScope(const FieldScope&) = delete;
    FieldScope& operator=(const FieldScope&) = delete;

private:
    const FiniteField* prev_;
};

}  // namespace jacfac
