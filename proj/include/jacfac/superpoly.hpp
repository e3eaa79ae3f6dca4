#pragma once

#include "jacfac/counting.hpp"

#include <gmpxx.h>

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace jacfac {

// Exact integer polynomial in three variables; exponents stored as (a, t, q) so iteration order
// is the canonical print order.
struct Superpoly {
    using Exp = std::array<int, 3>;
    std::map<Exp, mpz_class> terms;
    std::array<std::string, 3> names{"a", "t", "q"};

    static Superpoly one();
    static Superpoly monomial(int q, int t, int a, const mpz_class& coef = 1);

    void add(const Exp& e, const mpz_class& c);
    Superpoly& operator+=(const Superpoly& o);
    Superpoly& operator-=(const Superpoly& o);
    friend Superpoly operator*(const Superpoly& x, const Superpoly& y);
    friend bool operator==(const Superpoly& x, const Superpoly& y) { return x.terms == y.terms; }

    bool is_zero() const { return terms.empty(); }
    int degree_a() const;
    mpz_class coeff(int q, int t, int a) const;
    mpz_class coefficient_sum() const;
    bool nonnegative() const;
    std::string str() const;  // "1 + q*t + a*q"

    // Restrictions: t = 1, terms of one a-degree, a = 0 and q = 1 etc.
    Superpoly at_t1() const;
    Superpoly at_q1() const;
    Superpoly a_part(int k) const;
};

// Accepts integers, the variables q, t, a, ^ with optional braces, parentheses and implicit products.
Superpoly parse_superpoly(const std::string& text);

// Slice names: full, t1, a<k>, a<k>_t1, betti.
Superpoly apply_slice(const Superpoly& h, const std::string& slice);

// H = sum over admissible flags of q^(|D_0|+m) a^m t^delta C(1/t).
struct FlagCount {
    int d0_size = 0;
    int m = 0;
    const CountPoly* count = nullptr;
};
Superpoly assemble(const std::vector<FlagCount>& flags, int delta);

// H(q = 1, a = 0) as a polynomial in t.
Superpoly betti(const Superpoly& h);

// q^i t^j a^k -> q_st^(2i+2j) t_st^(2i+k) a_st^(2k).
Superpoly to_standard_params(const Superpoly& h);

// Exponents (alpha, beta) with H(q,t,a) = q^alpha t^beta H(1/t, 1/q, a), if they exist.
std::optional<std::pair<int, int>> superduality_check(const Superpoly& h);

struct DiffEntry {
    Superpoly::Exp exp;
    mpz_class computed, expected;
};
std::vector<DiffEntry> compare_polys(const Superpoly& computed, const Superpoly& expected);
std::string format_diff(const std::vector<DiffEntry>& diff, const std::array<std::string, 3>& names);

// Fixture files: lines starting with '#' are comments, the rest is one polynomial.
std::string fixtures_dir(const std::string& override_dir = "");
std::string fixture_path(const std::string& dir, const std::string& gamma_id, const std::string& slice);
Superpoly load_fixture(const std::string& path);
std::vector<std::string> list_fixture_slices(const std::string& dir, const std::string& gamma_id);

}  // namespace jacfac
