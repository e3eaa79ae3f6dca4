#pragma once

#include "jacfac/cell.hpp"
#include "jacfac/curve.hpp"
#include "jacfac/finite_field.hpp"

#include <gmpxx.h>

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace jacfac {

// Integer polynomial in the field size q_f, coefficients indexed by degree.
struct CountPoly {
    std::vector<mpz_class> c;

    static CountPoly monomial(int deg, const mpz_class& coef = 1);
    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    bool is_monomial() const;
    mpz_class eval(long q) const;
    std::string str() const;  // e.g. "2*q^16 - q^15"
    void trim();
    friend bool operator==(const CountPoly& a, const CountPoly& b) { return a.c == b.c; }
};

// Field sizes tried for interpolation, ascending.
const std::vector<int>& field_size_schedule();
// Sizes from the schedule whose characteristic is not excluded and where the curve has good reduction.
std::vector<int> good_field_sizes(const CurveSpec& spec, const CurveRing<Rat>& ring);

// Number of points of the residual system over the field, in the residual variables only.
mpz_class residual_count(const CellAnalysis& a, const FiniteField& f);
// Full point count of the cell over the field.
mpz_class cell_count(const CellAnalysis& a, const FiniteField& f);

// q^(free) times the interpolated residual count; sizes must be good for the curve.
CountPoly cell_count_poly(const CellAnalysis& a, const std::vector<int>& sizes);

// Brute-force enumeration of modules and flags over GF(q): counts keyed by (D_0, gaps).
using FlagKey = std::pair<DSet, std::vector<int>>;
struct OracleReport {
    int q = 0;
    long work = 0;
    std::map<FlagKey, long> counts;
};
OracleReport brute_force_flags(const CurveSpec& spec, int q, int m_max, long budget);

}  // namespace jacfac
