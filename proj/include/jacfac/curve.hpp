#pragma once

#include "jacfac/finite_field.hpp"
#include "jacfac/rational.hpp"
#include "jacfac/semigroup.hpp"
#include "jacfac/series.hpp"

#include <set>
#include <string>
#include <vector>

namespace jacfac {

// Element of the valuation basis, normalized to leading coefficient 1.
template <class K>
struct BasisElement {
    int valuation = 0;
    Series<K> series;  // leading coefficient 1
};

template <class K>
struct CurveRing {
    Series<K> x, y;  // as given (not normalized)
    int truncation = 0;
    std::vector<BasisElement<K>> basis;  // one element per minimal generator, ascending valuations
    Semigroup semigroup;
    std::set<long> excluded_primes;  // primes dividing normalizing leading coefficients

    int multiplicity() const { return basis.front().valuation; }
};

// Integer-coefficient polynomial parametrization, as parsed from "x=z^4, y=z^6+z^7".
struct CurveSpec {
    std::vector<long long> x, y;  // coefficient lists indexed by power of z
    std::string text() const;
    std::string hash() const;
};

CurveSpec parse_curve(const std::string& text);
// Canonical parametrization for plane-curve semigroup generators (x = z^e, y = sum of z^beta).
CurveSpec canonical_curve(const std::vector<int>& gamma_generators);
CurveSpec curve_from_exponents(const std::vector<int>& exponents);

// Builds the ring over Q; truncation 0 means 3c (c estimated from the semigroup of the curve).
CurveRing<Rat> valuation_basis(const CurveSpec& spec, int truncation = 0, bool reverse_order = false);
// Same computation over GF(p^ell); throws if a coefficient cannot be reduced.
CurveRing<Fq> valuation_basis_mod(const CurveSpec& spec, const FiniteField& f, int truncation);
bool good_reduction(const CurveSpec& spec, const CurveRing<Rat>& ring, int p, int ell = 1);
// Normalized product of basis elements with valuation gamma (greedy, largest generator first).
Series<Rat> phi_element(const CurveRing<Rat>& ring, int gamma);
std::vector<int> phi_decomposition(const Semigroup& sg, int gamma);

std::set<long> small_prime_factors(const mpz_class& n, long limit = 1000);

}  // namespace jacfac
