#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace jacfac {

struct NewtonPairs {
    std::vector<int> r;
    std::vector<int> s;
};

struct CableParams {
    std::vector<int> a;
    std::vector<int> r;
    std::string link() const;  // e.g. "Cab(13,2)T(3,2)"
};

struct Semigroup {
    std::vector<int> generators;  // minimal generators, ascending
    std::vector<char> members;    // membership on [0, conductor]
    std::vector<int> gaps;
    int delta = 0;
    int conductor = 0;

    bool contains(int v) const { return v >= conductor || (v >= 0 && members[v]); }
    int multiplicity() const { return generators.empty() ? 1 : generators.front(); }
    std::string id() const;  // "4-6-13"
    nlohmann::json to_json(const CableParams* cable = nullptr) const;
};

void validate(const NewtonPairs& p);
CableParams newton_to_cable(const NewtonPairs& p);
// Input (e, beta_1, ..., beta_l); output in the raw gcd-chain convention.
NewtonPairs exponents_to_newton(const std::vector<int>& exponents);
std::vector<int> newton_to_exponents(const NewtonPairs& p);
// Applies the r_1 > s_1 convention by swapping the first pair when needed.
NewtonPairs normalize_first_pair(const NewtonPairs& p, bool* swapped = nullptr);
// Minimal generators of the plane-curve semigroup of the given exponents.
std::vector<int> semigroup_generators_from_exponents(const std::vector<int>& exponents);
// Characteristic exponents recovered from minimal plane-curve semigroup generators.
std::vector<int> exponents_from_semigroup_generators(const std::vector<int>& gens);
Semigroup semigroup_generate(const std::vector<int>& generators);
int a_degree_bound(const NewtonPairs& p);

}  // namespace jacfac
