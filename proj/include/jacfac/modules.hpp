#pragma once

#include "jacfac/semigroup.hpp"

#include <string>
#include <vector>

namespace jacfac {

using DSet = std::vector<int>;  // sorted added gaps

// Standard Gamma-module Delta = Gamma u D, stored by membership below the conductor.
struct GammaModule {
    DSet d;
    std::vector<char> delta;  // membership on [0, c)

    bool contains(int v) const { return v >= static_cast<int>(delta.size()) || (v >= 0 && delta[v]); }
    int size() const { return static_cast<int>(d.size()); }
};

struct DFlag {
    DSet d0;
    std::vector<int> gaps;  // g_1 < ... < g_m
    int m() const { return static_cast<int>(gaps.size()); }
    DSet level(int i) const;  // D_0 u {g_1..g_i}
};

bool is_module(const Semigroup& sg, const DSet& d);
GammaModule make_module(const Semigroup& sg, const DSet& d);
GammaModule closure(const Semigroup& sg, const DSet& generators);
DSet primitive(const Semigroup& sg, const DSet& d);
std::vector<GammaModule> enumerate_standard_modules(const Semigroup& sg);
// Flags with 0 <= m <= m_max over the given base modules, each level a Gamma-module.
std::vector<DFlag> enumerate_dflags(const Semigroup& sg, const std::vector<GammaModule>& modules, int m_max);
// Flags of exactly length m over one base module.
std::vector<DFlag> dflags_over(const Semigroup& sg, const DSet& d0, int m);

std::string format_dset(const DSet& d);  // "[2,9,15]"
DSet parse_dset(const std::string& s);
bool dset_less(const DSet& a, const DSet& b);  // (|D|, lex)

}  // namespace jacfac
