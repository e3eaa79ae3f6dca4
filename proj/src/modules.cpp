#include "jacfac/modules.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace jacfac {

DSet DFlag::level(int i) const {
    DSet d = d0;
    for (int k = 0; k < i; ++k) d.push_back(gaps[k]);
    std::sort(d.begin(), d.end());
    return d;
}

bool is_module(const Semigroup& sg, const DSet& d) {
    std::vector<char> in(sg.conductor, 0);
    for (int g : d) {
        if (g < 0 || g >= sg.conductor || sg.members[g]) return false;
        in[g] = 1;
    }
    for (int g : d)
        for (int gen : sg.generators) {
            int v = g + gen;
            if (v < sg.conductor && !sg.members[v] && !in[v]) return false;
        }
    return true;
}

GammaModule make_module(const Semigroup& sg, const DSet& d) {
    if (!is_module(sg, d)) throw std::invalid_argument("not a Gamma-module: " + format_dset(d));
    GammaModule m;
    m.d = d;
    std::sort(m.d.begin(), m.d.end());
    m.delta.assign(sg.members.begin(), sg.members.begin() + sg.conductor);
    for (int g : m.d) m.delta[g] = 1;
    return m;
}

GammaModule closure(const Semigroup& sg, const DSet& generators) {
    std::vector<char> in(sg.conductor, 0);
    std::vector<int> stack;
    for (int g : generators) {
        if (g < 0) throw std::invalid_argument("negative gap");
        if (g < sg.conductor && !sg.members[g] && !in[g]) {
            in[g] = 1;
            stack.push_back(g);
        }
    }
    while (!stack.empty()) {
        int g = stack.back();
        stack.pop_back();
        for (int gen : sg.generators) {
            int v = g + gen;
            if (v < sg.conductor && !sg.members[v] && !in[v]) {
                in[v] = 1;
                stack.push_back(v);
            }
        }
    }
    DSet d;
    for (int i = 0; i < sg.conductor; ++i)
        if (in[i]) d.push_back(i);
    return make_module(sg, d);
}

DSet primitive(const Semigroup& sg, const DSet& d) {
    DSet out;
    for (int g : d) {
        bool generated = false;
        for (int h : d)
            if (h < g && sg.contains(g - h)) generated = true;
        if (!generated) out.push_back(g);
    }
    return out;
}

std::vector<GammaModule> enumerate_standard_modules(const Semigroup& sg) {
    // Decide gaps from the largest down: a gap may join D only if all its
    // Gamma-translates that are gaps already did.
    const auto& G = sg.gaps;
    std::vector<char> in(sg.conductor, 0);
    std::vector<DSet> found;
    std::function<void(int)> rec = [&](int idx) {
        if (idx < 0) {
            DSet d;
            for (int g : G)
                if (in[g]) d.push_back(g);
            found.push_back(d);
            return;
        }
        int g = G[idx];
        rec(idx - 1);
        bool ok = true;
        for (int gen : sg.generators) {
            int v = g + gen;
            if (v < sg.conductor && !sg.members[v] && !in[v]) ok = false;
        }
        if (ok) {
            in[g] = 1;
            rec(idx - 1);
            in[g] = 0;
        }
    };
    rec(static_cast<int>(G.size()) - 1);
    std::sort(found.begin(), found.end(), dset_less);
    std::vector<GammaModule> out;
    out.reserve(found.size());
    for (const auto& d : found) out.push_back(make_module(sg, d));
    return out;
}

std::vector<DFlag> dflags_over(const Semigroup& sg, const DSet& d0, int m) {
    std::vector<DFlag> out;
    std::vector<char> in(sg.conductor, 0);
    for (int g : d0) in[g] = 1;
    std::vector<int> chosen;
    auto admissible_step = [&](int g) {
        for (int gen : sg.generators) {
            int v = g + gen;
            if (v < sg.conductor && !sg.members[v] && !in[v]) return false;
        }
        return true;
    };
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(chosen.size()) == m) {
            out.push_back(DFlag{d0, chosen});
            return;
        }
        for (std::size_t i = 0; i < sg.gaps.size(); ++i) {
            int g = sg.gaps[i];
            if (g <= start || in[g]) continue;
            if (!admissible_step(g)) continue;
            in[g] = 1;
            chosen.push_back(g);
            rec(g);
            chosen.pop_back();
            in[g] = 0;
        }
    };
    rec(-1);
    return out;
}

std::vector<DFlag> enumerate_dflags(const Semigroup& sg, const std::vector<GammaModule>& modules, int m_max) {
    std::vector<DFlag> out;
    for (int m = 0; m <= m_max; ++m)
        for (const auto& mod : modules) {
            auto f = dflags_over(sg, mod.d, m);
            out.insert(out.end(), f.begin(), f.end());
        }
    return out;
}

std::string format_dset(const DSet& d) {
    std::string s = "[";
    for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
    return s + "]";
}

DSet parse_dset(const std::string& text) {
    DSet d;
    std::string cur;
    for (char ch : text) {
        if (ch >= '0' && ch <= '9') {
            cur += ch;
        } else if (!cur.empty()) {
            d.push_back(std::stoi(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) d.push_back(std::stoi(cur));
    std::sort(d.begin(), d.end());
    return d;
}

bool dset_less(const DSet& a, const DSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

}  // namespace jacfac
