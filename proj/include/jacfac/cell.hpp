#pragma once

#include "jacfac/curve.hpp"
#include "jacfac/modules.hpp"
#include "jacfac/poly.hpp"
#include "jacfac/rational.hpp"
#include "jacfac/series.hpp"

#include <json.hpp>

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

namespace jacfac {

enum class CellStatus { affine, nonaffine, empty };
std::string status_name(CellStatus s);

// closure: y*m_j, x*h_i and y*h_i. full: phi_gamma*m_j and phi_gamma*h_i for every gamma in Gamma below c.
enum class SyzygyMode { closure, full };
// standard: h-variables, then m_j (j >= 1), then m_0; ties by offset, then larger owner first.
// permuted: same classes and offsets, smaller owner first. offset: offsets only, larger owner first.
enum class PivotRule { standard, permuted, offset };

struct VarInfo {
    bool is_h = false;
    int owner = 0;  // residue class j for m-variables, flag level (1-based) for h-variables
    int pos = 0;    // power of z the variable multiplies
    int offset = 0; // pos minus the leading exponent of its generator
};

// Generator frame of a flag: m_j = z^{a_j} + sum of lambda*z^k over gaps of Delta_0 above a_j,
// h_i = z^{g_i} + sum of lambda*z^k over gaps of Delta_i above g_i; everything modulo z^c.
struct Frame {
    int c = 0;
    int e = 0;
    std::vector<int> apery;               // a_j indexed by residue class j mod e
    std::vector<char> delta;              // Delta_0 membership on [0, c)
    std::vector<int> flag_gaps;           // g_1 < ... < g_m
    std::vector<VarInfo> vars;
    std::vector<std::vector<int>> m_vars; // variable ids per class, ascending position
    std::vector<std::vector<int>> h_vars; // variable ids per level, ascending position

    int module_var_count() const;
    std::string var_name(int v) const;
};

Frame build_frame(const Semigroup& sg, const GammaModule& d0, const std::vector<int>& flag_gaps = {});

using Key = std::array<int, 3>;
std::vector<Key> pivot_keys(const Frame& f, PivotRule rule);

// Ring data used by the solver: normalized element of valuation e, y, and phi_gamma for gamma < c.
template <class K>
struct RingData {
    int c = 0;
    Series<K> x, y;
    std::map<int, Series<K>> phi;
};
RingData<Rat> ring_data(const CurveRing<Rat>& ring);
RingData<Fq> ring_data(const CurveRing<Fq>& ring);

template <class K>
using PSeries = Series<Poly<K>>;

template <class K>
struct Syzygy {
    std::string label;
    int level = 0;  // 0 for module syzygies, i for those of h_i
    PSeries<K> value;
};

// Generator series m_j and h_i of a frame, and the W basis x^k m_j indexed by valuation.
template <class K>
struct FrameSeries {
    std::vector<PSeries<K>> m, h;
    std::vector<PSeries<K>> W;  // W[p] empty unless p is in Delta_0
};

template <class K>
FrameSeries<K> frame_series(const Frame& f, const RingData<K>& ring);

template <class K>
std::vector<Syzygy<K>> syzygy_generators(const Frame& f, const FrameSeries<K>& fs, const RingData<K>& ring,
                                         SyzygyMode mode, bool module_part = true);

// Reduction at positions of Delta_0 by the W basis, ascending. The result vanishes on Delta_0.
template <class K>
PSeries<K> reduce_dagger(const PSeries<K>& s, const FrameSeries<K>& fs, const Frame& f);

// Coefficients at positions outside Delta_0 after reduction.
template <class K>
std::vector<Poly<K>> dagger_equations(const PSeries<K>& s, const FrameSeries<K>& fs, const Frame& f);

template <class K>
struct Elimination {
    std::vector<Poly<K>> eqs;                        // residual relations once finished
    std::vector<std::pair<int, Poly<K>>> subs;       // substitutions in the order applied (pivots and coordinate changes)
    int pivots = 0;
    bool empty = false;
    std::set<long> primes;                           // primes dividing pivots or contradiction constants
    std::size_t term_limit = 0;                      // give up once the system grows by more terms (0: no limit)
    bool aborted = false;
};

// Solves every relation of the form c*v + f with c a nonzero constant and v not in f; when none is left,
// tries a linear change of coordinates that produces one.
template <class K>
void eliminate(Elimination<K>& st, const std::vector<Key>& keys, bool keep_subs);

struct CellAnalysis {
    DSet d0;
    std::vector<int> gaps;
    CellStatus status = CellStatus::empty;
    int vars = 0;
    int dim = 0;                      // vars minus pivots (free parameters including residual ones)
    std::vector<Poly<Rat>> residual;
    std::vector<int> residual_vars;
    std::vector<std::string> var_names;  // indexed by variable id
    std::set<long> excluded_primes;

    int m() const { return static_cast<int>(gaps.size()); }
    std::string residual_text() const;
    nlohmann::json to_json(const Semigroup& sg) const;
};

struct SolveOptions {
    SyzygyMode mode = SyzygyMode::closure;
    PivotRule rule = PivotRule::standard;
    int residual_cap = 8;
    // An elimination order whose system grows by more than this many terms is abandoned for another order.
    std::size_t term_limit = 50000;
};

// Solves module and flag cells of one curve; base-module eliminations are cached and thread safe.
class CellSolver {
public:
    CellSolver(const CurveRing<Rat>& ring, SolveOptions opts = {});

    CellAnalysis solve(const DFlag& flag);
    CellAnalysis solve(const DSet& d0) { return solve(DFlag{d0, {}}); }

    const Semigroup& semigroup() const { return sg_; }
    const RingData<Rat>& ring() const { return ring_; }
    const SolveOptions& options() const { return opts_; }

private:
    struct Base {
        Frame frame;
        FrameSeries<Rat> fs;
        std::vector<Poly<Rat>> raw;  // module relations before elimination
        Elimination<Rat> elim;
    };
    std::shared_ptr<const Base> base(const DSet& d0);

    Semigroup sg_;
    RingData<Rat> ring_;
    std::set<long> ring_primes_;
    SolveOptions opts_;
    std::mutex mu_;
    std::map<DSet, std::shared_ptr<const Base>> cache_;
};

// Dimension increment for the family x = z^4, y = z^{2u} + z^v (closed formula).
int closed_form_mu(const Semigroup& sg, const DSet& d, int g, int u, int v);

}  // namespace jacfac
