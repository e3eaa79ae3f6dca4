#pragma once

#include "jacfac/cell.hpp"
#include "jacfac/counting.hpp"
#include "jacfac/curve.hpp"
#include "jacfac/modules.hpp"
#include "jacfac/superpoly.hpp"

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace jacfac {

struct FlagResult {
    DFlag flag;
    CellStatus status = CellStatus::empty;
    int vars = 0;
    int dim = 0;
    CountPoly count;                     // zero for empty cells
    std::vector<std::string> residual;   // residual relations for non-affine cells
    std::set<long> excluded_primes;
    bool levels_admissible = false;      // every D_i admissible as a module
    bool singletons_admissible = false;  // every D_0 u {g_i} admissible as a module
    bool resumed = false;                // loaded from a checkpoint

    bool admissible() const { return status != CellStatus::empty; }
};

struct PipelineOptions {
    int m_max = -1;  // -1: a-degree bound of the curve
    int jobs = 1;
    int truncation = 0;
    SolveOptions solve;
    std::vector<int> field_sizes;  // empty: schedule filtered by good reduction
    std::string checkpoint;        // append-only results file, empty to disable
    // Solve flags whose levels are not all admissible instead of declaring them empty.
    bool solve_all_flags = false;
    std::function<void(const std::string&)> log;
};

struct Pipeline {
    CurveSpec spec;
    std::unique_ptr<CurveRing<Rat>> ring;
    std::unique_ptr<CellSolver> solver;
    std::vector<GammaModule> modules;
    std::vector<int> field_sizes;
    int m_max = 0;
    int a_bound = 0;

    explicit Pipeline(const CurveSpec& spec, const PipelineOptions& opts = {});
    const Semigroup& semigroup() const { return ring->semigroup; }

    // m = 0 results, one per module, in canonical module order.
    std::vector<FlagResult> run_modules(const PipelineOptions& opts);
    // All flags with 0 <= m <= m_max; m = 0 entries first.
    std::vector<FlagResult> run_flags(const PipelineOptions& opts);

    FlagResult solve_one(const DFlag& flag);
};

// a-degree bound s_1 r_2 ... r_l - 1 of the curve's semigroup.
int a_bound_of(const Semigroup& sg);

struct PipelineSummary {
    Superpoly h;
    mpz_class euler;
    bool truncated_in_a = false;
    int nonaffine = 0;
    std::map<int, int> admissible_per_m;
};
PipelineSummary summarize(const std::vector<FlagResult>& results, const Semigroup& sg, int m_max, int a_bound);

// Flag count q^(|D_0|+m) a^m, one per flag whose D_0 and every D_0 u {g_i} are admissible.
Superpoly singleton_admissible_t1(const std::vector<FlagResult>& results);

std::string flag_key(const DFlag& f);  // "[9,11,15]|2,5,7"

}  // namespace jacfac
