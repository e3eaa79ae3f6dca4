#include "jacfac/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace jacfac {

std::string flag_key(const DFlag& f) {
    std::string s = format_dset(f.d0) + "|";
    for (size_t i = 0; i < f.gaps.size(); ++i) s += (i ? "," : "") + std::to_string(f.gaps[i]);
    return s;
}

int a_bound_of(const Semigroup& sg) {
    if (sg.generators.size() < 2) return 0;
    return a_degree_bound(exponents_to_newton(exponents_from_semigroup_generators(sg.generators)));
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

template <class T>
std::string join(const T& xs, const std::string& sep) {
    std::ostringstream os;
    bool first = true;
    for (const auto& x : xs) {
        if (!first) os << sep;
        first = false;
        os << x;
    }
    return os.str();
}

CellStatus parse_status(const std::string& s) {
    if (s == "affine") return CellStatus::affine;
    if (s == "nonaffine") return CellStatus::nonaffine;
    if (s == "empty") return CellStatus::empty;
    throw std::runtime_error("bad status in checkpoint: " + s);
}

std::string checkpoint_line(const std::string& hash, const FlagResult& r) {
    std::vector<std::string> coefs;
    for (const auto& c : r.count.c) coefs.push_back(c.get_str());
    std::vector<std::string> res = r.residual;
    return hash + "\t" + format_dset(r.flag.d0) + "\t" + join(r.flag.gaps, ",") + "\t" + status_name(r.status) + "\t" +
           std::to_string(r.vars) + "\t" + std::to_string(r.dim) + "\t" + join(coefs, ",") + "\t" + join(res, "; ") +
           "\t" + join(r.excluded_primes, ",");
}

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    for (const auto& p : split(s, ','))
        if (!p.empty()) out.push_back(std::stoi(p));
    return out;
}

class Checkpoint {
public:
    Checkpoint(const std::string& path, const std::string& hash) : path_(path), hash_(hash) {
        if (path_.empty()) return;
        std::ifstream in(path_);
        std::string line;
        while (std::getline(in, line)) {
            auto f = split(line, '\t');
            if (f.size() < 9 || f[0] != hash_) continue;
            FlagResult r;
            r.flag.d0 = parse_dset(f[1]);
            r.flag.gaps = parse_ints(f[2]);
            r.status = parse_status(f[3]);
            r.vars = std::stoi(f[4]);
            r.dim = std::stoi(f[5]);
            for (const auto& c : split(f[6], ','))
                if (!c.empty()) r.count.c.emplace_back(c);
            if (!f[7].empty()) r.residual = split(f[7], ';');
            for (auto& s : r.residual) s.erase(0, s.find_first_not_of(' '));
            for (int p : parse_ints(f[8])) r.excluded_primes.insert(p);
            r.resumed = true;
            done_[flag_key(r.flag)] = r;
        }
        out_.open(path_, std::ios::app);
        if (!out_) throw std::runtime_error("cannot open checkpoint " + path_);
    }

    const FlagResult* find(const DFlag& f) const {
        auto it = done_.find(flag_key(f));
        return it == done_.end() ? nullptr : &it->second;
    }

    void append(const FlagResult& r) {
        if (path_.empty()) return;
        std::lock_guard<std::mutex> lock(mu_);
        out_ << checkpoint_line(hash_, r) << "\n";
        out_.flush();
    }

private:
    std::string path_, hash_;
    std::map<std::string, FlagResult> done_;
    std::ofstream out_;
    std::mutex mu_;
};

// Runs fn(i) for i in [0, n) on a pool of workers; the first exception is rethrown.
void parallel_for(size_t n, int jobs, const std::function<void(size_t)>& fn) {
    jobs = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
    std::atomic<size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err) err = std::current_exception();
                next = n;
                return;
            }
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < jobs; ++k) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (err) std::rethrow_exception(err);
}

}  // namespace

Pipeline::Pipeline(const CurveSpec& s, const PipelineOptions& opts) : spec(s) {
    ring = std::make_unique<CurveRing<Rat>>(valuation_basis(spec, opts.truncation));
    solver = std::make_unique<CellSolver>(*ring, opts.solve);
    modules = enumerate_standard_modules(ring->semigroup);
    field_sizes = opts.field_sizes.empty() ? good_field_sizes(spec, *ring) : opts.field_sizes;
    a_bound = a_bound_of(ring->semigroup);
    m_max = opts.m_max < 0 ? a_bound : opts.m_max;
}

FlagResult Pipeline::solve_one(const DFlag& flag) {
    FlagResult r;
    r.flag = flag;
    CellAnalysis a = solver->solve(flag);
    r.status = a.status;
    r.vars = a.vars;
    r.dim = a.dim;
    r.excluded_primes = a.excluded_primes;
    for (const auto& p : a.residual) r.residual.push_back(p.str([&](int v) { return a.var_names.at(v); }));
    if (a.status == CellStatus::affine) {
        r.count = CountPoly::monomial(a.dim);
    } else if (a.status == CellStatus::nonaffine) {
        r.count = cell_count_poly(a, field_sizes);
        // Residual that counts as q^d: report it as an affine cell, keep the residual for inspection.
        if (r.count.is_monomial() && r.count.c.back() == 1) {
            r.status = CellStatus::affine;
            r.dim = r.count.degree();
        }
    }
    return r;
}

std::vector<FlagResult> Pipeline::run_modules(const PipelineOptions& opts) {
    PipelineOptions o = opts;
    o.m_max = 0;
    int saved = m_max;
    m_max = 0;
    auto out = run_flags(o);
    m_max = saved;
    return out;
}

std::vector<FlagResult> Pipeline::run_flags(const PipelineOptions& opts) {
    Checkpoint cp(opts.checkpoint, spec.hash());
    const Semigroup& sg = semigroup();
    auto log = [&](const std::string& s) {
        if (opts.log) opts.log(s);
    };

    auto run_batch = [&](std::vector<FlagResult>& batch, const std::vector<char>& need_solve) {
        std::atomic<size_t> solved{0};
        parallel_for(batch.size(), opts.jobs, [&](size_t i) {
            if (!need_solve[i]) return;
            if (const FlagResult* prev = cp.find(batch[i].flag)) {
                bool la = batch[i].levels_admissible, sa = batch[i].singletons_admissible;
                batch[i] = *prev;
                batch[i].levels_admissible = la;
                batch[i].singletons_admissible = sa;
                return;
            }
            bool la = batch[i].levels_admissible, sa = batch[i].singletons_admissible;
            batch[i] = solve_one(batch[i].flag);
            batch[i].levels_admissible = la;
            batch[i].singletons_admissible = sa;
            cp.append(batch[i]);
            ++solved;
        });
        return solved.load();
    };

    std::vector<FlagResult> out;
    std::vector<FlagResult> base(modules.size());
    std::vector<char> need(modules.size(), 1);
    for (size_t i = 0; i < modules.size(); ++i) {
        base[i].flag = DFlag{modules[i].d, {}};
        base[i].levels_admissible = base[i].singletons_admissible = true;
    }
    run_batch(base, need);
    std::set<DSet> admissible;
    for (const auto& r : base)
        if (r.admissible()) admissible.insert(r.flag.d0);
    log("m=0: " + std::to_string(base.size()) + " modules, " + std::to_string(admissible.size()) + " admissible");
    out = std::move(base);

    for (int m = 1; m <= m_max; ++m) {
        std::vector<FlagResult> batch;
        for (const auto& mod : modules) {
            if (!admissible.count(mod.d)) continue;
            for (auto& f : dflags_over(sg, mod.d, m)) {
                FlagResult r;
                r.flag = f;
                r.levels_admissible = true;
                for (int i = 1; i <= m; ++i)
                    if (!admissible.count(f.level(i))) r.levels_admissible = false;
                r.singletons_admissible = true;
                for (int g : f.gaps) {
                    DSet s = f.d0;
                    s.insert(std::upper_bound(s.begin(), s.end(), g), g);
                    if (!admissible.count(s)) r.singletons_admissible = false;
                }
                batch.push_back(std::move(r));
            }
        }
        std::vector<char> need_solve(batch.size());
        for (size_t i = 0; i < batch.size(); ++i)
            need_solve[i] = batch[i].levels_admissible || opts.solve_all_flags;
        run_batch(batch, need_solve);
        size_t adm = std::count_if(batch.begin(), batch.end(), [](const FlagResult& r) { return r.admissible(); });
        log("m=" + std::to_string(m) + ": " + std::to_string(batch.size()) + " flags, " + std::to_string(adm) + " admissible");
        for (auto& r : batch) out.push_back(std::move(r));
    }
    return out;
}

PipelineSummary summarize(const std::vector<FlagResult>& results, const Semigroup& sg, int m_max, int a_bound) {
    PipelineSummary s;
    std::vector<FlagCount> fc;
    s.euler = 0;
    for (const auto& r : results) {
        if (!r.admissible()) continue;
        fc.push_back({static_cast<int>(r.flag.d0.size()), r.flag.m(), &r.count});
        if (r.flag.m() == 0) s.euler += r.count.eval(1);
        if (r.status == CellStatus::nonaffine) ++s.nonaffine;
        s.admissible_per_m[r.flag.m()]++;
    }
    s.h = assemble(fc, sg.delta);
    s.truncated_in_a = m_max < a_bound;
    return s;
}

Superpoly singleton_admissible_t1(const std::vector<FlagResult>& results) {
    std::set<DSet> admissible;
    for (const auto& r : results)
        if (r.flag.m() == 0 && r.admissible()) admissible.insert(r.flag.d0);
    Superpoly h;
    for (const auto& r : results) {
        if (!admissible.count(r.flag.d0) || !r.singletons_admissible) continue;
        int e = static_cast<int>(r.flag.d0.size()) + r.flag.m();
        h.add({r.flag.m(), 0, e}, 1);
    }
    return h;
}

}  // namespace jacfac
