#include "jacfac/pipeline.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <set>
#include <iostream>
#include <sstream>

using namespace jacfac;
using nlohmann::json;

namespace {

struct Config {
    std::string curve, exponents, gamma;
    int m = -1;
    std::vector<int> primes;
    int trunc = 0;
    int jobs = 1;
    std::string format = "tsv";
    long budget = 50'000'000;
    std::string fixtures;
    std::string checkpoint;
    std::string slice;
    int q = 2;
    int residual_cap = 8;
    std::size_t term_limit = 50000;
    bool verbose = false;
    bool all_flags = false;
};

struct MismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<int> parse_list(const std::string& s) {
    std::vector<int> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, ',')) {
        if (item.find_first_not_of(" ") == std::string::npos) continue;
        out.push_back(std::stoi(item));
    }
    return out;
}

CurveSpec resolve_curve(const Config& cfg) {
    int modes = !cfg.curve.empty() + !cfg.exponents.empty() + !cfg.gamma.empty();
    if (modes != 1) throw std::invalid_argument("give exactly one of --curve, --exponents, --gamma");
    if (!cfg.curve.empty()) return parse_curve(cfg.curve);
    if (!cfg.exponents.empty()) return curve_from_exponents(parse_list(cfg.exponents));
    CurveSpec spec = canonical_curve(semigroup_generate(parse_list(cfg.gamma)).generators);
    std::cerr << "warning: analytic type inferred from the semigroup; using " << spec.text() << "\n";
    return spec;
}

PipelineOptions pipeline_options(const Config& cfg) {
    PipelineOptions o;
    o.m_max = cfg.m;
    o.jobs = cfg.jobs;
    o.truncation = cfg.trunc;
    o.field_sizes = cfg.primes;
    o.checkpoint = cfg.checkpoint;
    o.solve_all_flags = cfg.all_flags;
    o.solve.residual_cap = cfg.residual_cap;
    o.solve.term_limit = cfg.term_limit;
    if (cfg.verbose) o.log = [](const std::string& s) { std::cerr << s << "\n"; };
    return o;
}

std::string gaps_text(const std::vector<int>& g) {
    std::string s;
    for (size_t i = 0; i < g.size(); ++i) s += (i ? "," : "") + std::to_string(g[i]);
    return s;
}

json result_json(const FlagResult& r, const Semigroup& sg) {
    json j;
    j["d0"] = r.flag.d0;
    j["d0_primitive"] = primitive(sg, r.flag.d0);
    j["gaps"] = r.flag.gaps;
    j["m"] = r.flag.m();
    j["status"] = status_name(r.status);
    j["vars"] = r.vars;
    j["dim"] = r.dim;
    j["count_poly"] = r.count.str();
    j["euler_contrib"] = r.count.eval(1).get_str();
    j["residual"] = r.residual;
    j["excluded_primes"] = r.excluded_primes;
    j["levels_admissible"] = r.levels_admissible;
    j["singletons_admissible"] = r.singletons_admissible;
    return j;
}

void emit_results(const std::vector<FlagResult>& rs, const Semigroup& sg, const std::string& format) {
    if (format == "json") {
        json arr = json::array();
        for (const auto& r : rs) arr.push_back(result_json(r, sg));
        std::cout << arr.dump(2) << "\n";
        return;
    }
    std::cout << "D\tg\tdim\tstatus\tcount_poly\tD_primitive\n";
    for (const auto& r : rs)
        std::cout << format_dset(r.flag.d0) << "\t" << gaps_text(r.flag.gaps) << "\t" << r.dim << "\t"
                  << status_name(r.status) << "\t" << r.count.str() << "\t" << format_dset(primitive(sg, r.flag.d0))
                  << "\n";
}

CableParams cable_of(const Semigroup& sg) {
    return newton_to_cable(normalize_first_pair(exponents_to_newton(exponents_from_semigroup_generators(sg.generators))));
}

int cmd_semigroup(const Config& cfg) {
    Semigroup sg;
    if (!cfg.gamma.empty() && cfg.curve.empty() && cfg.exponents.empty()) {
        sg = semigroup_generate(parse_list(cfg.gamma));
    } else {
        sg = valuation_basis(resolve_curve(cfg), cfg.trunc).semigroup;
    }
    json j;
    if (sg.generators.size() >= 2) {
        CableParams cab = cable_of(sg);
        j = sg.to_json(&cab);
        j["link"] = cab.link();
        j["a_degree_bound"] = a_bound_of(sg);
    } else {
        j = sg.to_json();
    }
    if (cfg.format == "json") {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "generators\t" << gaps_text(sg.generators) << "\ndelta\t" << sg.delta << "\nconductor\t"
                  << sg.conductor << "\ngaps\t" << gaps_text(sg.gaps) << "\n";
        if (j.contains("link")) std::cout << "link\t" << j["link"].get<std::string>() << "\n";
    }
    return 0;
}

int cmd_modules(const Config& cfg) {
    Semigroup sg = !cfg.gamma.empty() ? semigroup_generate(parse_list(cfg.gamma))
                                      : valuation_basis(resolve_curve(cfg), cfg.trunc).semigroup;
    auto mods = enumerate_standard_modules(sg);
    if (cfg.format == "json") {
        json arr = json::array();
        for (const auto& m : mods) arr.push_back({{"d_set", m.d}, {"primitive", primitive(sg, m.d)}, {"size", m.size()}});
        std::cout << arr.dump(2) << "\n";
    } else {
        std::cout << "D\tD_primitive\tsize\n";
        for (const auto& m : mods)
            std::cout << format_dset(m.d) << "\t" << format_dset(primitive(sg, m.d)) << "\t" << m.size() << "\n";
    }
    return 0;
}

std::vector<FlagResult> run(Pipeline& p, const Config& cfg) { return p.run_flags(pipeline_options(cfg)); }

int cmd_dims(const Config& cfg) {
    CurveSpec spec = resolve_curve(cfg);
    Config c = cfg;
    int m = cfg.m < 0 ? 0 : cfg.m;
    c.m = m;
    Pipeline p(spec, pipeline_options(c));
    auto rs = run(p, c);
    std::vector<FlagResult> rows;
    for (auto& r : rs)
        if (r.flag.m() == m && r.admissible()) rows.push_back(r);
    emit_results(rows, p.semigroup(), cfg.format);
    return 0;
}

int cmd_nonadmissible(const Config& cfg) {
    CurveSpec spec = resolve_curve(cfg);
    Config c = cfg;
    c.m = cfg.m < 0 ? 0 : cfg.m;
    Pipeline p(spec, pipeline_options(c));
    auto rs = run(p, c);
    const Semigroup& sg = p.semigroup();
    if (cfg.format == "json") {
        json arr = json::array();
        for (const auto& r : rs)
            if (!r.admissible()) arr.push_back(result_json(r, sg));
        std::cout << arr.dump(2) << "\n";
        return 0;
    }
    std::cout << "D\tg\tD_primitive\tlevels_admissible\tsingletons_admissible\n";
    for (const auto& r : rs)
        if (!r.admissible())
            std::cout << format_dset(r.flag.d0) << "\t" << gaps_text(r.flag.gaps) << "\t"
                      << format_dset(primitive(sg, r.flag.d0)) << "\t" << r.levels_admissible << "\t"
                      << r.singletons_admissible << "\n";
    return 0;
}

int cmd_nonaffine(const Config& cfg) {
    CurveSpec spec = resolve_curve(cfg);
    Pipeline p(spec, pipeline_options(cfg));
    auto rs = run(p, cfg);
    const Semigroup& sg = p.semigroup();
    std::vector<FlagResult> rows;
    for (const auto& r : rs)
        if (r.status == CellStatus::nonaffine) rows.push_back(r);
    if (cfg.format == "json") {
        emit_results(rows, sg, "json");
        return 0;
    }
    std::cout << "D_primitive\tg\tsize\tcount_poly\tcontribution\tresidual\n";
    for (const auto& r : rows) {
        Superpoly h = assemble({{static_cast<int>(r.flag.d0.size()), r.flag.m(), &r.count}}, sg.delta);
        std::string res;
        for (const auto& s : r.residual) res += (res.empty() ? "" : "; ") + s;
        std::cout << format_dset(primitive(sg, r.flag.d0)) << "\t" << gaps_text(r.flag.gaps) << "\t" << r.flag.d0.size()
                  << "\t" << r.count.str() << "\t" << h.str() << "\t" << res << "\n";
    }
    return 0;
}

PipelineSummary full_summary(const Config& cfg, Pipeline& p, std::vector<FlagResult>* keep = nullptr) {
    auto rs = run(p, cfg);
    auto s = summarize(rs, p.semigroup(), p.m_max, p.a_bound);
    if (s.truncated_in_a) std::cerr << "note: truncated in a (m <= " << p.m_max << " of " << p.a_bound << ")\n";
    if (keep) *keep = std::move(rs);
    return s;
}

int cmd_superpoly(const Config& cfg) {
    Pipeline p(resolve_curve(cfg), pipeline_options(cfg));
    auto s = full_summary(cfg, p);
    Superpoly h = cfg.slice.empty() ? s.h : apply_slice(s.h, cfg.slice);
    if (cfg.format == "json") {
        json j;
        j["curve"] = p.spec.text();
        j["gamma"] = p.semigroup().id();
        j["delta"] = p.semigroup().delta;
        j["m_max"] = p.m_max;
        j["truncated_in_a"] = s.truncated_in_a;
        j["superpolynomial"] = h.str();
        auto sd = superduality_check(s.h);
        j["superduality"] = sd ? json{sd->first, sd->second} : json(nullptr);
        j["standard_params"] = to_standard_params(h).str();
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << h.str() << "\n";
    }
    return 0;
}

int cmd_betti(const Config& cfg) {
    Config c = cfg;
    c.m = 0;
    Pipeline p(resolve_curve(c), pipeline_options(c));
    auto s = full_summary(c, p);
    std::cout << betti(s.h).str() << "\n";
    return 0;
}

int cmd_euler(const Config& cfg) {
    Config c = cfg;
    c.m = 0;
    Pipeline p(resolve_curve(c), pipeline_options(c));
    auto s = full_summary(c, p);
    std::cout << s.euler.get_str() << "\n";
    return 0;
}

int cmd_oracle(const Config& cfg) {
    CurveSpec spec = resolve_curve(cfg);
    int m = cfg.m < 0 ? 2 : cfg.m;
    Config c = cfg;
    c.m = m;
    auto t0 = std::chrono::steady_clock::now();
    OracleReport rep = brute_force_flags(spec, cfg.q, m, cfg.budget);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    Pipeline p(spec, pipeline_options(c));
    auto rs = run(p, c);
    int mismatches = 0;
    for (const auto& r : rs) {
        auto it = rep.counts.find({r.flag.d0, r.flag.gaps});
        long brute = it == rep.counts.end() ? 0 : it->second;
        mpz_class pred = r.count.eval(cfg.q);
        if (pred != brute) {
            ++mismatches;
            std::cout << "mismatch\t" << format_dset(r.flag.d0) << "\t" << gaps_text(r.flag.gaps) << "\tpredicted "
                      << pred.get_str() << "\tbrute " << brute << "\n";
        }
    }
    std::set<std::pair<DSet, std::vector<int>>> listed;
    for (const auto& r : rs) listed.insert({r.flag.d0, r.flag.gaps});
    for (const auto& [key, n] : rep.counts) {
        if (n == 0 || listed.count(key)) continue;
        ++mismatches;
        std::cout << "mismatch\t" << format_dset(key.first) << "\t" << gaps_text(key.second) << "\tpredicted 0\tbrute "
                  << n << "\n";
    }
    std::cout << "field\t" << cfg.q << "\nbudget\t" << cfg.budget << "\nwork\t" << rep.work << "\nseconds\t" << secs
              << "\nflags\t" << rs.size() << "\nmismatches\t" << mismatches << "\n";
    if (mismatches) throw MismatchError("oracle mismatch");
    return 0;
}

int cmd_compare(const Config& cfg) {
    Pipeline p(resolve_curve(cfg), pipeline_options(cfg));
    std::string dir = fixtures_dir(cfg.fixtures);
    std::string id = p.semigroup().id();
    std::vector<std::string> slices;
    if (!cfg.slice.empty()) slices.push_back(cfg.slice);
    else slices = list_fixture_slices(dir, id);
    if (slices.empty()) throw std::invalid_argument("no fixtures for " + id + " in " + dir);
    auto s = full_summary(cfg, p);
    int bad = 0;
    for (const auto& sl : slices) {
        Superpoly expected = load_fixture(fixture_path(dir, id, sl));
        Superpoly got = apply_slice(s.h, sl);
        if (s.truncated_in_a) {
            Superpoly e2;
            for (const auto& [e, c] : expected.terms)
                if (e[0] <= p.m_max) e2.add(e, c);
            expected = e2;
        }
        auto diff = compare_polys(got, expected);
        std::cout << (diff.empty() ? "PASS" : "FAIL") << "\t" << id << "/" << sl << "\t" << diff.size()
                  << " differing coefficients\n";
        if (!diff.empty()) {
            std::cout << format_diff(diff, got.names);
            ++bad;
        }
    }
    if (bad) throw MismatchError("fixture mismatch");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"jacfac: flagged Jacobian factors of plane curve singularities"};
    app.require_subcommand(1);
    Config cfg;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--curve", cfg.curve, "parametrization, e.g. \"x=z^4, y=z^6+z^7\"");
        sub->add_option("--exponents", cfg.exponents, "characteristic exponents e,b1,...");
        sub->add_option("--gamma", cfg.gamma, "semigroup generators (canonical parametrization)");
        sub->add_option("--m", cfg.m, "maximal flag length (default: a-degree bound)");
        sub->add_option("--primes", [&](const CLI::results_t& r) {
            for (const auto& s : r)
                for (int v : parse_list(s)) cfg.primes.push_back(v);
            return true;
        }, "field sizes used for interpolation");
        sub->add_option("--trunc", cfg.trunc, "series truncation order (0: automatic)");
        sub->add_option("--jobs", cfg.jobs, "worker threads");
        sub->add_option("--format", cfg.format, "json|tsv|poly")->check(CLI::IsMember({"json", "tsv", "poly"}));
        sub->add_option("--budget", cfg.budget, "brute-force work limit");
        sub->add_option("--fixtures-dir", cfg.fixtures, "fixture directory");
        sub->add_option("--checkpoint", cfg.checkpoint, "append-only per-cell results file");
        sub->add_option("--residual-cap", cfg.residual_cap, "largest residual system solved by counting");
        sub->add_option("--term-limit", cfg.term_limit, "growth in terms after which an elimination order is abandoned (0: no limit)");
        sub->add_flag("--all-flags", cfg.all_flags, "solve flags with a non-admissible level too");
        sub->add_flag("-v,--verbose", cfg.verbose, "progress on stderr");
    };
    std::map<std::string, std::function<int(const Config&)>> cmds{
        {"semigroup", cmd_semigroup}, {"modules", cmd_modules},   {"dims", cmd_dims},
        {"superpoly", cmd_superpoly}, {"betti", cmd_betti},       {"euler", cmd_euler},
        {"oracle", cmd_oracle},       {"compare", cmd_compare},   {"nonadmissible", cmd_nonadmissible},
        {"nonaffine", cmd_nonaffine},
    };
    const std::map<std::string, std::string> help{
        {"semigroup", "semigroup, gaps, delta, conductor, cable data"},
        {"modules", "standard Gamma-modules"},
        {"dims", "admissible flags of length --m with cell dimensions"},
        {"superpoly", "geometric superpolynomial"},
        {"betti", "H(q=1, a=0)"},
        {"euler", "Euler number of the Jacobian factor"},
        {"oracle", "brute-force counts over GF(--q) against count polynomials"},
        {"compare", "compare against fixtures"},
        {"nonadmissible", "D-sets (and flags) with empty cells"},
        {"nonaffine", "non-affine cells with count polynomials"},
    };
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, fn] : cmds) {
        auto* sub = app.add_subcommand(name, help.at(name));
        add_common(sub);
        if (name == "oracle") sub->add_option("--q", cfg.q, "field size");
        if (name == "compare" || name == "superpoly") sub->add_option("--slice", cfg.slice, "full|t1|a<k>|a<k>_t1|betti");
        subs[name] = sub;
    }
    CLI11_PARSE(app, argc, argv);
    try {
        for (const auto& [name, sub] : subs)
            if (sub->parsed()) return cmds[name](cfg);
    } catch (const MismatchError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
