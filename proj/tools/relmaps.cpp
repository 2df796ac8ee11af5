// relmaps: decide smoothability of genus-zero relative maps to rational
// stacky curves, compute explicit smoothing recipes with exact verification,
// and enumerate realizable boundary strata.
//
// Exit codes: 0 = affirmative verdict / success, 1 = negative verdict,
//             2 = input error, 3 = capacity error.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "relmaps/canonical.hpp"
#include "relmaps/conditions.hpp"
#include "relmaps/errors.hpp"
#include "relmaps/graph.hpp"
#include "relmaps/hurwitz.hpp"
#include "relmaps/json_io.hpp"
#include "relmaps/smoothing.hpp"
#include "relmaps/strata.hpp"
#include "relmaps/twisted.hpp"

namespace {

using namespace relmaps;
using nlohmann::json;

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitInput = 2;
constexpr int kExitCapacity = 3;

// ---------------------------------------------------------------------------
// Input plumbing

std::string read_source(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

DualMapGraph load_graph(const std::string& path) {
    return graph_from_json_text(read_source(path), path);
}

// Inline tangency grammar: semicolon-separated clauses, each either
// "free=N" or "(t1,t2,...)@label", e.g. "(1,1)@inf;(2)@x0;free=1".
TangencyData gamma_from_inline(const std::string& text) {
    TangencyData gamma;
    std::size_t pos = 0;
    auto fail = [&](const std::string& m) {
        throw input_error("tangency spec '" + text + "': " + m);
    };
    while (pos < text.size()) {
        std::size_t end = text.find(';', pos);
        if (end == std::string::npos) end = text.size();
        std::string clause = text.substr(pos, end - pos);
        pos = end + 1;
        // trim
        while (!clause.empty() && std::isspace(static_cast<unsigned char>(clause.front())))
            clause.erase(clause.begin());
        while (!clause.empty() && std::isspace(static_cast<unsigned char>(clause.back())))
            clause.pop_back();
        if (clause.empty()) continue;
        if (clause.rfind("free=", 0) == 0) {
            try {
                gamma.free_marks += std::stoi(clause.substr(5));
            } catch (const std::exception&) {
                fail("bad free-mark count in '" + clause + "'");
            }
            continue;
        }
        if (clause.front() != '(') fail("expected '(t1,...)@point' or 'free=N' in '" + clause + "'");
        const std::size_t close = clause.find(')');
        if (close == std::string::npos) fail("missing ')' in '" + clause + "'");
        if (close + 1 >= clause.size() || clause[close + 1] != '@')
            fail("missing '@point' in '" + clause + "'");
        const std::string label = clause.substr(close + 2);
        if (label.empty()) fail("empty point label in '" + clause + "'");
        RelativePointData rp;
        rp.point = label;
        std::string inner = clause.substr(1, close - 1);
        std::stringstream ss(inner);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                rp.tangencies.push_back(std::stoi(tok));
            } catch (const std::exception&) {
                fail("bad tangency '" + tok + "' in '" + clause + "'");
            }
        }
        if (rp.tangencies.empty()) fail("no tangencies in '" + clause + "'");
        gamma.relative.push_back(std::move(rp));
    }
    validate_tangency_data(gamma);
    return gamma;
}

TangencyData load_gamma(const std::string& file, const std::string& inline_spec) {
    if (!inline_spec.empty()) return gamma_from_inline(inline_spec);
    if (file.empty()) throw input_error("no tangency data given (file or --gamma)");
    return gamma_from_json_text(read_source(file), file);
}

// "EDGE:TARGET,EDGE:TARGET,..."
std::map<int, long long> parse_multiples(const std::string& text) {
    std::map<int, long long> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        const std::size_t colon = tok.find(':');
        if (colon == std::string::npos)
            throw input_error("--multiples entry '" + tok + "' is not EDGE:TARGET");
        try {
            out[std::stoi(tok.substr(0, colon))] = std::stoll(tok.substr(colon + 1));
        } catch (const std::exception&) {
            throw input_error("--multiples entry '" + tok + "' is not EDGE:TARGET");
        }
    }
    return out;
}

// "point:2,1" -> PointProfile at a relative point (special points by
// "special:label:2,1"; bare labels are relative points).
PointProfile parse_profile(const std::string& text) {
    const std::size_t colon = text.rfind(':');
    if (colon == std::string::npos || colon + 1 >= text.size())
        throw input_error("--profile '" + text + "' is not POINT:p1,p2,...");
    std::string head = text.substr(0, colon);
    PointProfile pp;
    if (head.rfind("special:", 0) == 0)
        pp.point = TargetPointId::special(head.substr(8));
    else if (head == "*" || head.empty())
        pp.point = TargetPointId::generic();
    else
        pp.point = TargetPointId::relative(head);
    std::stringstream ss(text.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            pp.parts.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw input_error("--profile '" + text + "': bad part '" + tok + "'");
        }
    }
    sort_partition(pp.parts);
    return pp;
}

StackyTarget parse_wps(const std::string& text) {
    const std::size_t comma = text.find(',');
    if (comma == std::string::npos)
        throw input_error("--wps expects 'a,b', got '" + text + "'");
    try {
        return StackyTarget::weighted_projective(std::stoll(text.substr(0, comma)),
                                                 std::stoll(text.substr(comma + 1)));
    } catch (const input_error&) {
        throw;
    } catch (const std::exception&) {
        throw input_error("--wps expects 'a,b', got '" + text + "'");
    }
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

// ---------------------------------------------------------------------------
// Shared option state

struct Options {
    bool as_json = false;
    long long seed = 0;
    bool seed_set = false;
    int jobs = 1;
    std::string format = "table";
};

json meta(const Options& opt) {
    json m{{"jobs", opt.jobs}};
    if (opt.seed_set) m["seed"] = opt.seed;
    return m;
}

// ---------------------------------------------------------------------------
// Subcommand bodies (each returns the process exit code)

int run_validate(const std::string& graph_path, const Options& opt) {
    DualMapGraph g = graph_from_json_text(read_source(graph_path), graph_path);
    ValidationReport report = validate(g);
    if (opt.as_json) {
        emit(to_json(report));
    } else if (report.empty()) {
        std::cout << "valid: " << g.vertices.size() << " vertices, " << g.edges.size()
                  << " edges, " << g.marks.size() << " marks over " << g.target.display()
                  << "\n";
    } else {
        std::cout << "invalid: " << report.size() << " issue(s)\n";
        for (const auto& issue : report)
            std::cout << "  [" << issue.code << "] " << issue.message << "\n";
    }
    return report.empty() ? kExitYes : kExitNo;
}

void print_condition_report(const ConditionReport& report) {
    static const char* kNames[3] = {"evaluation", "fiber containment", "ramification balance"};
    for (const auto& pr : report) {
        std::cout << "point '" << pr.point << "': "
                  << (pr.all_pass() ? "PASS" : "FAIL") << "\n";
        for (const auto& c : pr.conditions) {
            std::cout << "  (" << c.index << ") " << kNames[c.index - 1] << ": "
                      << (c.pass ? "pass" : "FAIL") << "\n";
            for (const auto& w : c.witnesses) {
                std::cout << "      " << w.kind;
                if (w.mark >= 0) std::cout << " mark=" << w.mark;
                if (w.vertex >= 0) std::cout << " vertex=" << w.vertex;
                if (w.edge >= 0) std::cout << " edge=" << w.edge;
                if (!w.vertices.empty()) {
                    std::cout << " vertices=[";
                    for (std::size_t i = 0; i < w.vertices.size(); ++i)
                        std::cout << (i ? "," : "") << w.vertices[i];
                    std::cout << "]";
                }
                std::cout << " (" << w.lhs << " vs " << w.rhs << ")\n";
            }
        }
    }
}

int run_check(const std::string& graph_path, const std::string& gamma_file,
              const std::string& gamma_inline, const Options& opt) {
    DualMapGraph g = load_graph(graph_path);
    TangencyData gamma = load_gamma(gamma_file, gamma_inline);
    ConditionReport report = check_relative(g, gamma);
    const bool k = all_pass(report);
    const bool n = k && is_N_Gamma(g, gamma);
    const bool m = k && is_M_Gamma(g, gamma);
    if (opt.as_json) {
        json j = to_json(report);
        j["is_K"] = k;
        j["is_N"] = n;
        j["is_M"] = m;
        emit(j);
    } else {
        print_condition_report(report);
        std::cout << (k ? "smoothable" : "not smoothable") << " (is_K=" << k << ", is_N=" << n
                  << ", is_M=" << m << ")\n";
    }
    return k ? kExitYes : kExitNo;
}

int run_reduce(const std::string& graph_path, const Options& opt) {
    DualMapGraph g = load_graph(graph_path);
    DualMapGraph reduced = reduce_contracted(g);
    if (opt.as_json) {
        emit(to_json(reduced));
    } else {
        std::cout << "reduced: " << g.vertices.size() << " -> " << reduced.vertices.size()
                  << " vertices, " << g.edges.size() << " -> " << reduced.edges.size()
                  << " edges\n"
                  << to_json(reduced).dump(2) << "\n";
    }
    return kExitYes;
}

int run_recipe(const std::string& graph_path, const std::string& point,
               const std::string& multiples, bool skip_verify, const Options& opt) {
    DualMapGraph g = load_graph(graph_path);
    const std::vector<std::string> labels = relative_labels(g);
    if (std::find(labels.begin(), labels.end(), point) == labels.end())
        throw input_error("recipe: the graph has no relative point '" + point + "'");
    MultiplierMap multipliers;
    if (!multiples.empty())
        multipliers = resolve_multiples(g, point, parse_multiples(multiples));
    SmoothingRecipe rec = recipe(g, point, multipliers);
    json j = to_json(rec);
    bool ok = true;
    if (!skip_verify) {
        IntersectionReport ir = verify_intersections(g, point, rec);
        DegreeReport dr = verify_degree_zero(g, point, rec);
        ok = ir.all_pullback && ir.all_descent && ir.cross_terms_zero && dr.all_zero;
        j["verify"] = {{"intersections", to_json(ir)}, {"degree_zero", to_json(dr)},
                       {"pass", ok}};
    }
    if (!multipliers.empty()) {
        json mj = json::object();
        for (const auto& [edge, r] : multipliers) mj[std::to_string(edge)] = r;
        j["multipliers"] = mj;
    }
    j["extension"] = to_json(simple_extension(g, rec));
    if (opt.as_json) {
        emit(j);
    } else {
        for (const auto& comp : rec.components) {
            std::cout << "component E(vertex " << comp.vertex << "): a = " << comp.a.str()
                      << "\n";
            for (const auto& node : comp.nodes)
                std::cout << "  node edge " << node.edge << " -> active " << node.active_vertex
                          << ": e = " << node.e << ", r = " << node.r
                          << ", m = " << node.m.str() << " (" << node.singularity() << ")\n";
        }
        if (!skip_verify)
            std::cout << "verification: " << (ok ? "all identities hold" : "FAILED") << "\n";
    }
    return ok ? kExitYes : kExitNo;
}

int run_hurwitz(int degree, const std::vector<std::string>& profile_specs, int dmax,
                bool no_covers, const Options& opt) {
    RamificationProblem p;
    p.degree = degree;
    for (const auto& spec : profile_specs) p.prescribed.push_back(parse_profile(spec));
    RealizabilityOptions ropts;
    if (dmax > kDefaultDegreeCap)
        std::cerr << "warning: raising the degree cap to " << dmax
                  << "; search cost grows factorially\n";
    if (dmax > 0) ropts.degree_cap = dmax;
    ropts.with_covers = !no_covers;
    RealizabilityReport report = realizable(p, ropts);
    if (opt.as_json) {
        json j = to_json(report);
        j["meta"] = meta(opt);
        emit(j);
    } else {
        std::cout << "degree " << degree << ", " << p.prescribed.size()
                  << " prescribed point(s)" << (report.partial ? " (partial)" : "") << "\n";
        for (const auto& c : report.completions) {
            std::cout << "  [";
            for (std::size_t i = 0; i < c.profiles.size(); ++i) {
                if (i) std::cout << " | ";
                std::cout << c.profiles[i].point.display() << ":(";
                for (std::size_t k = 0; k < c.profiles[i].parts.size(); ++k)
                    std::cout << (k ? "," : "") << c.profiles[i].parts[k];
                std::cout << ")";
            }
            std::cout << "] b=" << c.extra_transpositions << " exists=" << c.exists
                      << " tuples=" << c.tuples.str() << " weighted=" << c.weighted.str();
            if (c.covers) std::cout << " covers=" << c.covers->str();
            std::cout << "\n";
        }
        std::cout << (report.exists ? "realizable" : "not realizable")
                  << "; weighted total " << report.weighted_total.str();
        if (report.covers_total) std::cout << ", covers " << report.covers_total->str();
        std::cout << "\n";
    }
    return report.exists ? kExitYes : kExitNo;
}

int run_enumerate(const std::string& gamma_file, const std::string& gamma_inline, int degree,
                  const std::string& wps, int dmax, const Options& opt) {
    TangencyData gamma = load_gamma(gamma_file, gamma_inline);
    StackyTarget target =
        wps.empty() ? StackyTarget::weighted_projective(1, 1) : parse_wps(wps);
    EnumerateOptions eopts;
    eopts.jobs = opt.jobs;
    if (dmax > 0) {
        if (dmax > eopts.degree_cap)
            std::cerr << "warning: raising the enumeration degree cap to " << dmax << "\n";
        eopts.degree_cap = dmax;
        eopts.realizability.degree_cap = std::max(eopts.realizability.degree_cap, dmax);
    }
    std::vector<Stratum> strata = enumerate_strata(gamma, target, degree, eopts);
    if (opt.format == "dot-bundle") {
        for (std::size_t i = 0; i < strata.size(); ++i) {
            std::cout << "// stratum " << i << ": dimension " << strata[i].dimension
                      << ", codimension " << strata[i].codimension << ", is_M "
                      << strata[i].is_M << "\n"
                      << to_dot(strata[i].graph) << "\n";
        }
        return kExitYes;
    }
    if (opt.as_json || opt.format == "json") {
        json j = strata_to_json(gamma, degree, strata);
        j["meta"] = meta(opt);
        emit(j);
        return kExitYes;
    }
    std::cout << strata.size() << " stratum/strata, moduli dimension "
              << moduli_dimension(gamma, degree) << "\n";
    for (const auto& s : strata) {
        std::cout << "  dim=" << s.dimension << " codim=" << s.codimension
                  << " M=" << s.is_M << " N=" << s.is_N << " K=" << s.is_K << "  "
                  << canonical_key(s.graph) << "\n";
    }
    return kExitYes;
}

int run_elliptic(const std::string& config_path, const Options& opt) {
    EllipticConfig cfg =
        elliptic_config_from_json(parse_json_text(read_source(config_path), config_path));
    EllipticTranslation t = elliptic_to_gamma(cfg);
    if (opt.as_json) {
        emit(to_json(t));
    } else {
        std::cout << "degree " << t.graph.degree << " over " << t.graph.target.display()
                  << "; tangencies at '" << kEllipticInfinity << "':";
        for (int d : t.gamma.relative.at(0).tangencies) std::cout << " " << d;
        std::cout << "\n";
        print_condition_report(t.report);
        std::cout << (t.smoothable ? "smoothable" : "not smoothable") << "\n";
    }
    return t.smoothable ? kExitYes : kExitNo;
}

int run_target(const std::string& wps, bool reduce_flag, const Options& opt) {
    StackyTarget t = parse_wps(wps);
    json j = to_json(t);
    if (reduce_flag) {
        CoprimeReduction r =
            coprime_reduce(t.special_points.at(0).order, t.special_points.at(1).order);
        j["coprime_reduction"] = to_json(r);
        if (opt.as_json) {
            emit(j);
        } else {
            std::cout << t.display() << " -> P(" << r.a << "," << r.b << ") etale under the "
                      << "degree-" << r.k << " reduction\n";
        }
        return kExitYes;
    }
    if (opt.as_json) {
        emit(j);
    } else {
        std::cout << t.display() << ": generic stabilizer " << t.generic_order << "\n";
        for (const auto& s : t.special_points)
            std::cout << "  special '" << s.label << "': order " << s.order << "\n";
    }
    return kExitYes;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "relmaps: smoothability of genus-zero relative maps to stacky rational curves\n"
        "(membership checks, exact smoothing recipes, cover realizability, strata)"};
    app.require_subcommand(1);

    Options opt;
    app.add_flag("--json", opt.as_json, "machine-readable JSON output");
    auto* seed_opt =
        app.add_option("--seed", opt.seed, "seed echoed into JSON metadata");
    app.add_option("--jobs", opt.jobs, "worker threads for enumeration")
        ->check(CLI::Range(1, 256));

    std::string graph_path, gamma_file, gamma_inline, point, multiples, config_path, wps;
    int degree = 0, dmax = 0;
    bool skip_verify = false, no_covers = false, reduce_flag = false;
    std::vector<std::string> profiles;

    auto* c_validate = app.add_subcommand("validate", "structural validation of a graph");
    c_validate->add_option("graph", graph_path, "graph JSON (path or -)")->required();

    auto* c_check = app.add_subcommand("check", "smoothability conditions at relative points");
    c_check->add_option("graph", graph_path, "graph JSON (path or -)")->required();
    c_check->add_option("gamma-file", gamma_file, "tangency data JSON (path or -)");
    c_check->add_option("--gamma", gamma_inline, "inline tangency spec, e.g. \"(1,1)@inf;free=1\"");

    auto* c_reduce = app.add_subcommand("reduce", "contract edges between contracted components");
    c_reduce->add_option("graph", graph_path, "graph JSON (path or -)")->required();

    auto* c_recipe = app.add_subcommand("recipe", "smoothing recipe over one relative point");
    c_recipe->add_option("graph", graph_path, "graph JSON (path or -)")->required();
    c_recipe->add_option("--point", point, "relative point label")->required();
    c_recipe->add_option("--multiples", multiples,
                         "divisibility targets EDGE:TARGET[,EDGE:TARGET...]");
    c_recipe->add_flag("--no-verify", skip_verify, "skip the exact intersection verification");

    auto* c_hurwitz = app.add_subcommand("hurwitz", "cover realizability and counts");
    c_hurwitz->add_option("--degree", degree, "covering degree")->required();
    c_hurwitz->add_option("--profile", profiles,
                          "ramification profile POINT:p1,p2,... (repeatable)");
    c_hurwitz->add_option("--dmax", dmax, "raise the degree cap (warning: factorial cost)");
    c_hurwitz->add_flag("--no-covers", no_covers, "skip the cover (orbit) count");

    auto* c_enumerate = app.add_subcommand("enumerate", "boundary strata for a prescription");
    c_enumerate->add_option("--gamma", gamma_inline, "inline tangency spec")->required(false);
    c_enumerate->add_option("--gamma-file", gamma_file, "tangency data JSON (path or -)");
    c_enumerate->add_option("--degree", degree, "total degree")->required();
    c_enumerate->add_option("--target", wps, "stacky target as 'a,b' (default 1,1)");
    c_enumerate->add_option("--dmax", dmax, "raise the enumeration degree cap");
    c_enumerate->add_option("--format", opt.format, "json | table | dot-bundle")
        ->check(CLI::IsMember({"json", "table", "dot-bundle"}))
        ->default_val("table");

    auto* c_elliptic = app.add_subcommand("elliptic",
                                          "translate an elliptic-surface configuration");
    c_elliptic->add_option("config", config_path, "configuration JSON (path or -)")->required();

    auto* c_target = app.add_subcommand("target", "describe a weighted projective line");
    c_target->add_option("--wps", wps, "weights 'a,b'")->required();
    c_target->add_flag("--reduce", reduce_flag, "include the coprime reduction");

    // Global flags (--json, --seed, --jobs) may appear after the subcommand.
    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    try {
        app.parse(argc, argv);
        opt.seed_set = seed_opt->count() > 0;
        if (c_validate->parsed()) return run_validate(graph_path, opt);
        if (c_check->parsed()) return run_check(graph_path, gamma_file, gamma_inline, opt);
        if (c_reduce->parsed()) return run_reduce(graph_path, opt);
        if (c_recipe->parsed())
            return run_recipe(graph_path, point, multiples, skip_verify, opt);
        if (c_hurwitz->parsed()) return run_hurwitz(degree, profiles, dmax, no_covers, opt);
        if (c_enumerate->parsed())
            return run_enumerate(gamma_file, gamma_inline, degree, wps, dmax, opt);
        if (c_elliptic->parsed()) return run_elliptic(config_path, opt);
        if (c_target->parsed()) return run_target(wps, reduce_flag, opt);
        std::cerr << app.help() << "\n";
        return kExitInput;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitYes : kExitInput;
    } catch (const capacity_error& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return kExitCapacity;
    } catch (const input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    }
}
