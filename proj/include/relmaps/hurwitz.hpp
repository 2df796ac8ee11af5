#pragma once
// Existence and counting of degree-d genus-zero covers of the line with
// prescribed ramification profiles.  Exact tuple counts come from a
// class-algebra convolution over symmetric-group conjugacy classes;
// transitive counts follow by an orbit inclusion-exclusion recursion; cover
// (conjugacy-orbit) counts come from a budgeted backtracking search over
// centralizer-canonical tuples.  All arithmetic is exact.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "relmaps/errors.hpp"
#include "relmaps/graph.hpp"
#include "relmaps/json_io.hpp"
#include "relmaps/numeric.hpp"
#include "relmaps/target.hpp"

namespace relmaps {

// A partition: weakly decreasing list of positive parts.
using Partition = std::vector<int>;

inline int partition_sum(const Partition& p) {
    int s = 0;
    for (int part : p) s += part;
    return s;
}

inline void sort_partition(Partition& p) { std::sort(p.begin(), p.end(), std::greater<int>()); }

inline bool is_identity_partition(const Partition& p) {
    return std::all_of(p.begin(), p.end(), [](int part) { return part == 1; });
}

// All partitions of n, in descending lexicographic order: (n), (n-1,1), ..., (1^n).
inline std::vector<Partition> partitions_of(int n) {
    std::vector<Partition> out;
    Partition cur;
    auto rec = [&](auto&& self, int rest, int max_part) -> void {
        if (rest == 0) {
            out.push_back(cur);
            return;
        }
        for (int part = std::min(rest, max_part); part >= 1; --part) {
            cur.push_back(part);
            self(self, rest - part, part);
            cur.pop_back();
        }
    };
    if (n >= 0) rec(rec, n, n == 0 ? 1 : n);
    return out;
}

namespace hdetail {

// Permutations of {0..d-1} as image vectors; compose(a,b) applies b first.
using Perm = std::vector<int>;

inline Perm identity_perm(int d) {
    Perm p(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) p[static_cast<std::size_t>(i)] = i;
    return p;
}

inline Perm compose(const Perm& a, const Perm& b) {
    Perm c(b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
        c[i] = a[static_cast<std::size_t>(b[i])];
    return c;
}

inline Perm inverse(const Perm& a) {
    Perm inv(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        inv[static_cast<std::size_t>(a[i])] = static_cast<int>(i);
    return inv;
}

inline Partition cycle_type(const Perm& p) {
    Partition type;
    std::vector<bool> seen(p.size(), false);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (seen[i]) continue;
        int len = 0;
        std::size_t j = i;
        while (!seen[j]) {
            seen[j] = true;
            j = static_cast<std::size_t>(p[j]);
            ++len;
        }
        type.push_back(len);
    }
    sort_partition(type);
    return type;
}

// Canonical class representative: consecutive cycles (0 1 .. l1-1)(l1 ..)...
inline Perm rep_of_type(const Partition& type) {
    Perm p;
    int start = 0;
    for (int len : type) {
        for (int i = 0; i < len; ++i)
            p.push_back(start + (i + 1) % len);
        start += len;
    }
    return p;
}

// Minimal number of transpositions whose product has this cycle type.
inline int transposition_distance(const Partition& type) {
    return partition_sum(type) - static_cast<int>(type.size());
}

inline Int class_size(int d, const Partition& type) {
    // d! / prod_j (j^{m_j} * m_j!) over multiplicities m_j of part j.
    Int z = 1;
    std::map<int, int> mult;
    for (int part : type) ++mult[part];
    for (auto& [part, m] : mult) {
        for (int i = 0; i < m; ++i) z *= part;
        z *= factorial(m);
    }
    return factorial(d) / z;
}

struct ClassTable {
    int d = 0;
    std::vector<Partition> classes;   // partitions_of(d), descending lex
    std::map<Partition, int> index;   // partition -> position in `classes`
    std::vector<Int> size;            // conjugacy class sizes
    int identity = -1;                // index of (1^d)
    // structure[k][a][c] = #{(x,y) : type(x)=classes[a], type(y)=classes[c],
    //                         x*y = rep(classes[k])}
    std::vector<std::vector<std::vector<Int>>> structure;
};

// Build (and cache) the class table for S_d.  Safe for concurrent callers.
inline const ClassTable& class_table(int d) {
    static std::mutex mu;
    static std::map<int, ClassTable> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(d);
    if (it != cache.end()) return it->second;

    ClassTable t;
    t.d = d;
    t.classes = partitions_of(d);
    const int nc = static_cast<int>(t.classes.size());
    for (int i = 0; i < nc; ++i) {
        t.index[t.classes[static_cast<std::size_t>(i)]] = i;
        t.size.push_back(class_size(d, t.classes[static_cast<std::size_t>(i)]));
        if (is_identity_partition(t.classes[static_cast<std::size_t>(i)])) t.identity = i;
    }
    std::vector<Perm> reps;
    reps.reserve(static_cast<std::size_t>(nc));
    for (const auto& cls : t.classes) reps.push_back(rep_of_type(cls));

    t.structure.assign(static_cast<std::size_t>(nc),
                       std::vector<std::vector<Int>>(
                           static_cast<std::size_t>(nc),
                           std::vector<Int>(static_cast<std::size_t>(nc), Int(0))));
    // One pass over S_d: for each x and each target class K, the partner
    // y = x^{-1} * rep(K) is determined; tally its class.
    Perm x = identity_perm(d);
    do {
        const int a = t.index.at(cycle_type(x));
        const Perm xinv = inverse(x);
        for (int k = 0; k < nc; ++k) {
            const Perm y = compose(xinv, reps[static_cast<std::size_t>(k)]);
            const int c = t.index.at(cycle_type(y));
            t.structure[static_cast<std::size_t>(k)][static_cast<std::size_t>(a)]
                       [static_cast<std::size_t>(c)] += 1;
        }
    } while (std::next_permutation(x.begin(), x.end()));

    return cache.emplace(d, std::move(t)).first->second;
}

// Canonical memo key: identity factors dropped (they force the identity
// permutation and do not change any count), remaining factors sorted.
inline std::vector<Partition> normalize_profile(std::vector<Partition> profile) {
    std::erase_if(profile, [](const Partition& p) { return is_identity_partition(p); });
    for (auto& p : profile) sort_partition(p);
    std::sort(profile.begin(), profile.end());
    return profile;
}

// Number of tuples (s_1..s_n), type(s_i) = profile[i], with product = identity
// (transitivity not required), via convolution in the class algebra.
inline Int count_product_identity(int d, const std::vector<Partition>& profile_in) {
    const auto profile = normalize_profile(profile_in);

    static std::mutex mu;
    static std::map<std::pair<int, std::vector<Partition>>, Int> memo;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(d, profile);
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    const ClassTable& t = class_table(d);
    const std::size_t nc = t.classes.size();
    // u[k] = coefficient, on each element of class k, of the running product
    // delta_id * Z(C_1) * ... (a class function throughout).
    std::vector<Int> u(nc, Int(0));
    u[static_cast<std::size_t>(t.identity)] = 1;
    for (const auto& cls : profile) {
        const int c = t.index.at(cls);
        std::vector<Int> next(nc, Int(0));
        for (std::size_t k = 0; k < nc; ++k) {
            Int acc = 0;
            for (std::size_t a = 0; a < nc; ++a) {
                if (u[a] == 0) continue;
                acc += u[a] * t.structure[k][a][static_cast<std::size_t>(c)];
            }
            next[k] = acc;
        }
        u = std::move(next);
    }
    Int result = u[static_cast<std::size_t>(t.identity)];
    memo.emplace(std::move(key), result);
    return result;
}

// All ways to split a partition into a sub-multiset summing to k and its
// complement; distinct as multiset pairs.
inline std::vector<std::pair<Partition, Partition>> splits_with_sum(const Partition& p, int k) {
    // Distinct part values with multiplicities, then choose how many copies
    // of each value go into the first half.
    std::vector<std::pair<int, int>> vals;  // (value, multiplicity), descending
    for (int part : p) {
        if (!vals.empty() && vals.back().first == part) ++vals.back().second;
        else vals.emplace_back(part, 1);
    }
    std::vector<std::pair<Partition, Partition>> out;
    Partition take, leave;
    auto rec = [&](auto&& self, std::size_t idx, int rest) -> void {
        if (idx == vals.size()) {
            if (rest == 0) out.emplace_back(take, leave);
            return;
        }
        const auto [value, mult] = vals[idx];
        for (int c = 0; c <= mult && c * value <= rest; ++c) {
            for (int i = 0; i < c; ++i) take.push_back(value);
            for (int i = 0; i < mult - c; ++i) leave.push_back(value);
            self(self, idx + 1, rest - c * value);
            for (int i = 0; i < c; ++i) take.pop_back();
            for (int i = 0; i < mult - c; ++i) leave.pop_back();
        }
    };
    rec(rec, 0, k);
    return out;
}

// Number of tuples with product = identity whose joint action is transitive.
// Inclusion-exclusion on the orbit of the first point: if that orbit has size
// k < d, the tuple splits into a transitive k-point piece and an arbitrary
// piece on the remaining d-k points, and every factor's cycles split with it.
inline Int count_transitive(int d, const std::vector<Partition>& profile_in) {
    const auto profile = normalize_profile(profile_in);

    static std::recursive_mutex mu;
    static std::map<std::pair<int, std::vector<Partition>>, Int> memo;
    std::lock_guard<std::recursive_mutex> lock(mu);
    auto key = std::make_pair(d, profile);
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    Int total = count_product_identity(d, profile);
    const std::size_t n = profile.size();
    for (int k = 1; k < d; ++k) {
        // Per-factor split options (sub-multiset of its parts summing to k).
        std::vector<std::vector<std::pair<Partition, Partition>>> options;
        options.reserve(n);
        bool feasible = true;
        for (const auto& cls : profile) {
            options.push_back(splits_with_sum(cls, k));
            if (options.back().empty()) { feasible = false; break; }
        }
        if (!feasible) continue;
        Int sub = 0;
        std::vector<Partition> mu_profile(n), nu_profile(n);
        auto rec = [&](auto&& self, std::size_t idx) -> void {
            if (idx == n) {
                sub += count_transitive(k, mu_profile) *
                       count_product_identity(d - k, nu_profile);
                return;
            }
            for (const auto& [mu_part, nu_part] : options[idx]) {
                mu_profile[idx] = mu_part;
                nu_profile[idx] = nu_part;
                self(self, idx + 1);
            }
        };
        rec(rec, 0);
        total -= binomial(d - 1, k - 1) * sub;
    }
    memo.emplace(std::move(key), total);
    return total;
}

// All elements of a conjugacy class (cached per degree and type).
inline const std::vector<Perm>& class_elements(int d, const Partition& type) {
    static std::mutex mu;
    static std::map<std::pair<int, Partition>, std::vector<Perm>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(d, type);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<Perm> elems;
    Perm x = identity_perm(d);
    do {
        if (cycle_type(x) == type) elems.push_back(x);
    } while (std::next_permutation(x.begin(), x.end()));
    return cache.emplace(std::move(key), std::move(elems)).first->second;
}

// Centralizer of rep_of_type(type) in S_d (cached).
inline const std::vector<Perm>& centralizer_of_rep(int d, const Partition& type) {
    static std::mutex mu;
    static std::map<std::pair<int, Partition>, std::vector<Perm>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(d, type);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const Perm rep = rep_of_type(type);
    std::vector<Perm> cent;
    Perm z = identity_perm(d);
    do {
        if (compose(z, rep) == compose(rep, z)) cent.push_back(z);
    } while (std::next_permutation(z.begin(), z.end()));
    return cache.emplace(std::move(key), std::move(cent)).first->second;
}

inline bool joint_action_transitive(int d, const std::vector<const Perm*>& perms) {
    std::vector<int> parent(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) parent[static_cast<std::size_t>(i)] = i;
    auto find = [&](int a) {
        while (parent[static_cast<std::size_t>(a)] != a) {
            parent[static_cast<std::size_t>(a)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
            a = parent[static_cast<std::size_t>(a)];
        }
        return a;
    };
    int components = d;
    for (const Perm* p : perms) {
        for (int i = 0; i < d; ++i) {
            int ra = find(i), rb = find((*p)[static_cast<std::size_t>(i)]);
            if (ra != rb) {
                parent[static_cast<std::size_t>(ra)] = rb;
                --components;
            }
        }
    }
    return components == 1;
}

// Number of covers: orbits, under simultaneous conjugation, of transitive
// product-identity tuples with the given class profile.  The factor in the
// largest class is pinned to its canonical representative (each orbit then
// corresponds to exactly one orbit under that representative's centralizer);
// the largest remaining factor is forced as the inverse of the partial
// product.  Returns nullopt if the node budget is exhausted.
inline std::optional<Int> count_covers(int d, const std::vector<Partition>& profile_in,
                                       long long budget) {
    const auto profile = normalize_profile(profile_in);
    if (profile.empty()) return Int(d == 1 ? 1 : 0);
    if (d == 1) return Int(1);  // only identity factors existed; all dropped
    if (profile.size() == 1) return Int(0);  // one non-identity factor cannot multiply to id
    if (count_transitive(d, profile) == 0) return Int(0);

    // Order classes by size: pin the largest, force the second largest,
    // enumerate the rest smallest-first.
    std::vector<std::size_t> order(profile.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return class_size(d, profile[a]) < class_size(d, profile[b]);
    });
    const Partition pinned_type = profile[order.back()];
    const Partition forced_type = profile[order[order.size() - 2]];
    std::vector<Partition> free_types;
    for (std::size_t i = 0; i + 2 < order.size(); ++i) free_types.push_back(profile[order[i]]);

    const Perm pinned = rep_of_type(pinned_type);
    const auto& centralizer = centralizer_of_rep(d, pinned_type);

    // Suffix transposition-distance sums over not-yet-chosen factors (free
    // factors from position i on, plus the forced factor).
    std::vector<int> suffix_distance(free_types.size() + 1, transposition_distance(forced_type));
    for (std::size_t i = free_types.size(); i-- > 0;)
        suffix_distance[i] = suffix_distance[i + 1] + transposition_distance(free_types[i]);

    long long work = 0;
    bool exhausted = false;
    std::set<std::vector<int>> orbits;
    std::vector<Perm> chosen(free_types.size());
    std::vector<Perm> zbuf;

    auto record_orbit = [&](const Perm& forced) {
        // Canonicalize (chosen..., forced) under the pinned factor's centralizer.
        work += static_cast<long long>(centralizer.size());
        std::vector<int> best;
        for (const Perm& z : centralizer) {
            const Perm zinv = inverse(z);
            std::vector<int> flat;
            flat.reserve((chosen.size() + 1) * static_cast<std::size_t>(d));
            for (const Perm* s : [&] {
                    std::vector<const Perm*> ptrs;
                    for (const auto& c : chosen) ptrs.push_back(&c);
                    ptrs.push_back(&forced);
                    return ptrs;
                }()) {
                Perm conj = compose(compose(z, *s), zinv);
                flat.insert(flat.end(), conj.begin(), conj.end());
            }
            if (best.empty() || flat < best) best = std::move(flat);
        }
        orbits.insert(std::move(best));
    };

    auto dfs = [&](auto&& self, std::size_t idx, const Perm& partial) -> void {
        if (exhausted) return;
        const int need = d - static_cast<int>(cycle_type(partial).size());
        if (need > suffix_distance[std::min(idx, free_types.size())]) return;
        if (((suffix_distance[std::min(idx, free_types.size())] - need) & 1) != 0) return;
        if (idx == free_types.size()) {
            const Perm forced = inverse(partial);
            if (cycle_type(forced) != forced_type) return;
            std::vector<const Perm*> all{&pinned, &forced};
            for (const auto& c : chosen) all.push_back(&c);
            if (!joint_action_transitive(d, all)) return;
            record_orbit(forced);
            if (work > budget) exhausted = true;
            return;
        }
        for (const Perm& s : class_elements(d, free_types[idx])) {
            if (++work > budget) { exhausted = true; return; }
            chosen[idx] = s;
            self(self, idx + 1, compose(partial, s));
        }
    };
    dfs(dfs, 0, pinned);
    if (exhausted) return std::nullopt;
    return Int(static_cast<long long>(orbits.size()));
}

}  // namespace hdetail

// ---------------------------------------------------------------------------
// Ramification problems

inline constexpr int kDefaultDegreeCap = 7;

struct PointProfile {
    TargetPointId point;
    Partition parts;  // weakly decreasing; sum <= degree (partial) or == (full)
};

struct RamificationProblem {
    int degree = 0;
    std::vector<PointProfile> prescribed;
};

inline void validate_problem(const RamificationProblem& p) {
    if (p.degree < 1) throw input_error("degree must be at least 1");
    std::set<std::string> named;
    for (const auto& pp : p.prescribed) {
        int sum = 0;
        for (int part : pp.parts) {
            if (part < 1)
                throw input_error("profile at " + pp.point.display() + ": parts must be positive");
            if (part > p.degree)
                throw input_error("profile at " + pp.point.display() + ": part " +
                                  std::to_string(part) + " exceeds degree " +
                                  std::to_string(p.degree));
            sum += part;
        }
        if (sum > p.degree)
            throw input_error("profile at " + pp.point.display() + ": parts sum to " +
                              std::to_string(sum) + ", exceeding degree " +
                              std::to_string(p.degree));
        if (!pp.point.is_generic() && !named.insert(pp.point.display()).second)
            throw input_error("profile point " + pp.point.display() + " appears twice");
    }
}

// All completions of partial profiles to full partitions of d: the remainder
// of each fiber is padded with every partition of the missing weight, and the
// completions combine across points (cartesian product, in descending
// lexicographic order of the padding).
inline std::vector<RamificationProblem> complete_profiles(const RamificationProblem& p,
                                                          std::size_t cap = 5000) {
    validate_problem(p);
    std::vector<std::vector<Partition>> choices;  // per prescribed point
    for (const auto& pp : p.prescribed) {
        const int missing = p.degree - partition_sum(pp.parts);
        std::vector<Partition> full;
        for (const auto& pad : partitions_of(missing)) {
            Partition merged = pp.parts;
            merged.insert(merged.end(), pad.begin(), pad.end());
            sort_partition(merged);
            full.push_back(std::move(merged));
        }
        if (missing == 0) full = {pp.parts};
        // Distinct completions only (different paddings can merge equal).
        std::vector<Partition> dedup;
        for (auto& f : full)
            if (std::find(dedup.begin(), dedup.end(), f) == dedup.end())
                dedup.push_back(std::move(f));
        choices.push_back(std::move(dedup));
    }
    std::size_t count = 1;
    for (const auto& c : choices) {
        count *= c.size();
        if (count > cap)
            throw capacity_error("profile completion count exceeds cap of " +
                                 std::to_string(cap));
    }
    std::vector<RamificationProblem> out;
    std::vector<std::size_t> pick(choices.size(), 0);
    while (true) {
        RamificationProblem q;
        q.degree = p.degree;
        for (std::size_t i = 0; i < choices.size(); ++i)
            q.prescribed.push_back({p.prescribed[i].point, choices[i][pick[i]]});
        out.push_back(std::move(q));
        std::size_t i = choices.size();
        while (i > 0) {
            --i;
            if (++pick[i] < choices[i].size()) break;
            pick[i] = 0;
            if (i == 0) return out;
        }
        if (choices.empty()) return out;
    }
}

struct RealizabilityOptions {
    int degree_cap = kDefaultDegreeCap;
    bool with_covers = true;
    long long cover_budget = 8'000'000;
    std::size_t completion_cap = 5000;
};

struct CompletionCount {
    std::vector<PointProfile> profiles;   // all full
    long long extra_transpositions = 0;   // b; negative means impossible
    bool exists = false;
    Int tuples = 0;                       // transitive product-identity tuples
    Rat weighted = 0;                     // tuples / d!
    std::optional<Int> covers;            // orbit count; nullopt if budget hit
};

struct RealizabilityReport {
    RamificationProblem problem;
    bool partial = false;
    std::vector<CompletionCount> completions;
    bool exists = false;
    Int tuples_total = 0;
    Rat weighted_total = 0;
    std::optional<Int> covers_total;      // nullopt if any completion unknown
};

// Decide whether a single full prescription is realizable, with exact counts.
inline CompletionCount count_full(int d, const std::vector<PointProfile>& profiles,
                                  const RealizabilityOptions& opts) {
    CompletionCount r;
    r.profiles = profiles;
    int drop = 0;  // sum of transposition distances d - l(lambda)
    for (const auto& pp : profiles) drop += d - static_cast<int>(pp.parts.size());
    r.extra_transpositions = 2LL * d - 2 - drop;
    if (r.extra_transpositions < 0) {
        r.covers = Int(0);
        return r;  // Riemann-Hurwitz defect: no genus-zero cover
    }
    std::vector<Partition> classes;
    for (const auto& pp : profiles) classes.push_back(pp.parts);
    if (r.extra_transpositions > 0) {
        Partition transposition{2};
        for (int i = 0; i < d - 2; ++i) transposition.push_back(1);
        for (long long i = 0; i < r.extra_transpositions; ++i) classes.push_back(transposition);
    }
    r.tuples = hdetail::count_transitive(d, classes);
    r.weighted = Rat(r.tuples, factorial(d));
    r.exists = r.tuples > 0;
    if (opts.with_covers) {
        if (r.tuples == 0) r.covers = Int(0);
        else r.covers = hdetail::count_covers(d, classes, opts.cover_budget);
    }
    return r;
}

// Decide realizability of a (possibly partial) prescription: complete the
// partial profiles in every way, count each completion, and aggregate.
inline RealizabilityReport realizable(const RamificationProblem& p,
                                      const RealizabilityOptions& opts = {}) {
    validate_problem(p);
    if (p.degree > opts.degree_cap)
        throw capacity_error("degree " + std::to_string(p.degree) +
                             " exceeds the realizability search cap of " +
                             std::to_string(opts.degree_cap));
    RealizabilityReport report;
    report.problem = p;
    for (const auto& pp : p.prescribed)
        if (partition_sum(pp.parts) < p.degree) report.partial = true;

    bool covers_known = true;
    for (const auto& completion : complete_profiles(p, opts.completion_cap)) {
        CompletionCount c = count_full(p.degree, completion.prescribed, opts);
        report.exists = report.exists || c.exists;
        report.tuples_total += c.tuples;
        report.weighted_total += c.weighted;
        if (c.covers.has_value()) {
            if (covers_known)
                report.covers_total = report.covers_total.value_or(Int(0)) + *c.covers;
        } else {
            covers_known = false;
            report.covers_total.reset();
        }
        report.completions.push_back(std::move(c));
    }
    if (!opts.with_covers) report.covers_total.reset();
    return report;
}

// ---------------------------------------------------------------------------
// Graph-facing entry point

// Assemble the ramification prescription seen by one active vertex: its marks
// prescribe ramification at their target points; each edge into a contracted
// subtree prescribes ramification e at the subtree's target; edges to other
// active vertices over a named point prescribe the local ramification there.
// Contracted subtrees (and ramified free marks) with unspecified targets each
// constrain their own otherwise-unnamed point.
inline RamificationProblem vertex_problem(const DualMapGraph& g, int vertex) {
    GraphIndex ix(g);
    auto vit = ix.vertex.find(vertex);
    if (vit == ix.vertex.end())
        throw input_error("vertex " + std::to_string(vertex) + " not in graph");
    const Vertex& v = *vit->second;
    if (v.role != VertexRole::active)
        throw input_error("vertex " + std::to_string(vertex) + " is not active");

    // Contracted components under contracted-contracted edges.
    std::map<int, int> comp;  // contracted vertex id -> component representative
    for (const auto& w : g.vertices)
        if (w.role == VertexRole::contracted) comp[w.id] = w.id;
    std::function<int(int)> find = [&](int a) {
        while (comp[a] != a) { comp[a] = comp[comp[a]]; a = comp[a]; }
        return a;
    };
    for (const auto& e : g.edges) {
        const Vertex& p = *ix.vertex.at(e.endpoints.first);
        const Vertex& q = *ix.vertex.at(e.endpoints.second);
        if (p.role == VertexRole::contracted && q.role == VertexRole::contracted) {
            int ra = find(p.id), rb = find(q.id);
            if (ra != rb) comp[std::max(ra, rb)] = std::min(ra, rb);
        }
    }

    std::map<TargetPointId, Partition> named;
    std::vector<std::pair<int, Partition>> generic_sources;  // (ordering key, parts)

    for (const auto& m : g.marks) {
        if (m.vertex != vertex) continue;
        const int part = static_cast<int>(m.ramification);
        if (m.target && !m.target->is_generic())
            named[*m.target].push_back(part);
        else if (part > 1)
            generic_sources.push_back({1000000 + m.id, Partition{part}});
    }
    std::map<int, std::pair<std::optional<TargetPointId>, Partition>> subtree_parts;
    for (const auto& e : g.edges) {
        int other = -1;
        if (e.endpoints.first == vertex) other = e.endpoints.second;
        else if (e.endpoints.second == vertex) other = e.endpoints.first;
        if (other < 0) continue;
        const Vertex& w = *ix.vertex.at(other);
        if (w.role == VertexRole::contracted) {
            const int root = find(w.id);
            auto& slot = subtree_parts[root];
            slot.first = w.target;
            slot.second.push_back(static_cast<int>(e.ramification));
        } else if (e.over && !e.over->is_generic()) {
            named[*e.over].push_back(static_cast<int>(e.ramification_at(vertex)));
        }
        // A plain active-active edge (no named point underneath) meets a
        // generic fiber with local ramification 1: no constraint.
    }
    for (auto& [root, slot] : subtree_parts) {
        sort_partition(slot.second);
        if (slot.first && !slot.first->is_generic()) {
            auto& parts = named[*slot.first];
            parts.insert(parts.end(), slot.second.begin(), slot.second.end());
        } else {
            generic_sources.push_back({root, slot.second});
        }
    }

    RamificationProblem p;
    p.degree = v.degree;
    for (auto& [point, parts] : named) {
        sort_partition(parts);
        p.prescribed.push_back({point, parts});
    }
    std::sort(generic_sources.begin(), generic_sources.end());
    for (auto& [key, parts] : generic_sources)
        p.prescribed.push_back({TargetPointId::generic(), parts});
    validate_problem(p);
    return p;
}

inline RealizabilityReport vertex_report(const DualMapGraph& g, int vertex,
                                         const RealizabilityOptions& opts = {}) {
    return realizable(vertex_problem(g, vertex), opts);
}

// True when the active vertex can be realized as an honest cover of the line
// with the ramification its marks and edges prescribe.
inline bool vertex_realizable(const DualMapGraph& g, int vertex,
                              const RealizabilityOptions& opts = {}) {
    RealizabilityOptions cheap = opts;
    cheap.with_covers = false;
    return vertex_report(g, vertex, cheap).exists;
}

// ---------------------------------------------------------------------------
// JSON rendering

inline nlohmann::json to_json(const PointProfile& pp) {
    return {{"point", to_json(pp.point)}, {"parts", pp.parts}};
}

inline nlohmann::json to_json(const RamificationProblem& p) {
    nlohmann::json prescribed = nlohmann::json::array();
    for (const auto& pp : p.prescribed) prescribed.push_back(to_json(pp));
    return {{"degree", p.degree}, {"prescribed", prescribed}};
}

inline nlohmann::json to_json(const CompletionCount& c) {
    nlohmann::json profiles = nlohmann::json::array();
    for (const auto& pp : c.profiles) profiles.push_back(to_json(pp));
    nlohmann::json j{{"profiles", profiles},
                     {"extra_transpositions", c.extra_transpositions},
                     {"exists", c.exists},
                     {"tuples", c.tuples.str()},
                     {"weighted", c.weighted.str()}};
    if (c.covers) j["covers"] = c.covers->str();
    else j["covers"] = nullptr;
    return j;
}

inline nlohmann::json to_json(const RealizabilityReport& r) {
    nlohmann::json completions = nlohmann::json::array();
    for (const auto& c : r.completions) completions.push_back(to_json(c));
    nlohmann::json j{{"schema", 1},
                     {"problem", to_json(r.problem)},
                     {"partial", r.partial},
                     {"exists", r.exists},
                     {"completions", completions},
                     {"tuples", r.tuples_total.str()},
                     {"weighted", r.weighted_total.str()}};
    if (r.covers_total) j["covers"] = r.covers_total->str();
    else j["covers"] = nullptr;
    return j;
}

}  // namespace relmaps
