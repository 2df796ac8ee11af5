// Tangency data: the discrete input of a relative problem.  It records, for
// each relative point of the target, the multiset of contact orders a map of
// the given degree must realize there, plus the number of free (unconstrained)
// marked points.
#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "relmaps/errors.hpp"
#include "relmaps/target.hpp"

namespace relmaps {

struct RelativePointData {
    std::string point;            // relative-point label
    std::vector<int> tangencies;  // contact orders, each >= 1

    auto operator<=>(const RelativePointData&) const = default;

    int total() const { return std::accumulate(tangencies.begin(), tangencies.end(), 0); }
};

struct TangencyData {
    int free_marks = 0;                       // number of unconstrained marks
    std::vector<RelativePointData> relative;  // one entry per relative point

    auto operator<=>(const TangencyData&) const = default;

    int mark_count() const {
        int n = free_marks;
        for (const auto& r : relative) n += static_cast<int>(r.tangencies.size());
        return n;
    }

    const RelativePointData* find(const std::string& point) const {
        for (const auto& r : relative)
            if (r.point == point) return &r;
        return nullptr;
    }
};

// Throws input_error unless the tangency data is well-formed: distinct
// non-reserved labels, all contact orders >= 1, free mark count >= 0.
inline void validate_tangency_data(const TangencyData& gamma) {
    if (gamma.free_marks < 0) throw input_error("tangency data: free mark count must be >= 0");
    std::map<std::string, int> seen;
    for (const auto& r : gamma.relative) {
        if (r.point.empty()) throw input_error("tangency data: empty relative point label");
        if (is_reserved_label(r.point))
            throw input_error("tangency data: label '" + r.point +
                              "' is reserved for a special point of the target");
        if (++seen[r.point] > 1)
            throw input_error("tangency data: duplicate relative point '" + r.point + "'");
        if (r.tangencies.empty())
            throw input_error("tangency data: relative point '" + r.point +
                              "' has no contact orders");
        for (int t : r.tangencies)
            if (t < 1)
                throw input_error("tangency data: contact order " + std::to_string(t) +
                                  " at '" + r.point + "' must be >= 1");
    }
}

// Checks that every relative point's contact orders sum to `degree`.  A
// degree-d map meets each fiber with total multiplicity d, so tangency data
// that fails this cannot be realized; callers that enumerate or match against
// a prescribed degree use this as an input check.
inline void require_fiber_totals(const TangencyData& gamma, int degree) {
    for (const auto& r : gamma.relative) {
        if (r.total() != degree)
            throw input_error("tangency data: contact orders at '" + r.point + "' sum to " +
                              std::to_string(r.total()) + " but the degree is " +
                              std::to_string(degree));
    }
}

}  // namespace relmaps
