// The target curve: a rational curve with finitely many stacky points, the
// main case being the weighted projective line P(a,b) with stacky structure
// at the two distinguished points "0" (order a) and "pole" (order b).  Every
// unnamed point of P(a,b) has automorphism group of order gcd(a,b); P(1,1) is
// the ordinary projective line.
//
// Points on the target are referenced symbolically by a TargetPointId:
//   * relative points — the marked points of the target carrying prescribed
//     tangency data; labelled by free-form strings ("inf", "x1", ...) that
//     must avoid the special-point labels;
//   * special points — the distinguished stacky points ("0" / "pole" on a
//     weighted projective line);
//   * generic points — unnamed ordinary points (used e.g. for the image of a
//     contracted component that sits over no constrained point).
#pragma once

#include <compare>
#include <numeric>
#include <string>
#include <vector>

#include "relmaps/errors.hpp"

namespace relmaps {

enum class PointKind { relative_point, special_point, generic_point };

inline const char* to_string(PointKind k) {
    switch (k) {
        case PointKind::relative_point: return "relative";
        case PointKind::special_point: return "special";
        case PointKind::generic_point: return "generic";
    }
    return "?";
}

inline const std::string kSpecialZero = "0";
inline const std::string kSpecialPole = "pole";

struct TargetPointId {
    PointKind kind = PointKind::generic_point;
    std::string label;  // empty for generic points

    auto operator<=>(const TargetPointId&) const = default;

    static TargetPointId relative(std::string l) {
        return {PointKind::relative_point, std::move(l)};
    }
    static TargetPointId special(std::string l) {
        return {PointKind::special_point, std::move(l)};
    }
    static TargetPointId generic() { return {PointKind::generic_point, ""}; }

    bool is_relative() const { return kind == PointKind::relative_point; }
    bool is_special() const { return kind == PointKind::special_point; }
    bool is_generic() const { return kind == PointKind::generic_point; }

    // Human-readable form used in messages and DOT labels.
    std::string display() const {
        if (kind == PointKind::generic_point) return "*";
        return label;
    }
};

struct SpecialPoint {
    std::string label;
    long long order = 1;

    auto operator<=>(const SpecialPoint&) const = default;
};

struct StackyTarget {
    long long generic_order = 1;              // stabilizer order at unnamed points
    std::vector<SpecialPoint> special_points;  // distinguished stacky points

    auto operator<=>(const StackyTarget&) const = default;

    // The weighted projective line P(a,b): special points "0" of order a and
    // "pole" of order b, generic stabilizer of order gcd(a,b).
    static StackyTarget weighted_projective(long long a, long long b) {
        if (a < 1 || b < 1)
            throw input_error("weighted projective line requires positive weights, got (" +
                              std::to_string(a) + "," + std::to_string(b) + ")");
        return StackyTarget{std::gcd(a, b), {{kSpecialZero, a}, {kSpecialPole, b}}};
    }

    const SpecialPoint* find_special(const std::string& label) const {
        for (const auto& s : special_points)
            if (s.label == label) return &s;
        return nullptr;
    }

    bool is_special_label(const std::string& label) const {
        return find_special(label) != nullptr;
    }

    // Stabilizer order of the target at a named point.
    long long order_at(const TargetPointId& p) const {
        if (p.is_special()) {
            const SpecialPoint* s = find_special(p.label);
            if (!s) throw input_error("unknown special point label '" + p.label + "'");
            return s->order;
        }
        return generic_order;  // relative and generic points have generic stabilizer
    }

    // Throws input_error unless the target data is internally consistent.
    void check() const {
        if (generic_order < 1) throw input_error("target: generic stabilizer order must be >= 1");
        for (const auto& s : special_points) {
            if (s.label.empty()) throw input_error("target: empty special point label");
            if (s.order < 1)
                throw input_error("target: special point '" + s.label +
                                  "' must have order >= 1");
            if (s.order % generic_order != 0)
                throw input_error("target: order of special point '" + s.label +
                                  "' must be a multiple of the generic order");
        }
        for (size_t i = 0; i < special_points.size(); ++i)
            for (size_t j = i + 1; j < special_points.size(); ++j)
                if (special_points[i].label == special_points[j].label)
                    throw input_error("target: duplicate special point label '" +
                                      special_points[i].label + "'");
    }

    std::string display() const {
        if (special_points.size() == 2 && special_points[0].label == kSpecialZero &&
            special_points[1].label == kSpecialPole &&
            generic_order == std::gcd(special_points[0].order, special_points[1].order)) {
            return "P(" + std::to_string(special_points[0].order) + "," +
                   std::to_string(special_points[1].order) + ")";
        }
        std::string s = "Stacky(generic=" + std::to_string(generic_order);
        for (const auto& p : special_points)
            s += "; " + p.label + ":" + std::to_string(p.order);
        return s + ")";
    }
};

// The two weighted-projective labels are reserved in every context so textual
// point references stay unambiguous.
inline bool is_reserved_label(const std::string& label) {
    return label == kSpecialZero || label == kSpecialPole;
}

}  // namespace relmaps
