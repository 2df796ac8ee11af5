// JSON serialization for graphs and tangency data ("schema": 1).
//
// Parsing is strict: unknown or missing fields raise input_error carrying the
// field path (e.g. "vertices[2].degree"), and malformed JSON raises
// input_error with the byte offset reported by the parser.  Serialization
// writes every scalar field explicitly (optionals only when present), so
// from_json(to_json(g)) == g holds field-for-field.
#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "relmaps/errors.hpp"
#include "relmaps/gamma.hpp"
#include "relmaps/graph.hpp"

namespace relmaps {

using nlohmann::json;

inline json parse_json_text(const std::string& text, const std::string& source_name) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw input_error(source_name + ": JSON parse error at byte " + std::to_string(e.byte) +
                          ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Path-tracking reader

class JsonReader {
  public:
    JsonReader(const json& j, std::string path) : j_(&j), path_(std::move(path)) {}

    const std::string& path() const { return path_; }
    const json& raw() const { return *j_; }

    [[noreturn]] void fail(const std::string& message) const {
        throw input_error(path_, message);
    }

    bool has(const std::string& key) const { return j_->is_object() && j_->contains(key); }

    JsonReader at(const std::string& key) const {
        require_object();
        if (!j_->contains(key)) fail("missing required field '" + key + "'");
        return JsonReader((*j_)[key], path_ + "." + key);
    }
    std::optional<JsonReader> opt(const std::string& key) const {
        require_object();
        if (!j_->contains(key)) return std::nullopt;
        return JsonReader((*j_)[key], path_ + "." + key);
    }
    JsonReader item(size_t i) const {
        require_array();
        return JsonReader((*j_)[i], path_ + "[" + std::to_string(i) + "]");
    }
    size_t size() const {
        require_array();
        return j_->size();
    }

    void require_object() const {
        if (!j_->is_object()) fail("expected a JSON object");
    }
    void require_array() const {
        if (!j_->is_array()) fail("expected a JSON array");
    }

    // Errors on fields outside the given set; catches typos early.
    void allow_keys(std::initializer_list<const char*> keys) const {
        require_object();
        std::set<std::string> allowed;
        for (const char* k : keys) allowed.insert(k);
        for (const auto& [key, value] : j_->items())
            if (!allowed.count(key)) fail("unknown field '" + key + "'");
    }

    long long as_integer() const {
        if (!j_->is_number_integer()) fail("expected an integer");
        return j_->get<long long>();
    }
    long long as_integer_min(long long lo) const {
        long long v = as_integer();
        if (v < lo) fail("value " + std::to_string(v) + " is below the minimum " + std::to_string(lo));
        return v;
    }
    int as_int() const {
        long long v = as_integer();
        if (v < -2147483647LL || v > 2147483647LL) fail("integer out of range");
        return static_cast<int>(v);
    }
    bool as_bool() const {
        if (!j_->is_boolean()) fail("expected a boolean");
        return j_->get<bool>();
    }
    std::string as_string() const {
        if (!j_->is_string()) fail("expected a string");
        return j_->get<std::string>();
    }

  private:
    const json* j_;
    std::string path_;
};

inline void require_schema_version(const JsonReader& r) {
    long long v = r.at("schema").as_integer();
    if (v != 1) r.fail("unsupported schema version " + std::to_string(v) + " (expected 1)");
}

// ---------------------------------------------------------------------------
// Target points and targets

inline json to_json(const TargetPointId& p) {
    switch (p.kind) {
        case PointKind::relative_point: return {{"kind", "relative"}, {"label", p.label}};
        case PointKind::special_point: return {{"kind", "special"}, {"label", p.label}};
        case PointKind::generic_point: return {{"kind", "generic"}};
    }
    return {};
}

inline TargetPointId point_from_json(const JsonReader& r) {
    if (r.raw().is_string()) return TargetPointId::relative(r.as_string());  // shorthand
    r.require_object();
    std::string kind = r.at("kind").as_string();
    if (kind == "generic") {
        r.allow_keys({"kind"});
        return TargetPointId::generic();
    }
    r.allow_keys({"kind", "label"});
    std::string label = r.at("label").as_string();
    if (kind == "relative") return TargetPointId::relative(label);
    if (kind == "special") return TargetPointId::special(label);
    r.fail("unknown point kind '" + kind + "'");
}

inline json to_json(const StackyTarget& t) {
    json specials = json::array();
    for (const auto& s : t.special_points)
        specials.push_back({{"label", s.label}, {"order", s.order}});
    return {{"generic_order", t.generic_order}, {"special_points", specials}};
}

inline StackyTarget target_from_json(const JsonReader& r) {
    r.require_object();
    if (r.has("wps")) {  // shorthand {"wps": [a, b]}
        r.allow_keys({"wps"});
        JsonReader w = r.at("wps");
        if (w.size() != 2) w.fail("expected exactly two weights");
        return StackyTarget::weighted_projective(w.item(0).as_integer_min(1),
                                                 w.item(1).as_integer_min(1));
    }
    r.allow_keys({"generic_order", "special_points"});
    StackyTarget t;
    t.generic_order = r.at("generic_order").as_integer_min(1);
    t.special_points.clear();
    if (auto sp = r.opt("special_points")) {
        for (size_t i = 0; i < sp->size(); ++i) {
            JsonReader s = sp->item(i);
            s.allow_keys({"label", "order"});
            t.special_points.push_back({s.at("label").as_string(), s.at("order").as_integer_min(1)});
        }
    }
    return t;
}

// ---------------------------------------------------------------------------
// Graphs

inline json to_json(const DualMapGraph& g) {
    json vertices = json::array();
    for (const auto& v : g.vertices) {
        json jv{{"id", v.id}};
        if (v.active()) {
            jv["role"] = "active";
            jv["degree"] = v.degree;
        } else {
            jv["role"] = "contracted";
            if (v.target) jv["target"] = to_json(*v.target);
        }
        vertices.push_back(std::move(jv));
    }
    json edges = json::array();
    for (const auto& e : g.edges) {
        json je{{"id", e.id},
                {"endpoints", {e.endpoints.first, e.endpoints.second}},
                {"ramification", e.ramification},
                {"stabilizer", e.stabilizer}};
        if (e.ramification2) je["ramification2"] = *e.ramification2;
        if (e.over) je["over"] = to_json(*e.over);
        edges.push_back(std::move(je));
    }
    json marks = json::array();
    for (const auto& m : g.marks) {
        json jm{{"id", m.id},
                {"vertex", m.vertex},
                {"tangency", m.tangency},
                {"ramification", m.ramification},
                {"stabilizer", m.stabilizer}};
        if (m.target) jm["target"] = to_json(*m.target);
        marks.push_back(std::move(jm));
    }
    json out{{"schema", 1},
             {"target", to_json(g.target)},
             {"degree", g.degree},
             {"vertices", std::move(vertices)},
             {"edges", std::move(edges)},
             {"marks", std::move(marks)}};
    json ff = json::object();
    for (const auto& [label, claimed] : g.full_fiber)
        if (!claimed) ff[label] = false;
    if (!ff.empty()) out["flags"] = {{"full_fiber", std::move(ff)}};
    return out;
}

inline DualMapGraph graph_from_json(const JsonReader& root) {
    root.require_object();
    root.allow_keys({"schema", "target", "degree", "vertices", "edges", "marks", "flags"});
    require_schema_version(root);

    DualMapGraph g;
    if (auto t = root.opt("target")) g.target = target_from_json(*t);
    g.degree = root.at("degree").as_int();

    JsonReader vs = root.at("vertices");
    for (size_t i = 0; i < vs.size(); ++i) {
        JsonReader rv = vs.item(i);
        rv.allow_keys({"id", "role", "degree", "target"});
        Vertex v;
        v.id = rv.at("id").as_int();
        std::string role = rv.at("role").as_string();
        if (role == "active") {
            v.role = VertexRole::active;
            v.degree = rv.at("degree").as_int();
            if (rv.has("target")) rv.fail("active vertices carry no target field");
        } else if (role == "contracted") {
            v.role = VertexRole::contracted;
            v.target = point_from_json(rv.at("target"));
            if (rv.has("degree")) rv.fail("contracted vertices carry no degree field");
        } else {
            rv.fail("unknown vertex role '" + role + "'");
        }
        g.vertices.push_back(std::move(v));
    }

    if (auto es = root.opt("edges")) {
        for (size_t i = 0; i < es->size(); ++i) {
            JsonReader re = es->item(i);
            re.allow_keys({"id", "endpoints", "ramification", "ramification2", "stabilizer", "over"});
            Edge e;
            e.id = re.at("id").as_int();
            JsonReader ep = re.at("endpoints");
            if (ep.size() != 2) ep.fail("expected exactly two endpoint vertex ids");
            e.endpoints = {ep.item(0).as_int(), ep.item(1).as_int()};
            if (auto x = re.opt("ramification")) e.ramification = x->as_integer();
            if (auto x = re.opt("ramification2")) e.ramification2 = x->as_integer();
            if (auto x = re.opt("stabilizer")) e.stabilizer = x->as_integer();
            if (auto x = re.opt("over")) e.over = point_from_json(*x);
            g.edges.push_back(std::move(e));
        }
    }

    if (auto ms = root.opt("marks")) {
        for (size_t i = 0; i < ms->size(); ++i) {
            JsonReader rm = ms->item(i);
            rm.allow_keys({"id", "vertex", "tangency", "ramification", "stabilizer", "target"});
            MarkedPoint m;
            m.id = rm.at("id").as_int();
            m.vertex = rm.at("vertex").as_int();
            if (auto x = rm.opt("tangency")) m.tangency = x->as_int();
            if (auto x = rm.opt("ramification"))
                m.ramification = x->as_integer();
            else
                m.ramification = std::max<long long>(m.tangency, 1);
            if (auto x = rm.opt("stabilizer")) m.stabilizer = x->as_integer();
            if (auto x = rm.opt("target")) m.target = point_from_json(*x);
            g.marks.push_back(std::move(m));
        }
    }

    if (auto fl = root.opt("flags")) {
        fl->allow_keys({"full_fiber"});
        if (auto ff = fl->opt("full_fiber")) {
            ff->require_object();
            for (const auto& [label, value] : ff->raw().items()) {
                JsonReader rb((*ff).raw()[label], ff->path() + "." + label);
                g.set_full_fiber(label, rb.as_bool());
            }
        }
    }
    g.normalize_flags();
    return g;
}

inline DualMapGraph graph_from_json_text(const std::string& text,
                                         const std::string& source_name = "graph") {
    json j = parse_json_text(text, source_name);
    return graph_from_json(JsonReader(j, source_name));
}

// ---------------------------------------------------------------------------
// Tangency data

inline json to_json(const TangencyData& gamma) {
    json rel = json::array();
    for (const auto& r : gamma.relative)
        rel.push_back({{"point", r.point}, {"tangencies", r.tangencies}});
    return {{"schema", 1}, {"free_marks", gamma.free_marks}, {"relative", std::move(rel)}};
}

inline TangencyData gamma_from_json(const JsonReader& root) {
    root.require_object();
    root.allow_keys({"schema", "free_marks", "relative"});
    require_schema_version(root);
    TangencyData gamma;
    if (auto f = root.opt("free_marks")) gamma.free_marks = f->as_int();
    if (auto rel = root.opt("relative")) {
        for (size_t i = 0; i < rel->size(); ++i) {
            JsonReader rr = rel->item(i);
            rr.allow_keys({"point", "tangencies"});
            RelativePointData rp;
            rp.point = rr.at("point").as_string();
            JsonReader ts = rr.at("tangencies");
            for (size_t k = 0; k < ts.size(); ++k)
                rp.tangencies.push_back(ts.item(k).as_int());
            gamma.relative.push_back(std::move(rp));
        }
    }
    validate_tangency_data(gamma);
    return gamma;
}

inline TangencyData gamma_from_json_text(const std::string& text,
                                         const std::string& source_name = "gamma") {
    json j = parse_json_text(text, source_name);
    return gamma_from_json(JsonReader(j, source_name));
}

// ---------------------------------------------------------------------------
// Validation reports

inline json to_json(const ValidationReport& report) {
    json issues = json::array();
    for (const auto& v : report) issues.push_back({{"code", v.code}, {"message", v.message}});
    return {{"schema", 1}, {"valid", report.empty()}, {"issues", std::move(issues)}};
}

}  // namespace relmaps
