#include "polylap/problem_io.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "json.hpp"

namespace polylap {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* a : allowed) known = known || item.key() == a;
        if (!known) fail("unknown key '" + item.key() + "' in " + where);
    }
}

const json& need(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(where + " is missing '" + std::string(key) + "'");
    return *it;
}

// "546", "-3/2", "1/4000": an exact integer ratio, so measures written as
// rationals take the single rounding of one division instead of whatever a
// decimal expansion was truncated to.
double rational_in(const std::string& s, const std::string& where) {
    const char* c = s.c_str();
    char* end = nullptr;
    errno = 0;
    const long long num = std::strtoll(c, &end, 10);
    if (end == c || errno == ERANGE)
        fail(where + ": '" + s + "' is not a number or rational");
    long long den = 1;
    if (*end == '/') {
        const char* dstart = end + 1;
        errno = 0;
        den = std::strtoll(dstart, &end, 10);
        if (end == dstart || errno == ERANGE)
            fail(where + ": '" + s + "' is not a number or rational");
    }
    if (*end != '\0')
        fail(where + ": '" + s + "' is not a number or rational");
    if (den == 0) fail(where + ": zero denominator in '" + s + "'");
    return static_cast<double>(num) / static_cast<double>(den);
}

double number_in(const json& v, const std::string& where) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return rational_in(v.get<std::string>(), where);
    fail(where + " must be a number or a rational string");
}

std::string string_in(const json& v, const std::string& where) {
    if (!v.is_string()) fail(where + " must be a string");
    return v.get<std::string>();
}

unsigned order_in(const json& v, const std::string& where) {
    if (!v.is_number_integer()) fail(where + " must be an integer");
    const long long k = v.get<long long>();
    if (k < 1) fail(where + " must be at least 1");
    return static_cast<unsigned>(k);
}

std::shared_ptr<const WeightedGraph> parse_graph(const json& jg) {
    if (!jg.is_object()) fail("graph must be an object");
    check_keys(jg, "graph", {"mu_floor", "vertices", "edges"});

    const json& jverts = need(jg, "vertices", "graph");
    if (!jverts.is_array() || jverts.empty())
        fail("graph.vertices must be a non-empty array");
    std::vector<VertexSpec> verts;
    verts.reserve(jverts.size());
    for (const json& jv : jverts) {
        if (!jv.is_object()) fail("vertex entries must be objects");
        check_keys(jv, "a vertex entry", {"id", "mu", "h1", "h2", "attributes"});
        VertexSpec v;
        v.id = string_in(need(jv, "id", "a vertex entry"), "vertex id");
        const std::string where = "vertex '" + v.id + "'";
        v.mu = number_in(need(jv, "mu", where), where + " mu");
        if (auto it = jv.find("h1"); it != jv.end())
            v.h1 = number_in(*it, where + " h1");
        if (auto it = jv.find("h2"); it != jv.end())
            v.h2 = number_in(*it, where + " h2");
        if (auto it = jv.find("attributes"); it != jv.end()) {
            if (!it->is_object()) fail(where + " attributes must be an object");
            for (const auto& item : it->items())
                v.attributes[item.key()] =
                    number_in(item.value(), "attribute '" + item.key() + "' of " + where);
        }
        verts.push_back(std::move(v));
    }

    std::vector<EdgeSpec> edges;
    if (auto it = jg.find("edges"); it != jg.end()) {
        if (!it->is_array()) fail("graph.edges must be an array");
        edges.reserve(it->size());
        for (const json& je : *it) {
            if (!je.is_object()) fail("edge entries must be objects");
            check_keys(je, "an edge entry", {"a", "b", "w"});
            EdgeSpec e;
            e.a = string_in(need(je, "a", "an edge entry"), "edge endpoint");
            e.b = string_in(need(je, "b", "an edge entry"), "edge endpoint");
            const std::string where = "edge " + e.a + " -- " + e.b;
            e.w = number_in(need(je, "w", where), where + " w");
            edges.push_back(std::move(e));
        }
    }

    double floor_val;
    if (auto it = jg.find("mu_floor"); it != jg.end()) {
        floor_val = number_in(*it, "graph.mu_floor");
    } else {
        floor_val = verts[0].mu;
        for (const VertexSpec& v : verts) floor_val = std::min(floor_val, v.mu);
    }

    try {
        return std::make_shared<WeightedGraph>(std::move(verts), std::move(edges),
                                               floor_val);
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
}

VertexFunction envelope_column(const json& v, const std::string& where,
                               const WeightedGraph& g) {
    const std::size_t n = g.size();
    if (v.is_object()) {
        check_keys(v, where, {"attr"});
        const std::string name =
            string_in(need(v, "attr", where), where + ".attr");
        if (!g.attribute_complete(name))
            fail(where + " references attribute '" + name +
                 "', which is absent or not set on every vertex");
        return *g.attribute(name);
    }
    if (v.is_array()) {
        if (v.size() != n)
            fail(where + " lists " + std::to_string(v.size()) + " values for " +
                 std::to_string(n) + " vertices");
        VertexFunction col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = number_in(v[i], where);
        return col;
    }
    return VertexFunction(n, number_in(v, where));
}

bool starts_with(const std::string& s, const std::string& prefix) {
    return s.compare(0, prefix.size(), prefix) == 0;
}

}  // namespace

ProblemFile parse_problem(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(e.what());
    }
    if (!j.is_object()) fail("the problem file must be a JSON object");
    check_keys(j, "the problem file",
               {"graph", "domain", "problem", "nonlinearity", "claims"});

    ProblemFile pf;
    ProblemInstance& inst = pf.instance;
    inst.graph = parse_graph(need(j, "graph", "the problem file"));
    const WeightedGraph& g = *inst.graph;

    if (auto it = j.find("domain"); it != j.end()) {
        if (!it->is_object()) fail("domain must be an object");
        check_keys(*it, "domain", {"omega"});
        const json& jo = need(*it, "omega", "domain");
        if (!jo.is_array() || jo.empty())
            fail("domain.omega must be a non-empty array of vertex ids");
        std::vector<std::string> ids;
        ids.reserve(jo.size());
        for (const json& v : jo) ids.push_back(string_in(v, "domain.omega entry"));
        for (const std::string& id : ids)
            if (!g.find(id)) fail("domain.omega names an unknown vertex '" + id + "'");
        inst.domain = compute_boundary_ids(g, ids);
    }

    const json& jp = need(j, "problem", "the problem file");
    if (!jp.is_object()) fail("problem must be an object");
    check_keys(jp, "problem", {"m1", "m2", "p", "q", "mode", "eps_regularization"});
    inst.m1 = order_in(need(jp, "m1", "problem"), "problem.m1");
    inst.m2 = order_in(need(jp, "m2", "problem"), "problem.m2");
    inst.p = number_in(need(jp, "p", "problem"), "problem.p");
    inst.q = number_in(need(jp, "q", "problem"), "problem.q");
    const std::string mode = string_in(need(jp, "mode", "problem"), "problem.mode");
    if (mode == "finite")
        inst.mode = Mode::Finite;
    else if (mode == "dirichlet")
        inst.mode = Mode::Dirichlet;
    else
        fail("problem.mode must be \"finite\" or \"dirichlet\"");
    if (auto it = jp.find("eps_regularization"); it != jp.end())
        inst.eps_regularization = number_in(*it, "problem.eps_regularization");

    const json& jn = need(j, "nonlinearity", "the problem file");
    if (!jn.is_object()) fail("nonlinearity must be an object");
    check_keys(jn, "nonlinearity", {"builtin", "expression", "envelope"});
    const bool has_builtin = jn.contains("builtin");
    const bool has_expr = jn.contains("expression");
    if (has_builtin == has_expr)
        fail("nonlinearity needs exactly one of 'builtin' or 'expression'");
    if (has_builtin)
        inst.F = Nonlinearity::builtin(
            string_in(jn["builtin"], "nonlinearity.builtin"));
    else
        inst.F = Nonlinearity::expression(
            string_in(jn["expression"], "nonlinearity.expression"));
    inst.F.bind(g);
    if (auto it = jn.find("envelope"); it != jn.end()) {
        if (!it->is_object()) fail("envelope must be an object");
        check_keys(*it, "envelope", {"f1", "f2", "f3", "f4"});
        GrowthEnvelope env;
        env.f1 = envelope_column(need(*it, "f1", "envelope"), "envelope.f1", g);
        env.f2 = envelope_column(need(*it, "f2", "envelope"), "envelope.f2", g);
        env.f3 = envelope_column(need(*it, "f3", "envelope"), "envelope.f3", g);
        env.f4 = envelope_column(need(*it, "f4", "envelope"), "envelope.f4", g);
        inst.envelope = std::move(env);
    }

    if (auto it = j.find("claims"); it != j.end()) {
        if (!it->is_object()) fail("claims must be an object");
        for (const auto& item : it->items())
            pf.claims[item.key()] = number_in(item.value(), "claims." + item.key());
    }
    return pf;
}

ProblemFile load_problem(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_problem(buf.str());
    } catch (const std::exception& e) {
        fail(path + ": " + e.what());
    }
}

std::string serialize_problem(const ProblemFile& pf) {
    const ProblemInstance& inst = pf.instance;
    const WeightedGraph& g = inst.g();

    ordered_json jg;
    jg["mu_floor"] = g.mu_floor();
    ordered_json jverts = ordered_json::array();
    for (const VertexSpec& v : g.vertex_specs()) {
        ordered_json jv;
        jv["id"] = v.id;
        jv["mu"] = v.mu;
        if (v.h1) jv["h1"] = *v.h1;
        if (v.h2) jv["h2"] = *v.h2;
        if (!v.attributes.empty()) {
            ordered_json ja;
            for (const auto& [name, val] : v.attributes) ja[name] = val;
            jv["attributes"] = ja;
        }
        jverts.push_back(std::move(jv));
    }
    jg["vertices"] = std::move(jverts);
    ordered_json jedges = ordered_json::array();
    for (const Edge& e : g.edges()) {
        ordered_json je;
        je["a"] = g.id(e.a);
        je["b"] = g.id(e.b);
        je["w"] = e.w;
        jedges.push_back(std::move(je));
    }
    jg["edges"] = std::move(jedges);

    ordered_json j;
    j["graph"] = std::move(jg);

    if (inst.domain) {
        ordered_json jo = ordered_json::array();
        for (std::uint32_t x : inst.dom().omega()) jo.push_back(g.id(x));
        ordered_json jd;
        jd["omega"] = std::move(jo);
        j["domain"] = std::move(jd);
    }

    ordered_json jp;
    jp["m1"] = inst.m1;
    jp["m2"] = inst.m2;
    jp["p"] = inst.p;
    jp["q"] = inst.q;
    jp["mode"] = inst.dirichlet() ? "dirichlet" : "finite";
    jp["eps_regularization"] = inst.eps_regularization;
    j["problem"] = std::move(jp);

    ordered_json jn;
    const std::string& origin = inst.F.origin();
    if (starts_with(origin, "builtin:"))
        jn["builtin"] = origin.substr(8);
    else
        jn["expression"] = origin.substr(5);
    if (inst.envelope) {
        ordered_json je;
        je["f1"] = inst.envelope->f1;
        je["f2"] = inst.envelope->f2;
        je["f3"] = inst.envelope->f3;
        je["f4"] = inst.envelope->f4;
        jn["envelope"] = std::move(je);
    }
    j["nonlinearity"] = std::move(jn);

    if (!pf.claims.empty()) {
        ordered_json jc;
        for (const auto& [key, val] : pf.claims) jc[key] = val;
        j["claims"] = std::move(jc);
    }
    return j.dump(2) + "\n";
}

}  // namespace polylap
