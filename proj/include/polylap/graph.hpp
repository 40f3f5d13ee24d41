#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace polylap {

// A function V -> R stored in canonical vertex order (the order vertices
// were given at construction). All integrals and norms sum in this order,
// so repeated runs produce bit-identical results.
using VertexFunction = std::vector<double>;

struct VertexSpec {
    std::string id;
    double mu = 1.0;
    std::optional<double> h1;
    std::optional<double> h2;
    std::map<std::string, double> attributes;
};

struct EdgeSpec {
    std::string a;
    std::string b;
    double w = 1.0;
};

struct HalfEdge {
    std::uint32_t to;
    double w;
};

struct Edge {
    std::uint32_t a;
    std::uint32_t b;
    double w;
};

struct Violation {
    std::string code;
    std::string detail;
};

// Finite weighted graph: symmetric positive edge weights w, vertex measure
// mu with a recorded uniform lower bound mu_floor. Construction only rejects
// what cannot be represented (duplicate ids, edges to unknown vertices);
// everything else is stored as given and reported by validate(), so the
// validate CLI command can describe broken inputs instead of dying on them.
class WeightedGraph {
public:
    WeightedGraph(std::vector<VertexSpec> vertices,
                  std::vector<EdgeSpec> edges,
                  double mu_floor);

    std::size_t size() const { return mu_.size(); }
    const std::string& id(std::uint32_t x) const { return ids_[x]; }
    const std::vector<std::string>& ids() const { return ids_; }
    std::optional<std::uint32_t> find(const std::string& id) const;

    double mu(std::uint32_t x) const { return mu_[x]; }
    const VertexFunction& mu() const { return mu_; }
    double mu_floor() const { return mu_floor_; }
    double total_measure() const { return total_measure_; }

    bool has_h1() const { return !h1_.empty(); }
    bool has_h2() const { return !h2_.empty(); }
    // Empty unless some vertex supplied the potential; validate() reports
    // partially supplied columns.
    const VertexFunction& h1() const { return h1_; }
    const VertexFunction& h2() const { return h2_; }

    // Neighbors sorted by vertex index.
    std::span<const HalfEdge> neighbors(std::uint32_t x) const;
    // One record per undirected edge, in input order, endpoints ordered a < b.
    const std::vector<Edge>& edges() const { return edges_; }

    const std::vector<double>* attribute(const std::string& name) const;
    bool attribute_complete(const std::string& name) const;
    std::vector<std::string> attribute_names() const;

    bool connected() const;

    // Data problems, not exceptions: weight positivity and symmetry of the
    // stored representation, mu >= mu_floor > 0, finiteness, self loops,
    // duplicate edges, missing potentials where a column exists, and
    // (optionally) connectivity.
    std::vector<Violation> validate(bool require_connected = true) const;

    const std::vector<VertexSpec>& vertex_specs() const { return specs_; }

private:
    std::vector<std::string> ids_;
    std::map<std::string, std::uint32_t> index_;
    VertexFunction mu_;
    VertexFunction h1_, h2_;
    double mu_floor_ = 0.0;
    double total_measure_ = 0.0;
    std::vector<Edge> edges_;
    std::vector<HalfEdge> halves_;
    std::vector<std::uint32_t> row_begin_;
    struct AttrColumn {
        std::vector<double> values;
        std::vector<bool> present;
        std::size_t count = 0;
    };
    std::map<std::string, AttrColumn> attributes_;
    std::vector<VertexSpec> specs_;
};

// A vertex subset Omega with its one-hop exterior boundary
//   boundary = { y outside Omega : y has a neighbor in Omega }.
// Omega and boundary are disjoint by construction, so the usual
// interior-of-Omega convention (Omega minus boundary) is Omega itself;
// interior() exists so reports can state that reading explicitly.
class Domain {
public:
    Domain() = default;

    const std::vector<std::uint32_t>& omega() const { return omega_; }
    const std::vector<std::uint32_t>& boundary() const { return boundary_; }
    const std::vector<std::uint32_t>& closure() const { return closure_; }
    const std::vector<std::uint32_t>& interior() const { return omega_; }

    bool in_omega(std::uint32_t x) const { return in_omega_[x] != 0; }
    bool in_closure(std::uint32_t x) const { return in_closure_[x] != 0; }

    double omega_measure() const { return omega_measure_; }
    double closure_measure() const { return closure_measure_; }

    friend Domain compute_boundary(const WeightedGraph& g,
                                   std::vector<std::uint32_t> omega);

private:
    std::vector<std::uint32_t> omega_, boundary_, closure_;
    std::vector<std::uint8_t> in_omega_, in_closure_;
    double omega_measure_ = 0.0;
    double closure_measure_ = 0.0;
};

Domain compute_boundary(const WeightedGraph& g, std::vector<std::uint32_t> omega);
Domain compute_boundary_ids(const WeightedGraph& g, const std::vector<std::string>& omega_ids);

// Integral over all of V: sum mu(x) f(x) in canonical order.
double integrate(const WeightedGraph& g, const VertexFunction& f);
// Integral over Omega only.
double integrate(const WeightedGraph& g, const VertexFunction& f, const Domain& dom);
// Integral over the closure Omega plus boundary.
double integrate_closure(const WeightedGraph& g, const VertexFunction& f, const Domain& dom);

}  // namespace polylap
