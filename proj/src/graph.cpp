#include "polylap/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace polylap {

WeightedGraph::WeightedGraph(std::vector<VertexSpec> vertices,
                             std::vector<EdgeSpec> edges,
                             double mu_floor)
    : mu_floor_(mu_floor) {
    ids_.reserve(vertices.size());
    mu_.reserve(vertices.size());
    for (const auto& v : vertices) {
        auto [it, fresh] = index_.emplace(v.id, static_cast<std::uint32_t>(ids_.size()));
        if (!fresh)
            throw std::invalid_argument("duplicate vertex id: " + v.id);
        ids_.push_back(v.id);
        mu_.push_back(v.mu);
    }
    const std::size_t n = ids_.size();

    bool any_h1 = false, any_h2 = false;
    for (const auto& v : vertices) {
        any_h1 = any_h1 || v.h1.has_value();
        any_h2 = any_h2 || v.h2.has_value();
    }
    if (any_h1) h1_.assign(n, std::numeric_limits<double>::quiet_NaN());
    if (any_h2) h2_.assign(n, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < n; ++i) {
        if (any_h1 && vertices[i].h1) h1_[i] = *vertices[i].h1;
        if (any_h2 && vertices[i].h2) h2_[i] = *vertices[i].h2;
        for (const auto& [name, val] : vertices[i].attributes) {
            auto& col = attributes_[name];
            if (col.values.empty()) {
                col.values.assign(n, std::numeric_limits<double>::quiet_NaN());
                col.present.assign(n, false);
            }
            col.values[i] = val;
            col.present[i] = true;
            ++col.count;
        }
    }

    edges_.reserve(edges.size());
    for (const auto& e : edges) {
        auto ia = find(e.a), ib = find(e.b);
        if (!ia) throw std::invalid_argument("edge endpoint not a vertex: " + e.a);
        if (!ib) throw std::invalid_argument("edge endpoint not a vertex: " + e.b);
        Edge rec{*ia, *ib, e.w};
        if (rec.a > rec.b) std::swap(rec.a, rec.b);
        edges_.push_back(rec);
    }

    // CSR adjacency, rows sorted by neighbor index so per-vertex sums have a
    // fixed order.
    std::vector<std::uint32_t> degree(n, 0);
    for (const auto& e : edges_) {
        ++degree[e.a];
        if (e.b != e.a) ++degree[e.b];
    }
    row_begin_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) row_begin_[i + 1] = row_begin_[i] + degree[i];
    halves_.resize(row_begin_[n]);
    std::vector<std::uint32_t> fill(row_begin_.begin(), row_begin_.end() - 1);
    for (const auto& e : edges_) {
        halves_[fill[e.a]++] = {e.b, e.w};
        if (e.b != e.a) halves_[fill[e.b]++] = {e.a, e.w};
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::sort(halves_.begin() + row_begin_[i], halves_.begin() + row_begin_[i + 1],
                  [](const HalfEdge& l, const HalfEdge& r) {
                      return l.to != r.to ? l.to < r.to : l.w < r.w;
                  });
    }

    total_measure_ = 0.0;
    for (double m : mu_) total_measure_ += m;

    specs_ = std::move(vertices);
}

std::optional<std::uint32_t> WeightedGraph::find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::span<const HalfEdge> WeightedGraph::neighbors(std::uint32_t x) const {
    return {halves_.data() + row_begin_[x], halves_.data() + row_begin_[x + 1]};
}

const std::vector<double>* WeightedGraph::attribute(const std::string& name) const {
    auto it = attributes_.find(name);
    if (it == attributes_.end()) return nullptr;
    return &it->second.values;
}

bool WeightedGraph::attribute_complete(const std::string& name) const {
    auto it = attributes_.find(name);
    return it != attributes_.end() && it->second.count == size();
}

std::vector<std::string> WeightedGraph::attribute_names() const {
    std::vector<std::string> names;
    names.reserve(attributes_.size());
    for (const auto& [name, col] : attributes_) names.push_back(name);
    return names;
}

bool WeightedGraph::connected() const {
    const std::size_t n = size();
    if (n == 0) return true;
    std::vector<std::uint8_t> seen(n, 0);
    std::queue<std::uint32_t> frontier;
    frontier.push(0);
    seen[0] = 1;
    std::size_t visited = 1;
    while (!frontier.empty()) {
        const std::uint32_t x = frontier.front();
        frontier.pop();
        for (const HalfEdge& h : neighbors(x)) {
            if (!seen[h.to]) {
                seen[h.to] = 1;
                ++visited;
                frontier.push(h.to);
            }
        }
    }
    return visited == n;
}

std::vector<Violation> WeightedGraph::validate(bool require_connected) const {
    std::vector<Violation> out;
    const std::size_t n = size();

    if (!(mu_floor_ > 0.0) || !std::isfinite(mu_floor_))
        out.push_back({"mu_floor_nonpositive",
                       "recorded measure floor must be finite and positive"});

    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(mu_[i]))
            out.push_back({"mu_not_finite", "vertex " + ids_[i]});
        else if (std::isfinite(mu_floor_) && mu_floor_ > 0.0 && mu_[i] < mu_floor_)
            out.push_back({"mu_below_floor", "vertex " + ids_[i]});
        if (has_h1()) {
            if (std::isnan(h1_[i]))
                out.push_back({"h1_missing", "vertex " + ids_[i]});
            else if (!(h1_[i] > 0.0) || !std::isfinite(h1_[i]))
                out.push_back({"h1_nonpositive", "vertex " + ids_[i]});
        }
        if (has_h2()) {
            if (std::isnan(h2_[i]))
                out.push_back({"h2_missing", "vertex " + ids_[i]});
            else if (!(h2_[i] > 0.0) || !std::isfinite(h2_[i]))
                out.push_back({"h2_nonpositive", "vertex " + ids_[i]});
        }
    }

    for (const auto& [name, col] : attributes_) {
        for (std::size_t i = 0; i < n; ++i)
            if (col.present[i] && !std::isfinite(col.values[i]))
                out.push_back({"attribute_not_finite", name + " at vertex " + ids_[i]});
    }

    std::map<std::pair<std::uint32_t, std::uint32_t>, int> seen_pairs;
    for (const auto& e : edges_) {
        if (!(e.w > 0.0) || !std::isfinite(e.w))
            out.push_back({"weight_nonpositive",
                           "edge " + ids_[e.a] + " -- " + ids_[e.b]});
        if (e.a == e.b)
            out.push_back({"self_loop", "vertex " + ids_[e.a]});
        else if (++seen_pairs[{e.a, e.b}] == 2)
            out.push_back({"duplicate_edge",
                           "edge " + ids_[e.a] + " -- " + ids_[e.b]});
    }

    if (require_connected && !connected())
        out.push_back({"disconnected", "graph is not connected"});

    return out;
}

Domain compute_boundary(const WeightedGraph& g, std::vector<std::uint32_t> omega) {
    const std::size_t n = g.size();
    Domain d;
    d.in_omega_.assign(n, 0);
    d.in_closure_.assign(n, 0);
    std::sort(omega.begin(), omega.end());
    omega.erase(std::unique(omega.begin(), omega.end()), omega.end());
    for (std::uint32_t x : omega) {
        if (x >= n) throw std::invalid_argument("domain vertex index out of range");
        d.in_omega_[x] = 1;
        d.in_closure_[x] = 1;
    }
    d.omega_ = std::move(omega);
    for (std::uint32_t x : d.omega_)
        for (const HalfEdge& h : g.neighbors(x))
            if (!d.in_omega_[h.to] && !d.in_closure_[h.to]) {
                d.in_closure_[h.to] = 1;
                d.boundary_.push_back(h.to);
            }
    std::sort(d.boundary_.begin(), d.boundary_.end());
    d.closure_.reserve(d.omega_.size() + d.boundary_.size());
    std::merge(d.omega_.begin(), d.omega_.end(), d.boundary_.begin(), d.boundary_.end(),
               std::back_inserter(d.closure_));
    for (std::uint32_t x : d.omega_) d.omega_measure_ += g.mu(x);
    for (std::uint32_t x : d.closure_) d.closure_measure_ += g.mu(x);
    return d;
}

Domain compute_boundary_ids(const WeightedGraph& g, const std::vector<std::string>& omega_ids) {
    std::vector<std::uint32_t> omega;
    omega.reserve(omega_ids.size());
    for (const auto& id : omega_ids) {
        auto ix = g.find(id);
        if (!ix) throw std::invalid_argument("domain vertex not in graph: " + id);
        omega.push_back(*ix);
    }
    return compute_boundary(g, std::move(omega));
}

static void check_aligned(const WeightedGraph& g, const VertexFunction& f) {
    if (f.size() != g.size())
        throw std::invalid_argument("vertex function length does not match graph size");
}

double integrate(const WeightedGraph& g, const VertexFunction& f) {
    check_aligned(g, f);
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += g.mu(static_cast<std::uint32_t>(i)) * f[i];
    return s;
}

double integrate(const WeightedGraph& g, const VertexFunction& f, const Domain& dom) {
    check_aligned(g, f);
    double s = 0.0;
    for (std::uint32_t x : dom.omega()) s += g.mu(x) * f[x];
    return s;
}

double integrate_closure(const WeightedGraph& g, const VertexFunction& f, const Domain& dom) {
    check_aligned(g, f);
    double s = 0.0;
    for (std::uint32_t x : dom.closure()) s += g.mu(x) * f[x];
    return s;
}

}  // namespace polylap
