#pragma once

#include <memory>
#include <optional>
#include <stdexcept>

#include "polylap/graph.hpp"
#include "polylap/nonlinearity.hpp"

namespace polylap {

enum class Mode { Finite, Dirichlet };

// A pair of vertex functions, the state the energy is evaluated on.
struct StatePair {
    VertexFunction u, v;
};

// Everything that fixes one variational problem: the graph, the boundary
// regime, the orders and exponents of the two operators, the coupling term,
// and (optionally) its growth envelope. In Dirichlet mode `domain` is the
// region Omega and admissible states vanish outside it; in finite mode the
// potentials h1, h2 on the graph are required.
struct ProblemInstance {
    std::shared_ptr<const WeightedGraph> graph;
    Mode mode = Mode::Finite;
    std::optional<Domain> domain;
    unsigned m1 = 1, m2 = 1;
    double p = 2.0, q = 2.0;
    Nonlinearity F;
    std::optional<GrowthEnvelope> envelope;
    double eps_regularization = 0.0;

    const WeightedGraph& g() const { return *graph; }
    std::size_t n() const { return graph->size(); }

    bool dirichlet() const { return mode == Mode::Dirichlet; }
    const Domain& dom() const {
        if (!domain) throw std::logic_error("instance has no domain");
        return *domain;
    }

    // measure of the active region: all of V, or Omega in Dirichlet mode
    double volume() const {
        return dirichlet() ? dom().omega_measure() : graph->total_measure();
    }

    std::size_t free_count() const {
        return dirichlet() ? dom().omega().size() : graph->size();
    }

    bool is_free(std::uint32_t x) const { return !dirichlet() || dom().in_omega(x); }

    StatePair zero_state() const {
        return {VertexFunction(n(), 0.0), VertexFunction(n(), 0.0)};
    }

    // the constant pair (a, b) on the active region, zero elsewhere
    StatePair constant_state(double a, double b) const;
};

// Visit the vertices a state may vary on, in canonical order.
template <class Fn>
void for_each_free(const ProblemInstance& inst, Fn&& fn) {
    if (inst.dirichlet()) {
        for (std::uint32_t x : inst.dom().omega()) fn(x);
    } else {
        const std::uint32_t n = static_cast<std::uint32_t>(inst.n());
        for (std::uint32_t x = 0; x < n; ++x) fn(x);
    }
}

inline StatePair ProblemInstance::constant_state(double a, double b) const {
    StatePair s = zero_state();
    for_each_free(*this, [&](std::uint32_t x) {
        s.u[x] = a;
        s.v[x] = b;
    });
    return s;
}

// Throws std::invalid_argument when the instance is not usable: missing
// graph, bad exponents or orders, missing domain or potentials for the mode,
// unbound nonlinearity.
void check_instance(const ProblemInstance& inst);

}  // namespace polylap
