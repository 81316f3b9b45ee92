// Post-processing of a resolution: integrability polytope (Theorem 1.1),
// log-canonical threshold, and Lojasiewicz exponents.
#pragma once

#include "monores/resolver.hpp"

namespace monores {

struct UnresolvedCharts : std::runtime_error {
    explicit UnresolvedCharts(const std::string& w) : std::runtime_error(w) {}
};

struct ContainmentViolated : std::runtime_error {
    ContainmentViolated(std::size_t leaf, std::size_t axis)
        : std::runtime_error("zero-set containment violated at leaf " + std::to_string(leaf) +
                             ", axis " + std::to_string(axis + 1)),
          leaf(leaf), axis(axis) {}
    std::size_t leaf, axis;
};

// sum_l eps_l * s_l < t, with provenance (leaf index in DFS order, axis).
struct PolytopeInequality {
    std::vector<Rat> s;
    Rat t;
    std::size_t leaf = 0;
    std::size_t axis = 0;
};

struct ExponentPolytope {
    std::size_t m = 0;  // number of functions
    std::vector<PolytopeInequality> inequalities;
};

enum class Integrability { Finite, Infinite, Boundary };

ExponentPolytope integrability_polytope(const ResolutionResult& res);

// Drop inequalities implied by the rest (exact Fourier-Motzkin, m <= 3;
// larger systems are only deduplicated).
ExponentPolytope prune(const ExponentPolytope& p);

Rat lct(const ExponentPolytope& p);
Rat lct(const ResolutionResult& res);

Integrability check_integrability(const ExponentPolytope& p, const std::vector<Rat>& eps);

struct LojasiewiczResult {
    Rat mu{0};
    std::size_t leaf = 0;
    std::size_t axis = 0;
};

// res must come from resolve_germ({f1, f2}).
LojasiewiczResult lojasiewicz_exponent(const ResolutionResult& res);

}  // namespace monores
