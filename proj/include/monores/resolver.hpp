// The resolution driver: orthant splits, quasi-translations (case 2), face
// charts from the Newton polyhedron, unit-zero translation recursion, and the
// assembled chart tree.
#pragma once

#include "monores/charts.hpp"
#include "monores/polyhedron.hpp"

namespace monores {

struct ResolutionConfig {
    int working_degree = 24;
    int max_depth = -1;  // -1: n * order + 8
    unsigned long long seed = 12345;
    std::size_t unit_samples = 200;
    std::size_t zero_search_samples = 3000;
    bool positive_orthant_only = false;
    Rat smoothing_c{1, 8};
    Rat eta{1, 4};
    int escalation_retries = 3;
    int eta_halvings = 8;
    int jobs = 1;
};

struct ResolutionStats {
    std::size_t chart_count = 0;
    int max_depth = 0;
    std::size_t unresolved = 0;
    std::size_t precision_losses = 0;
    std::size_t quasi_translations = 0;
    std::size_t translations = 0;
    std::size_t eta_shrinks = 0;
};

struct ResolutionResult {
    std::unique_ptr<ChartNode> root;
    std::vector<Jet> fs;
    Jet product;
    ResolutionConfig config;
    ResolutionStats stats;
    Rat eta_used{1, 4};  // the tree covers (-eta_used, eta_used)^n

    std::vector<const ChartNode*> leaves() const;
    bool fully_resolved() const { return stats.unresolved == 0 && stats.precision_losses == 0; }
};

ResolutionResult resolve_germ(const std::vector<Jet>& fs, const ResolutionConfig& cfg);

// Sum over leaves of the telescoped weights along the path, each factor
// evaluated in its own coordinates (steps inverted numerically). Equals 1
// on the covered box, away from the coordinate hyperplanes.
double coverage_value(const ResolutionResult& res, const std::vector<double>& x);

// Series solution r(x') of d^{k}g/dx_n^{k}(x', r(x')) = 0 with r(0) = 0,
// truncated at degree d; requires the pure x_n^{k+1} coefficient of g to be
// nonzero. Newton iteration on jets.
Jet implicit_series_root(const Jet& g, int derivative_order, int degree);

// Shear x_m -> x_m + c_m x_n making the pure x_n^kappa coefficient nonzero
// (Theorem 2.4 normal form). Returns the quasi-translation steps, empty when
// the germ is already in that form; nullopt if the search fails.
std::optional<std::vector<CoordinateChange>> to_theorem24_form(const Jet& g, int max_coeff = 8);

}  // namespace monores
