// Coordinate changes, chart nodes, pushforwards of jets and points, and the
// monomial-times-unit normal forms of the Main Theorem.
#pragma once

#include <memory>
#include <optional>
#include <random>
#include <variant>

#include "monores/jet.hpp"
#include "monores/subdivision.hpp"

namespace monores {

struct UnitVanishes : std::runtime_error {
    explicit UnitVanishes(const std::string& w) : std::runtime_error(w) {}
};
struct SplitFailure : std::runtime_error {
    explicit SplitFailure(const std::string& w) : std::runtime_error(w) {}
};

// Axes are 1-based throughout.
struct Reflection {
    std::vector<std::size_t> axes;
};
struct Translation {
    std::vector<Rat> w;
};
struct QuasiTranslationStep {
    std::size_t axis;
    Jet r;  // in n-1 variables (axis removed), r(0) = 0
};
struct MonomialMapStep {
    IMatrix a;  // row m: exponents of the monomial substituted for x_m
};
using CoordinateChange = std::variant<Reflection, Translation, QuasiTranslationStep, MonomialMapStep>;

// f = x^exponents * unit, with |unit| in [lo, hi] on the chart region closure.
struct MonomializedForm {
    MultiIndex exponents;
    Jet unit;
    double lo = 0, hi = 0;
};

enum class ChartStatus { Internal, Terminal, Unresolved };

struct ChartNode {
    ChartStatus status = ChartStatus::Internal;
    std::vector<CoordinateChange> steps;  // parent coordinates -> this node's coordinates
    RegionDescription region;             // in this node's coordinates
    PartitionWeight weight;               // in parent coordinates
    std::vector<std::unique_ptr<ChartNode>> children;
    std::vector<MonomializedForm> f_forms;       // terminal leaves only
    MonomializedForm jac_form;
    std::vector<MonomializedForm> component_forms;
    std::string diagnostic;
    int depth = 0;
};

Jet push_jet(const Jet& f, const CoordinateChange& s);
Jet push_jet(Jet f, const std::vector<CoordinateChange>& steps);

// Point maps. Steps transform jets root-to-leaf; the corresponding point map
// sends leaf coordinates to parent coordinates.
std::vector<double> apply_steps(const std::vector<CoordinateChange>& steps, std::vector<double> z);
// Parent to leaf; fails (nullopt) when a monomial map cannot be inverted at x.
std::optional<std::vector<double>> invert_steps(const std::vector<CoordinateChange>& steps,
                                                std::vector<double> x);

// Factor f as x^content * unit. Bounds are left unset.
MonomializedForm monomialize(const Jet& f);

// det DPsi for the composite of the given steps, as a monomial-times-unit form
// in the leaf coordinates.
MonomializedForm jacobian_form(const std::vector<CoordinateChange>& steps, std::size_t n);

// Split the monomial form of a product across its factors; checks exponent
// additivity against the product form and throws SplitFailure on mismatch.
std::vector<MonomializedForm> monomial_split(const Jet& product, const std::vector<Jet>& factors);

// Pull a region description back through an invertible monomial map (exponent
// rewriting; bounds unchanged), keeping the orthant.
RegionDescription pull_back_region(const RegionDescription& r, const IMatrix& a);

// Rejection-sample points from the open region (positive orthant
// representative). May return fewer than count points.
std::vector<std::vector<double>> sample_region(const RegionDescription& r, std::size_t count,
                                               std::mt19937_64& rng);

// Sampled bounds on |u| over the region, widened by a safety factor of 2.
// Throws UnitVanishes if |u| dips below 1e-12 at a sample.
std::pair<double, double> certify_unit_bounds(const Jet& u, const RegionDescription& r,
                                              std::size_t samples, std::mt19937_64& rng);

}  // namespace monores
