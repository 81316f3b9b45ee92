// Regions per compact face, constant schedules, dual cone generators,
// simplicial cone triangulation, integer monomial maps, and the quasibump
// partition of unity.
#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "monores/polyhedron.hpp"

namespace monores {

struct DegenerateFace : std::runtime_error {
    explicit DegenerateFace(const std::string& w) : std::runtime_error(w) {}
};

struct MonomialData {
    Rat coefficient{1};
    MultiIndex exponents;
};

// p(x)/q(x) < bound, strict, on the positive orthant.
struct RegionInequality {
    MonomialData p, q;
    Rat bound{1};
};

// Excluded sup-norm box |x - center|_inf < radius.
struct RegionHole {
    std::vector<Rat> center;
    Rat radius{0};
};

struct RegionDescription {
    std::size_t dimension = 0;
    std::vector<RegionInequality> inequalities;
    std::vector<RegionHole> holes;
    Rat eta{1, 4};
    std::vector<int> orthant;  // signs, +1/-1 per coordinate
};

struct ConstantSchedule {
    Rat A1{4};
    Rat A2{4};
    std::vector<Rat> C;  // C_0..C_n
    Rat eta{1, 4};
    int escalations = 0;
};

// Dual data of Lemma 4.1 for one compact face, with normals extended to a full
// independent set (a^n = e_n when dim > 0).
struct DualGenerators {
    RMat a;       // n rows: extended normals
    RMat b;       // n rows: b_l with a^l . b_l > 0 (b_n normalized so b_nn = 1 when dim > 0)
    RMat L;       // L = B^{-1} (columns of B are the b_l); x^alpha = y^{L alpha}
    RMat d;       // d[l][m] = coefficient of b_l in e_m, all >= 0
};

struct SimplicialCone {
    std::vector<std::vector<Int>> rays;      // d primitive integer generators
    std::vector<std::vector<Int>> normals;   // q^{p,l}: cone = {S : S . q < 0}
    std::vector<long long> rescale;          // N_l, filled by integer_monomial_map
};

// One multiplicative factor of a quasibump weight.
struct CutoffFactor {
    enum Kind { Ratio, Box, Orthant } kind = Ratio;
    // Ratio: smoothstep plateau on p/q <= bound, fading to 0 at bound*(1+c)
    RegionInequality ineq;
    // Box: plateau on |x - center|_inf <= radius/(1+c), zero outside radius
    std::vector<Rat> center;
    Rat radius{0};
    // Orthant: indicator of the sign pattern
    std::vector<int> signs;
};

// Telescoped weight: beta = (product of own factors) * prod over predecessor
// groups of (1 - product of that group's factors).
struct PartitionWeight {
    std::vector<CutoffFactor> own;
    std::vector<std::vector<CutoffFactor>> complemented;
    Rat smoothing_c{1, 8};
};

ConstantSchedule constant_schedule(const NewtonPolyhedron& p);
ConstantSchedule escalate(const ConstantSchedule& s, const NewtonPolyhedron& p);

RegionDescription region_for_face(const NewtonPolyhedron& p, std::size_t face_index,
                                  const ConstantSchedule& constants);

DualGenerators dual_generators(const NewtonPolyhedron& p, const Face& f);

// Triangulate {S : S . u_l < 0 for all l} within every sign orthant of R^d.
std::vector<SimplicialCone> triangulate_cone(const std::vector<std::vector<Int>>& u, std::size_t d);

// Clear denominators of the rational exponent rows (z_l exponents in each x_m)
// with per-row integers N_l; row fixed_row (if set) must come out integral as is.
IMatrix integer_monomial_map(const RMat& zrows, std::vector<long long>& n_out,
                             std::optional<std::size_t> fixed_row);

std::vector<PartitionWeight> build_partition(const std::vector<RegionDescription>& regions,
                                             const Rat& smoothing_c);

double evaluate_cutoff(const CutoffFactor& f, double c, const std::vector<double>& x);
double evaluate_weight(const PartitionWeight& w, const std::vector<double>& x);

// Smoothstep plateau profile: 1 for t <= 1, 0 for t >= 1 + c.
double plateau(double t, double c);

}  // namespace monores
