// Floating-point cross-checks: Monte Carlo power-product integrals with a
// dyadic-shell divergence verdict, and partition-of-unity spot checks.
#pragma once

#include "monores/jet.hpp"
#include "monores/subdivision.hpp"

namespace monores {

enum class Verdict { ConvergentLikely, DivergentLikely, Inconclusive };

struct IntegralEstimate {
    double value = 0;
    double half_width = 0;
    std::vector<double> dyadic_trend;  // contribution of shell k, outermost first
    Verdict verdict = Verdict::Inconclusive;
};

struct OracleBudget {
    int shells = 12;
    std::size_t samples_per_shell = 20000;
    unsigned long long seed = 20240901;
};

// int over (-eta, eta)^n of prod_l |f_l|^{-eps_l}, stratified over the dyadic
// shells |x|_inf in [2^{-(k+1)} eta, 2^{-k} eta]. Importance sampling is
// log-uniform per coordinate (floored at 2^{-40} eta) so axis singularities
// keep finite variance. Bit-for-bit reproducible for a fixed budget.
IntegralEstimate integrate_power_product(const std::vector<Jet>& fs,
                                         const std::vector<double>& eps, double eta,
                                         const OracleBudget& budget = {});

// max |sum of weights - 1| over random interior points of (0, eta)^n
double partition_check(const std::vector<PartitionWeight>& weights, std::size_t n, double eta,
                       std::size_t samples, unsigned long long seed);

struct ThresholdReport {
    IntegralEstimate below;  // at eps0 - 0.05
    IntegralEstimate at;     // trend only; slow divergence may stay Inconclusive
    IntegralEstimate above;  // at eps0 + 0.05
};

ThresholdReport divergence_at_threshold(const Jet& f, const Rat& eps0, double eta = 0.25,
                                        const OracleBudget& budget = {});

}  // namespace monores
