#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "monores/oracle.hpp"
#include "monores/parse.hpp"
#include "monores/polyhedron.hpp"

using namespace monores;

TEST_CASE("one dimensional closed forms within one percent") {
    Jet x = parse_polynomial("x", {"x"});
    double eta = 0.25;
    for (double e : {0.25, 0.5, 0.75}) {
        auto est = integrate_power_product({x}, {e}, eta);
        double exact = 2 * std::pow(eta, 1 - e) / (1 - e);
        CHECK(std::abs(est.value - exact) <= 0.01 * exact);
        CHECK(est.verdict == Verdict::ConvergentLikely);
    }
}

TEST_CASE("xy at one half converges to the closed form") {
    Jet f = parse_polynomial("x*y", {"x", "y"});
    double eta = 0.25;
    auto est = integrate_power_product({f}, {0.5}, eta);
    double exact = 16 * eta;  // 4 * (2 sqrt(eta))^2
    CHECK(est.verdict == Verdict::ConvergentLikely);
    CHECK(std::abs(est.value - exact) <= 0.05 * exact);
}

TEST_CASE("divergence verdicts") {
    Jet xy = parse_polynomial("x*y", {"x", "y"});
    CHECK(integrate_power_product({xy}, {1.0}, 0.25).verdict == Verdict::DivergentLikely);
    Jet cusp = parse_polynomial("x^2 + y^3", {"x", "y"});
    CHECK(integrate_power_product({cusp}, {0.95}, 0.25).verdict == Verdict::DivergentLikely);
}

TEST_CASE("threshold sandwich verdicts") {
    Jet cusp = parse_polynomial("x^2 + y^3", {"x", "y"});
    auto rep = divergence_at_threshold(cusp, Rat(5, 6));
    CHECK(rep.below.verdict == Verdict::ConvergentLikely);
    CHECK(rep.above.verdict == Verdict::DivergentLikely);

    Jet x2 = parse_polynomial("x^2", {"x"});
    auto rep1 = divergence_at_threshold(x2, Rat(1, 2));
    CHECK(rep1.below.verdict == Verdict::ConvergentLikely);
    CHECK(rep1.above.verdict == Verdict::DivergentLikely);
    // quadrature cross-check below threshold: int |x|^{-0.9}
    double exact = 2 * std::pow(0.25, 0.1) / 0.1;
    CHECK(std::abs(rep1.below.value - exact) <= 0.02 * exact);

    auto repxy = divergence_at_threshold(parse_polynomial("x*y", {"x", "y"}), Rat(1));
    CHECK(repxy.below.verdict == Verdict::ConvergentLikely);
    CHECK(repxy.above.verdict == Verdict::DivergentLikely);
}

TEST_CASE("seeded reproducibility is bit for bit") {
    Jet f = parse_polynomial("x^2 + y^3", {"x", "y"});
    auto a = integrate_power_product({f}, {0.5}, 0.25);
    auto b = integrate_power_product({f}, {0.5}, 0.25);
    CHECK(a.value == b.value);
    CHECK(a.half_width == b.half_width);
    REQUIRE(a.dyadic_trend.size() == b.dyadic_trend.size());
    for (std::size_t k = 0; k < a.dyadic_trend.size(); ++k)
        CHECK(a.dyadic_trend[k] == b.dyadic_trend[k]);
    OracleBudget other;
    other.seed = 7;
    auto c = integrate_power_product({f}, {0.5}, 0.25, other);
    CHECK(c.value != a.value);
}

TEST_CASE("convergent at eps stays convergent at eps over two") {
    for (auto text : {"x^2 + y^3", "x*y", "x^2 + y^4", "x*y^2", "x^2*y^3"}) {
        Jet f = parse_polynomial(text, {"x", "y"});
        auto poly = build_polyhedron(f);
        double e = 0.8 / to_double(newton_distance(poly));
        auto full = integrate_power_product({f}, {e}, 0.25);
        auto half = integrate_power_product({f}, {e / 2}, 0.25);
        CHECK(full.verdict == Verdict::ConvergentLikely);
        CHECK(half.verdict == Verdict::ConvergentLikely);
    }
}

TEST_CASE("partition check") {
    PartitionWeight trivial;
    trivial.smoothing_c = Rat(1, 8);
    CHECK(partition_check({trivial}, 2, 0.25, 500, 3) == 0.0);

    Jet cusp = parse_polynomial("x^2 + y^3", {"x", "y"});
    auto poly = build_polyhedron(cusp);
    auto sch = constant_schedule(poly);
    std::vector<RegionDescription> regions;
    for (std::size_t fi = 0; fi < poly.compact_faces.size(); ++fi)
        regions.push_back(region_for_face(poly, fi, sch));
    auto weights = build_partition(regions, Rat(1, 8));
    CHECK(partition_check(weights, 2, to_double(sch.eta), 4000, 11) < 1e-9);
}
