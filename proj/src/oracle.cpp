#include "monores/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace monores {
namespace {

constexpr double kFloorScale = 9.094947017729282e-13;  // 2^-40

unsigned long long mix(unsigned long long s, unsigned long long k) {
    return s * 6364136223846793005ULL + 1442695040888963407ULL + k;
}

struct ShellEstimate {
    double mean = 0;
    double robust = 0;  // median of block means; immune to importance spikes
    double half_width = 0;
    // axis-divergence statistics: mass with mag_i below the 2^-30 R split,
    // and total mass, over samples whose designated-big coordinate is not i
    std::vector<double> axis_num, axis_den;
};

// |f| minima of t -> prod |f_l| along one free coordinate, on (0, R]. Scans a
// log grid, keeps the two smallest interior local minima, refines each by
// golden-section in log t. Deterministic, so the conditional density below is
// reproducible from the fixed coordinates alone.
std::vector<double> valley_centers(const std::vector<Jet>& fs, std::vector<double>& x,
                                   std::size_t c, double sign, double lo, double R) {
    constexpr int kGrid = 24;
    auto h = [&](double t) {
        x[c] = sign * t;
        double v = 1;
        for (auto& f : fs) v *= std::abs(f.evaluate(x));
        return v;
    };
    double step = std::log(R / lo) / (kGrid - 1);
    double hv[kGrid];
    for (int k = 0; k < kGrid; ++k) hv[k] = h(lo * std::exp(step * k));
    std::vector<std::pair<double, int>> mins;
    for (int k = 1; k + 1 < kGrid; ++k)
        if (hv[k] <= hv[k - 1] && hv[k] <= hv[k + 1]) mins.push_back({hv[k], k});
    std::sort(mins.begin(), mins.end());
    if (mins.size() > 2) mins.resize(2);
    std::vector<double> centers;
    const double gr = 0.6180339887498949;
    for (auto& [hk, k] : mins) {
        double a = std::log(lo) + step * (k - 1), b = a + 2 * step;
        double p = b - gr * (b - a), q = a + gr * (b - a);
        double hp = h(std::exp(p)), hq = h(std::exp(q));
        for (int it = 0; it < 60; ++it) {
            if (hp < hq) {
                b = q;
                q = p;
                hq = hp;
                p = b - gr * (b - a);
                hp = h(std::exp(p));
            } else {
                a = p;
                p = q;
                hp = hq;
                q = a + gr * (b - a);
                hq = h(std::exp(q));
            }
        }
        centers.push_back(std::exp((a + b) / 2));
    }
    return centers;
}

// Conditional magnitude density of the valley-aware free coordinate: an even
// mixture of the plain log-uniform draw and log-uniform offsets from the
// |f| minima (when any exist).
double valley_density(double t, const std::vector<double>& centers, double lo, double L,
                      double dlo, double Ld, double R) {
    double plu = (t >= lo && t <= R) ? 1.0 / (t * L) : 0.0;
    if (centers.empty()) return plu;
    double pv = 0;
    for (double c : centers) {
        double d = std::abs(t - c);
        if (d >= dlo && d <= R) pv += 1.0 / (2 * d * Ld);
    }
    pv /= centers.size();
    return 0.5 * plu + 0.5 * pv;
}

// One dyadic shell R/2 <= |x|_inf <= R. One coordinate (cycled) is designated
// "big" and drawn log-uniformly from [R/2, R]; the rest are log-uniform on
// [lo, R] with a floor relative to the shell scale, so axis singularities keep
// finite weights and every sample lands in the shell. In two dimensions with a
// non-monomial product, the free coordinate instead uses the valley-aware
// mixture so mass concentrated near the zero variety is actually sampled. The
// density is the equal-weight mixture over the choice of big coordinate. The
// same seed is used for every shell (common random numbers), so shell ratios
// of scale-invariant integrands carry little Monte Carlo noise.
ShellEstimate shell_integral(const std::vector<Jet>& fs, const std::vector<double>& eps,
                             std::size_t n, double R, std::size_t samples,
                             unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double lo = kFloorScale * R;
    const double lo2 = std::ldexp(R, -30);  // axis-statistic split point
    const double L = std::log(R / lo);
    const double ln2 = std::log(2.0);
    const double r = R / 2;
    const double dlo = kFloorScale * R;
    const double Ld = std::log(R / dlo);
    samples -= samples % n;

    bool curvy = false;
    for (auto& f : fs)
        if (f.terms().size() > 1) curvy = true;
    const bool valleys = curvy && n == 2;

    const std::size_t blocks = 25;
    std::vector<double> block_sums(blocks, 0.0);
    double sum = 0, sumsq = 0;
    ShellEstimate est;
    est.axis_num.assign(n, 0.0);
    est.axis_den.assign(n, 0.0);
    std::vector<double> x(n), mag(n), sgn(n);
    for (std::size_t j = 0; j < samples; ++j) {
        std::size_t big = j % n;
        for (std::size_t i = 0; i < n; ++i) sgn[i] = (u(rng) < 0.5) ? -1.0 : 1.0;
        mag[big] = r * std::exp(ln2 * u(rng));
        x[big] = sgn[big] * mag[big];
        std::vector<double> cen_label;
        bool in_range = true;
        if (valleys) {
            std::size_t c = 1 - big;
            cen_label = valley_centers(fs, x, c, sgn[c], lo, R);
            double t;
            if (u(rng) < 0.5 || cen_label.empty()) {
                t = lo * std::exp(L * u(rng));
            } else {
                std::size_t pick = std::min(cen_label.size() - 1,
                                            std::size_t(u(rng) * cen_label.size()));
                double side = (u(rng) < 0.5) ? -1.0 : 1.0;
                t = cen_label[pick] + side * dlo * std::exp(Ld * u(rng));
                if (t <= 0 || t > R) in_range = false;
            }
            mag[c] = t;
            x[c] = sgn[c] * t;
        } else {
            for (std::size_t i = 0; i < n; ++i)
                if (i != big) {
                    mag[i] = lo * std::exp(L * u(rng));
                    x[i] = sgn[i] * mag[i];
                }
        }
        if (!in_range) continue;  // weight zero, sample spent

        // mixture density over the big-coordinate choice, and the density of
        // the branch that actually produced the sample (for axis statistics)
        double q = 0, p_label = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mag[i] < r || mag[i] > R) continue;
            double term = 1.0 / (2 * mag[i] * ln2);
            if (valleys) {
                std::size_t c = 1 - i;
                const std::vector<double>& cen =
                    (i == big) ? cen_label : valley_centers(fs, x, c, sgn[c], lo, R);
                x[c] = sgn[c] * mag[c];  // valley_centers clobbers x[c]
                term *= valley_density(mag[c], cen, lo, L, dlo, Ld, R) / 2;
            } else {
                for (std::size_t k = 0; k < n; ++k)
                    if (k != i) term *= 1.0 / (2 * mag[k] * L);
            }
            q += term;
            if (i == big) p_label = term;
        }
        q /= n;
        if (q <= 0) continue;
        double g = 1;
        for (std::size_t l = 0; l < fs.size(); ++l) {
            double v = std::abs(fs[l].evaluate(x));
            v = std::max(v, 1e-300);
            g *= std::pow(v, -eps[l]);
        }
        double w = g / q;
        sum += w;
        sumsq += w * w;
        block_sums[j % blocks] += w;
        if (p_label > 0) {
            double wl = g / p_label;
            for (std::size_t i = 0; i < n; ++i) {
                if (i == big) continue;
                est.axis_den[i] += wl;
                if (mag[i] < lo2) est.axis_num[i] += wl;
            }
        }
    }
    double mean = sum / samples;
    double var = std::max(0.0, sumsq / samples - mean * mean);
    std::vector<double> bm;
    for (std::size_t b = 0; b < blocks; ++b)
        bm.push_back(block_sums[b] * blocks / samples);
    std::nth_element(bm.begin(), bm.begin() + blocks / 2, bm.end());
    est.mean = mean;
    est.robust = bm[blocks / 2];
    est.half_width = 1.96 * std::sqrt(var / samples);
    return est;
}

}  // namespace

IntegralEstimate integrate_power_product(const std::vector<Jet>& fs,
                                         const std::vector<double>& eps, double eta,
                                         const OracleBudget& budget) {
    if (fs.empty() || fs.size() != eps.size())
        throw std::invalid_argument("function and exponent counts differ");
    std::size_t n = fs.front().dim();

    IntegralEstimate out;
    double hw2 = 0;
    std::vector<ShellEstimate> shells;
    std::vector<double> axis_num(n, 0.0), axis_den(n, 0.0);
    for (int k = 0; k < budget.shells; ++k) {
        double R = eta * std::ldexp(1.0, -k);
        auto est = shell_integral(fs, eps, n, R, budget.samples_per_shell, mix(budget.seed, 1));
        for (std::size_t i = 0; i < n; ++i) {
            axis_num[i] += est.axis_num[i];
            axis_den[i] += est.axis_den[i];
        }
        shells.push_back(est);
        out.dyadic_trend.push_back(est.robust);
        out.value += est.mean;
        hw2 += est.half_width * est.half_width;
    }
    // Axis divergence: when a 1/|x_i|^b factor with b >= 1 dominates, most of
    // the sampled mass sits below the 2^-30 R split regardless of the shell.
    double axis_mass = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (axis_den[i] > 0) axis_mass = std::max(axis_mass, axis_num[i] / axis_den[i]);

    // trend analysis over the innermost shells
    int m = std::min(8, budget.shells);
    bool positive = true;
    for (int k = budget.shells - m; k < budget.shells; ++k)
        if (!(out.dyadic_trend[k] > 0)) positive = false;
    double slope = 0;
    if (positive && m >= 2) {
        double sk = 0, sy = 0, skk = 0, sky = 0;
        for (int k = budget.shells - m; k < budget.shells; ++k) {
            double y = std::log2(out.dyadic_trend[k]);
            sk += k;
            sy += y;
            skk += double(k) * k;
            sky += k * y;
        }
        slope = (m * sky - sk * sy) / (m * skk - sk * sk);
    }
    int nondec = 1, run = 1;  // longest non-decreasing run, in shells
    for (int k = 1; k < budget.shells; ++k) {
        if (out.dyadic_trend[k] >= 0.99 * out.dyadic_trend[k - 1]) ++run;
        else run = 1;
        nondec = std::max(nondec, run);
    }
    if (axis_mass >= 0.3)
        out.verdict = Verdict::DivergentLikely;
    else if (!positive)
        out.verdict = Verdict::Inconclusive;
    else if (slope >= -0.005 && nondec >= 6)
        out.verdict = Verdict::DivergentLikely;
    else if (slope <= -0.02)
        out.verdict = Verdict::ConvergentLikely;
    else
        out.verdict = Verdict::Inconclusive;

    if (out.verdict == Verdict::ConvergentLikely) {
        // geometric tail below the innermost shell
        double rho = std::exp2(slope);
        if (rho < 0.999) {
            double tail = shells.back().mean * rho / (1 - rho);
            out.value += tail;
            hw2 += (0.05 * tail) * (0.05 * tail);
        }
    }
    out.half_width = std::sqrt(hw2);
    return out;
}

double partition_check(const std::vector<PartitionWeight>& weights, std::size_t n, double eta,
                       std::size_t samples, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(1e-6 * eta, eta);
    double worst = 0;
    std::vector<double> x(n);
    for (std::size_t j = 0; j < samples; ++j) {
        for (std::size_t i = 0; i < n; ++i) x[i] = u(rng);
        double s = 0;
        for (auto& w : weights) s += evaluate_weight(w, x);
        worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
}

ThresholdReport divergence_at_threshold(const Jet& f, const Rat& eps0, double eta,
                                        const OracleBudget& budget) {
    double e0 = to_double(eps0);
    ThresholdReport rep;
    rep.below = integrate_power_product({f}, {e0 - 0.05}, eta, budget);
    rep.at = integrate_power_product({f}, {e0}, eta, budget);
    rep.above = integrate_power_product({f}, {e0 + 0.05}, eta, budget);
    return rep;
}

}  // namespace monores
