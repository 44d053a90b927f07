#include "ppszlab/numeric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <thread>

namespace ppszlab {

const char* version() { return PPSZLAB_VERSION; }

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(mix64(seed) ^ (index * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL));
}

double uniform01(Rng& rng) {
    // 53 random bits, never exactly 1.
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                    double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6 * (fa + 4 * flm + fm);
    double right = (b - m) / 6 * (fm + 4 * frm + fb);
    double diff = left + right - whole;
    if (depth <= 0 || std::fabs(diff) <= 15 * tol) return left + right + diff / 15;
    return simpson_step(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double simpson(const std::function<double(double)>& f, double a, double b, double tol) {
    if (b <= a) return 0;
    // Start from a few panels so that narrow features are not skipped.
    const int panels = 16;
    double h = (b - a) / panels, sum = 0;
    for (int i = 0; i < panels; ++i) {
        double x0 = a + i * h, x1 = (i + 1 == panels) ? b : a + (i + 1) * h;
        double f0 = f(x0), f1 = f(x1), fm = f(0.5 * (x0 + x1));
        double whole = (x1 - x0) / 6 * (f0 + 4 * fm + f1);
        sum += simpson_step(f, x0, x1, f0, fm, f1, whole, tol / panels, 48);
    }
    return sum;
}

constexpr std::array<double, 10> kGlX = {
    -0.9739065285171717, -0.8650633666889845, -0.6794095682990244, -0.4333953941292472,
    -0.1488743389816312, 0.1488743389816312,  0.4333953941292472,  0.6794095682990244,
    0.8650633666889845,  0.9739065285171717};
constexpr std::array<double, 10> kGlW = {
    0.0666713443086881, 0.1494513491505806, 0.2190863625159820, 0.2692667193099963,
    0.2955242247147529, 0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
    0.1494513491505806, 0.0666713443086881};

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 const std::vector<double>& breaks) {
    std::vector<double> pts{a};
    for (double x : breaks)
        if (x > a && x < b) pts.push_back(x);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    double total = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) total += simpson(f, pts[i], pts[i + 1], tol);
    return total;
}

double integrate2d(const std::function<double(double, double)>& f, const std::vector<double>& breaks,
                   int panels_per_piece) {
    std::vector<double> pts{0.0};
    for (double x : breaks)
        if (x > 0 && x < 1) pts.push_back(x);
    pts.push_back(1.0);
    std::sort(pts.begin(), pts.end());
    std::vector<double> nodes, weights;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double h = (pts[i + 1] - pts[i]) / panels_per_piece;
        for (int p = 0; p < panels_per_piece; ++p) {
            double lo = pts[i] + p * h, mid = lo + h / 2;
            for (int j = 0; j < 10; ++j) {
                nodes.push_back(mid + h / 2 * kGlX[j]);
                weights.push_back(h / 2 * kGlW[j]);
            }
        }
    }
    double total = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        double row = 0;
        for (std::size_t j = 0; j < nodes.size(); ++j) row += weights[j] * f(nodes[i], nodes[j]);
        total += weights[i] * row;
    }
    return total;
}

double bisect(const std::function<double(double)>& f, double a, double b, double tol) {
    double fa = f(a);
    if (fa == 0) return a;
    for (int it = 0; it < 200 && b - a > tol; ++it) {
        double m = 0.5 * (a + b);
        double fm = f(m);
        if (fm == 0) return m;
        if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

Extremum maximize(const std::function<double(double)>& f, double a, double b, int grid) {
    int best = 0;
    double bestv = f(a);
    for (int i = 1; i <= grid; ++i) {
        double v = f(a + (b - a) * i / grid);
        if (v > bestv) {
            bestv = v;
            best = i;
        }
    }
    double lo = a + (b - a) * std::max(0, best - 1) / grid;
    double hi = a + (b - a) * std::min(grid, best + 1) / grid;
    const double g = (std::sqrt(5.0) - 1) / 2;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    double x = 0.5 * (lo + hi), v = f(x);
    if (v < bestv) return {a + (b - a) * best / grid, bestv};
    return {x, v};
}

Extremum minimize(const std::function<double(double)>& f, double a, double b, int grid) {
    auto e = maximize([&](double x) { return -f(x); }, a, b, grid);
    return {e.x, -e.value};
}

Estimate summarize(const std::vector<double>& samples) {
    Estimate e;
    e.trials = samples.size();
    if (samples.empty()) return e;
    double sum = 0;
    for (double s : samples) sum += s;
    e.mean = sum / samples.size();
    if (samples.size() > 1) {
        double ss = 0;
        for (double s : samples) ss += (s - e.mean) * (s - e.mean);
        e.stderr_ = std::sqrt(ss / (samples.size() - 1) / samples.size());
    }
    return e;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::size_t workers = std::min<std::size_t>(threads, count);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

double kolmogorov_pvalue(double d, std::size_t n) {
    double sn = std::sqrt(static_cast<double>(n));
    double x = (sn + 0.12 + 0.11 / sn) * d;
    if (x < 1e-3) return 1.0;
    double sum = 0;
    for (int k = 1; k <= 100; ++k) {
        double term = std::exp(-2.0 * k * k * x * x);
        sum += (k % 2 ? 1 : -1) * term;
        if (term < 1e-16) break;
    }
    return std::clamp(2 * sum, 0.0, 1.0);
}

}  // namespace ppszlab
