#include "ppszlab/gw.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "ppszlab/numeric.hpp"

namespace ppszlab::gw {

namespace {

void check_r(double r) {
    if (!(r >= 0.0 && r <= 1.0)) throw Error("r out of [0,1]");
}

double iterate_q(int k, double r, double tol) {
    // The map is monotone, so iterates from 0 climb to the smallest fixed point.
    // Near the critical point convergence is slow; Newton steps on the residual
    // take over once the iterate is close, always staying below the root.
    double qv = 0;
    auto g = [&](double x) { return std::pow(r + (1 - r) * x, k - 1); };
    for (int it = 0; it < 2000000; ++it) {
        double next = g(qv);
        if (std::fabs(next - qv) < tol * 1e-3) return next;
        qv = next;
        if (it > 50 && it % 50 == 0) {
            // Newton from below on h(x) = g(x) - x, which is convex; the step
            // never overshoots the smallest root.
            for (int nt = 0; nt < 100; ++nt) {
                double h = g(qv) - qv;
                double dh = (k - 1) * (1 - r) * std::pow(r + (1 - r) * qv, k - 2) - 1;
                if (dh >= 0) break;
                double step = -h / dh;
                if (!(step > 0)) break;
                qv += step;
                if (step < tol * 1e-3) return std::min(qv, 1.0);
            }
        }
    }
    return qv;
}

}  // namespace

double q(int k, double r, double tolerance) {
    if (k < 2) throw Error("k must be >= 2");
    check_r(r);
    if (k == 2) return r > 0 ? 1.0 : 0.0;
    if (r >= critical_r(k)) return 1.0;
    if (k == 3) {
        double t = r / (1 - r);
        return t * t;
    }
    return iterate_q(k, r, tolerance);
}

double q_truncated(int k, double r, int depth) {
    if (k < 2) throw Error("k must be >= 2");
    if (depth < 0) throw Error("depth must be nonnegative");
    check_r(r);
    double qv = 0;
    for (int i = 0; i < depth; ++i) qv = std::pow(r + (1 - r) * qv, k - 1);
    return qv;
}

double p(int k, double r, double tolerance) {
    check_r(r);
    return vee(r, q(k, r, tolerance));
}

double s(int k) {
    if (k < 3) throw Error("s(k) needs k >= 3");
    static std::map<int, double> cache;
    static std::mutex mu;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(k);
        if (it != cache.end()) return it->second;
    }
    const double c = critical_r(k);
    double val = integrate([k](double r) { return q(k, r); }, 0.0, c, 1e-12) + (1.0 - c);
    std::lock_guard<std::mutex> lock(mu);
    cache[k] = val;
    return val;
}

double q_prime(double r) {
    check_r(r);
    if (r >= 0.5) return 0.0;
    return 2 * r / std::pow(1 - r, 3);
}

double q_prime_k(int k, double r) {
    check_r(r);
    if (r >= critical_r(k)) return 0.0;
    double qv = q(k, r);
    double pv = vee(r, qv);
    double a = (k - 1) * std::pow(pv, k - 2);
    return a * (1 - qv) / (1 - a * (1 - r));
}

double b_twocc(double r) {
    check_r(r);
    if (r >= 0.5) return 1.0;
    double u = 1 - 2 * r;
    return 1 + u * u * (1 - 2 * r + 2 * r * r) / ((1 - r) * (1 - r));
}

}  // namespace ppszlab::gw
