#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ppszlab {

// Base error type for everything the library throws on bad input.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const char* version();

using Rng = std::mt19937_64;

// splitmix64 finalizer, used to derive independent per-trial streams.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index);
inline Rng trial_rng(std::uint64_t seed, std::uint64_t index) { return Rng(trial_seed(seed, index)); }
double uniform01(Rng& rng);

// Adaptive Simpson on [a,b]. `breaks` are interior points where the integrand
// has a kink; the interval is split there first.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-13, const std::vector<double>& breaks = {});

// Gauss-Legendre tensor rule on [0,1]^2 with panels split at `breaks`.
double integrate2d(const std::function<double(double, double)>& f,
                   const std::vector<double>& breaks = {}, int panels_per_piece = 8);

// Bisection for f(x) = 0 on [a,b] given f(a), f(b) of opposite sign (or zero).
double bisect(const std::function<double(double)>& f, double a, double b, double tol = 1e-14);

// Golden-section maximisation on [a,b] after a coarse grid scan.
struct Extremum {
    double x;
    double value;
};
Extremum maximize(const std::function<double(double)>& f, double a, double b, int grid = 2000);
Extremum minimize(const std::function<double(double)>& f, double a, double b, int grid = 2000);

struct Estimate {
    double mean = 0;
    double stderr_ = 0;
    std::size_t trials = 0;
};
Estimate summarize(const std::vector<double>& samples);

// Runs body(i) for i in [0, count) on `threads` workers. Callers write to
// index i only, so results do not depend on scheduling.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

// Kolmogorov distribution tail: P(K > x).
double kolmogorov_pvalue(double d, std::size_t n);

}  // namespace ppszlab
