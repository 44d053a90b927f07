#pragma once

namespace ppszlab::gw {

struct GwParams {
    int k = 3;
    double tolerance = 1e-12;
};

// Smallest root in [0,1] of Q = (r + (1-r) Q)^{k-1}.
double q(int k, double r, double tolerance = 1e-12);
// Q on the complete tree cut off at the given depth with safe leaves:
// depth steps of the recursion from 0. Increases to q(k, r) with depth.
double q_truncated(int k, double r, int depth);
// P = r v Q with a v b = a + b - ab.
double p(int k, double r, double tolerance = 1e-12);
// s_k = integral of Q_r over [0,1].
double s(int k);
// Right end of the nontrivial range: Q_r = 1 beyond it.
inline double critical_r(int k) { return (k - 2.0) / (k - 1.0); }

// dQ/dr, any k, from implicit differentiation; closed form 2r/(1-r)^3 for k = 3.
double q_prime(double r);
double q_prime_k(int k, double r);

// Bonus factor for variables with two critical clauses (k = 3).
double b_twocc(double r);

inline double vee(double a, double b) { return a + b - a * b; }

}  // namespace ppszlab::gw
