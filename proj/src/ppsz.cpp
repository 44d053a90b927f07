#include "ppszlab/ppsz.hpp"

#include <algorithm>
#include <cmath>

namespace ppszlab {

std::string Label::to_string() const { return id > 0 ? "x" + std::to_string(id) : "f" + std::to_string(-id - 1); }

void Placement::set(Label l, double v) {
    if (!(v >= 0.0 && v <= 1.0)) throw Error("placement value out of [0,1] for " + l.to_string());
    values_[l] = v;
}

double Placement::get(Label l) const {
    auto it = values_.find(l);
    if (it == values_.end()) throw Error("placement has no value for " + l.to_string());
    return it->second;
}

Placement Placement::from_vars(const std::vector<double>& by_var) {
    Placement p;
    for (std::size_t v = 1; v < by_var.size(); ++v) p.set(Label::var(static_cast<VarId>(v)), by_var[v]);
    return p;
}

Order permutation_from_placement(const Placement& pi, const std::vector<VarId>& vars) {
    std::vector<std::pair<double, VarId>> keyed;
    keyed.reserve(vars.size());
    for (VarId v : vars) keyed.emplace_back(pi.get(Label::var(v)), v);
    std::sort(keyed.begin(), keyed.end());
    Order out;
    for (auto& kv : keyed) out.push_back(kv.second);
    return out;
}

int FixedCoins::next() {
    if (pos_ >= bits_.size()) throw Error("coin stream exhausted");
    return bits_[pos_++];
}

PpszOutcome run_fixed(const CnfFormula& f, const Order& order, int w, CoinSource& coins, const ImplyOptions& opt) {
    PpszOutcome out;
    out.assignment.values.assign(f.n + 1, 0);
    out.forced_mask.assign(f.n + 1, false);
    CnfFormula cur = f;
    for (VarId x : order) {
        bool one = w_implies(cur, w, x, 1, opt);
        bool zero = !one && w_implies(cur, w, x, 0, opt);
        int b;
        if (one || zero) {
            b = one ? 1 : 0;  // both implied only when cur is unsatisfiable; pick 1
            out.forced_mask[x] = true;
        } else {
            b = coins.next();
            ++out.guessed_count;
        }
        out.assignment.values[x] = static_cast<std::uint8_t>(b);
        PartialAssignment rho(f.n);
        rho.set(x, b);
        cur = restrict_formula(cur, rho);
    }
    out.success = satisfies(f, out.assignment);
    return out;
}

bool is_all_ones_normalized(const CnfFormula& f) { return satisfies(f, Assignment::all_ones(f.n)); }

bool forced(const CnfFormula& f, const Order& order, int w, VarId x, const ImplyOptions& opt) {
    if (!is_all_ones_normalized(f)) throw Error("forced: formula is not normalized to the all-ones solution");
    PartialAssignment a(f.n);
    bool seen = false;
    for (VarId v : order) {
        if (v == x) {
            seen = true;
            break;
        }
        a.set(v, 1);
    }
    if (!seen) throw Error("forced: variable not in order");
    return w_implies(restrict_formula(f, a), w, x, 1, opt);
}

int forced_count(const CnfFormula& f, const Order& order, int w, const ImplyOptions& opt) {
    if (!is_all_ones_normalized(f)) throw Error("forced: formula is not normalized to the all-ones solution");
    int count = 0;
    CnfFormula cur = f;
    for (VarId x : order) {
        if (w_implies(cur, w, x, 1, opt)) ++count;
        PartialAssignment rho(f.n);
        rho.set(x, 1);
        cur = restrict_formula(cur, rho);
    }
    return count;
}

double Dyadic::to_double() const { return std::ldexp(1.0, -neg_exponent); }

bool Dyadic::equals_fraction(std::uint64_t num, int denom_log2) const {
    if (num == 0) return false;
    while (num % 2 == 0 && denom_log2 > 0) {
        num /= 2;
        --denom_log2;
    }
    return num == 1 && denom_log2 == neg_exponent;
}

std::string Dyadic::to_string() const { return "1/2^" + std::to_string(neg_exponent); }

Dyadic exact_success_probability(const CnfFormula& f, const Order& order, int w, const ImplyOptions& opt) {
    return Dyadic{f.n - forced_count(f, order, w, opt)};
}

namespace {

struct OutOfCoins {};

class PrefixCoins : public CoinSource {
public:
    explicit PrefixCoins(const std::vector<int>& bits) : bits_(bits) {}
    int next() override {
        if (pos_ >= bits_.size()) throw OutOfCoins{};
        return bits_[pos_++];
    }

private:
    const std::vector<int>& bits_;
    std::size_t pos_ = 0;
};

}  // namespace

CoinEnumeration enumerate_coins(const CnfFormula& f, const Order& order, int w, const ImplyOptions& opt) {
    if (f.n > 62) throw Error("enumerate_coins: n too large");
    CoinEnumeration e;
    e.denom_log2 = f.n;
    std::vector<int> prefix;
    std::function<void()> explore = [&] {
        PrefixCoins coins(prefix);
        ++e.runs;
        try {
            PpszOutcome o = run_fixed(f, order, w, coins, opt);
            if (o.success) e.successes += 1ULL << (f.n - prefix.size());
        } catch (const OutOfCoins&) {
            for (int bit = 0; bit < 2; ++bit) {
                prefix.push_back(bit);
                explore();
                prefix.pop_back();
            }
        }
    };
    explore();
    return e;
}

double PlacementSampler::sample_one(Label, Rng&) const {
    throw Error("sampler " + name() + " does not support per-label sampling");
}

Placement UniformSampler::sample(const std::vector<Label>& labels, Rng& rng) const {
    Placement p;
    for (Label l : labels) p.set(l, uniform01(rng));
    return p;
}

std::vector<Label> var_labels(int n) {
    std::vector<Label> out;
    for (VarId v = 1; v <= n; ++v) out.push_back(Label::var(v));
    return out;
}

SuccessEstimate success_probability_mc(const CnfFormula& f, int w, const PlacementSampler& dist, const McOptions& mc,
                                       const ImplyOptions& opt) {
    if (mc.trials < 1) throw Error("trials must be >= 1");
    const auto labels = var_labels(f.n);
    std::vector<VarId> vars;
    for (VarId v = 1; v <= f.n; ++v) vars.push_back(v);
    std::vector<double> value(mc.trials), forced_n(mc.trials);
    parallel_for(mc.trials, mc.threads, [&](std::size_t i) {
        Rng rng = trial_rng(mc.seed, i);
        Placement pi = dist.sample(labels, rng);
        Order order = permutation_from_placement(pi, vars);
        int fc = forced_count(f, order, w, opt);
        value[i] = std::ldexp(1.0, fc - f.n);
        forced_n[i] = fc;
    });
    SuccessEstimate out;
    out.success = summarize(value);
    out.forced_mean = summarize(forced_n).mean;
    return out;
}

}  // namespace ppszlab
