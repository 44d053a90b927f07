#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ppszlab/formula.hpp"
#include "ppszlab/implication.hpp"

namespace ppszlab {

// Tree labels: positive values are variables, negative values are fresh labels.
struct Label {
    int id = 0;
    static Label var(VarId v) { return Label{v}; }
    static Label fresh(int counter) { return Label{-(counter + 1)}; }
    bool is_var() const { return id > 0; }
    VarId as_var() const { return id; }
    auto operator<=>(const Label&) const = default;
    std::string to_string() const;
};

class Placement {
public:
    void set(Label l, double v);
    double get(Label l) const;  // throws if missing
    bool has(Label l) const { return values_.count(l) != 0; }
    std::size_t size() const { return values_.size(); }
    const std::map<Label, double>& values() const { return values_; }

    static Placement from_vars(const std::vector<double>& by_var);  // index 1..n

private:
    std::map<Label, double> values_;
};

using Order = std::vector<VarId>;

Order permutation_from_placement(const Placement& pi, const std::vector<VarId>& vars);

// Abstract coin source so that exhaustive enumeration and seeded RNG share run_fixed.
class CoinSource {
public:
    virtual ~CoinSource() = default;
    virtual int next() = 0;
};

class RngCoins : public CoinSource {
public:
    explicit RngCoins(Rng& rng) : rng_(rng) {}
    int next() override { return static_cast<int>(rng_() >> 63); }

private:
    Rng& rng_;
};

// Plays back a fixed bit vector; records how many bits were consumed.
class FixedCoins : public CoinSource {
public:
    explicit FixedCoins(std::vector<int> bits) : bits_(std::move(bits)) {}
    int next() override;
    std::size_t consumed() const { return pos_; }

private:
    std::vector<int> bits_;
    std::size_t pos_ = 0;
};

struct PpszOutcome {
    bool success = false;
    Assignment assignment;          // filled for every run; valid model iff success
    std::vector<bool> forced_mask;  // index 1..n
    int guessed_count = 0;
};

PpszOutcome run_fixed(const CnfFormula& f, const Order& order, int w, CoinSource& coins,
                      const ImplyOptions& opt = {});

bool forced(const CnfFormula& f, const Order& order, int w, VarId x, const ImplyOptions& opt = {});
int forced_count(const CnfFormula& f, const Order& order, int w, const ImplyOptions& opt = {});

// 2^{-e} held exactly.
struct Dyadic {
    int neg_exponent = 0;
    double to_double() const;
    bool equals_fraction(std::uint64_t num, int denom_log2) const;
    std::string to_string() const;
};

Dyadic exact_success_probability(const CnfFormula& f, const Order& order, int w, const ImplyOptions& opt = {});

// Exhaustive enumeration of coin streams through run_fixed.
struct CoinEnumeration {
    std::uint64_t successes = 0;  // weighted to a common denominator 2^n
    int denom_log2 = 0;
    std::uint64_t runs = 0;
};
CoinEnumeration enumerate_coins(const CnfFormula& f, const Order& order, int w, const ImplyOptions& opt = {});

bool is_all_ones_normalized(const CnfFormula& f);

// Anything able to produce a placement for a set of labels.
class PlacementSampler {
public:
    virtual ~PlacementSampler() = default;
    virtual Placement sample(const std::vector<Label>& labels, Rng& rng) const = 0;
    // Independent samplers can be queried label by label (lazy evaluation).
    virtual bool independent() const { return false; }
    virtual double sample_one(Label l, Rng& rng) const;
    virtual std::string name() const = 0;
};

class UniformSampler : public PlacementSampler {
public:
    Placement sample(const std::vector<Label>& labels, Rng& rng) const override;
    bool independent() const override { return true; }
    double sample_one(Label, Rng& rng) const override { return uniform01(rng); }
    std::string name() const override { return "uniform"; }
};

struct McOptions {
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    int threads = 1;
};

struct SuccessEstimate {
    Estimate success;
    double forced_mean = 0;
};

SuccessEstimate success_probability_mc(const CnfFormula& f, int w, const PlacementSampler& dist,
                                       const McOptions& mc, const ImplyOptions& opt = {});

std::vector<Label> var_labels(int n);

}  // namespace ppszlab
