#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ppszlab/formula.hpp"
#include "ppszlab/ppsz.hpp"

namespace ppszlab {

enum class LeafKind { Internal, Safe, Unsafe };

struct TreeNode {
    Label label;
    int parent = -1;
    int depth = 0;
    std::vector<int> children;
    bool canonical = false;
    LeafKind kind = LeafKind::Internal;
    std::optional<Clause> clause;  // critical clause trees only, depth < h
};

class LabeledTree {
public:
    std::vector<TreeNode> nodes;  // nodes[0] is the root, BFS order
    int height = 0;

    const TreeNode& root() const { return nodes.at(0); }
    std::size_t size() const { return nodes.size(); }
    std::vector<Label> labels() const;  // distinct labels
    std::vector<int> path_to(int node) const;  // root ... node
    bool path_labels_distinct() const;
    int safe_leaf_count() const;
};

// A labeled tree whose internal nodes carry clause labels.
struct CriticalClauseTree : LabeledTree {
    VarId root_var = 0;
};

CriticalClauseTree build_cct(const CnfFormula& f, VarId x, int h);
// Marks canonical nodes; `twocc` is the TwoCC set (see twocc_set).
void mark_canonical(CriticalClauseTree& t, const CnfFormula& f, const std::vector<VarId>& twocc);
LabeledTree to_labeled(const CriticalClauseTree& t);
LabeledTree complete_tree(int k, int depth);

bool cut_event(const LabeledTree& t, const Placement& pi, double r, bool weak);

struct CutOptions {
    bool root_relative = false;
    bool weak = false;
    std::size_t trials = 10000;
    std::uint64_t seed = 1;
    int threads = 1;
};
Estimate cut_probability_mc(const LabeledTree& t, const PlacementSampler& sampler, double r, const CutOptions& opt);

// Pointwise label density at r in [0, 1/2).
double label_density(Label z, const LabeledTree& t, double r);
// Integrated over [0, 1/2].
double label_density_integrated(Label z, const LabeledTree& t);
// Integral over [0,1/2] of (1-2r)^2/(1-r)^3 r^{d+1}; cached per depth.
double depth_weight_integral(int d);

struct SimilarityReport {
    bool precondition_ok = true;
    bool matched = false;
    std::vector<Label> sequence;  // label sequence u..v
    std::vector<int> matched_path;  // node ids in T_a
    std::string note;
};
SimilarityReport similarity_check(const CnfFormula& f, const CriticalClauseTree& tx, int u, int v,
                                  const std::vector<VarId>& twocc);

std::string to_dot(const LabeledTree& t);
std::string to_json_dump(const LabeledTree& t);

}  // namespace ppszlab
