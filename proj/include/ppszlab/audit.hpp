#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ppszlab::audit {

enum class Relation { Eq, Le, Ge, Info };
enum class Verdict { Pass, Fail, Flag, Info };

const char* to_string(Relation r);
const char* to_string(Verdict v);

struct AuditEntry {
    std::string id;
    std::string description;
    std::optional<double> closed;   // exact expression, evaluated at 50 digits
    std::optional<double> numeric;  // independent quadrature / search / arithmetic
    double self_diff = 0;           // |closed - numeric| when both exist
    double self_tol = 1e-9;
    bool self_ok = true;
    double paper_value = 0;  // stated value or bound
    Relation relation = Relation::Info;
    double tol = 0;  // for Eq only
    Verdict verdict = Verdict::Info;
    bool known_flag = false;
    std::string note;

    // closed when present, else numeric
    double computed() const { return closed ? *closed : numeric.value_or(0.0); }
};

struct AuditReport {
    std::vector<AuditEntry> entries;
    int passes = 0, fails = 0, flags = 0, infos = 0, self_failures = 0;
    int known_flags = 0, unknown_flags = 0;
    std::string to_json(int indent = 2) const;
    std::string to_table() const;
    bool ok() const { return fails == 0 && self_failures == 0; }
};

std::vector<std::string> entry_ids();

// Empty selection runs every entry. Unknown ids throw ppszlab::Error.
AuditReport run_audit(const std::vector<std::string>& selection = {});

// Regular/irregular gain arithmetic with derived denominators.
struct GainChain {
    double eps_irregular = 0.029, eps_regular = 0.1;
    double id1 = 0, id0 = 0, twocc_irr = 0;  // per-variable gain lines
    double raw = 0;                          // 1 / (0.00168728 eps - 0.00638 eps^2)
    double corrected = 0;                    // raw * 12 / 11
    double thr_inverse = 0;                  // 0.9 * corrected / 2
    double n_term_inverse = 0;               // 1 / (0.10302 Thr)
    double irr_star = 0;                     // minimiser of the max in the combined bound
    double combined_inverse = 0;             // 1 / combined gain
    double combined_rounded_inverse = 0;  // with 10398 and 45408
    double s3_base = 0;                      // 2^{1 - s_3}
    double final_base = 0;                   // 2^{1 - s_3 - combined}
};
GainChain gain_chain();

// min over irr in [0,1] of max((1-irr)/c - 1/n_inv, irr/1380), returned as the gain;
// n_inv is the reciprocal of the subtracted per-edge term.
double combined_gain(double c, double n_inv);

}  // namespace ppszlab::audit
