#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "bbw/cost.hpp"
#include "bbw/search.hpp"

namespace bbw {

class OracleViolation : public std::runtime_error {
public:
    OracleViolation(Cost c_opt, Cost c_gen);
};

// Cost_opt / Cost_gen in (0, 1]. Throws OracleViolation when c_gen < c_opt
// (that signals an oracle or replay bug, never a planner property).
double optimality(Cost c_opt, Cost c_gen);

// 1 - expansions_used / expansion_limit in [0, 1].
double efficiency(int expansions_used, int expansion_limit);

// Partitions every non-Solved run: BudgetViolation iff the trace holds at
// least one goal-reaching node whose plan cost exceeds the budget, otherwise
// SearchExhaustion. Precondition: outcome.status != Solved.
Status classify_failure(const RunOutcome& outcome);

struct MetricBucket {
    int tasks = 0;
    int solved = 0;
    double success_rate = 0.0;
    std::optional<double> mean_optimality;  // over Solved runs, absent when none
    std::optional<double> mean_efficiency;
    int budget_violations = 0;
    int search_exhaustions = 0;
};

struct MetricReport {
    std::map<int, MetricBucket> by_length;  // keyed by difficulty class L
    MetricBucket aggregate;
};

// Minimal per-task facts the metrics need; bench::Task supplies them.
struct TaskRef {
    std::string id;
    int L = 0;
    Cost c_opt = 0;
};

MetricReport aggregate_report(std::span<const RunOutcome> outcomes,
                              std::span<const TaskRef> tasks, int expansion_limit);

std::string render_table(const MetricReport& report);
std::string render_csv(const MetricReport& report);

// One failed run plus the oracle context needed to audit its trace.
struct AuditInput {
    const RunOutcome* outcome = nullptr;
    const std::unordered_map<std::uint64_t, Cost>* h = nullptr;  // key -> h(s)
    Cost bound = 0;  // C under Tight, B under Loose
};

struct AuditSample {
    int input_index = 0;
    int trace_index = 0;
    Cost g = 0;
    Cost h = 0;
    bool infeasible_prefix = false;  // g + h > bound, yet the planner expanded it
};

struct AuditResult {
    int sampled = 0;
    int infeasible_expanded = 0;
    double failure_rate = 0.0;  // infeasible_expanded / sampled
    std::vector<AuditSample> samples;
};

class MissingHMap : public std::runtime_error {
public:
    MissingHMap();
};

// Samples up to max_samples expanded, non-pruned trace nodes uniformly
// (seeded, without replacement) across the failed runs; the failure rate is
// the fraction whose g + h exceeds the bound.
AuditResult audit_infeasibility(std::span<const AuditInput> inputs, int max_samples,
                                std::uint64_t seed);

}  // namespace bbw
