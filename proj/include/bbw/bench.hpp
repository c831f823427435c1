#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "bbw/cost.hpp"
#include "bbw/domain.hpp"
#include "bbw/eval.hpp"
#include "bbw/oracle.hpp"
#include "bbw/search.hpp"

namespace bbw {

enum class ScorerKind { Heuristic, Noisy, Random, Oracle, Remote };

// Budget-BlocksWorld instance with both ground truths embedded, so planners
// never consult the oracle at search time.
struct Task {
    std::string id;
    int n_blocks = 0;
    WorldState initial;
    Goal goal;
    CostSchedule schedule;
    GroundTruth gt;                    // under `schedule`
    std::vector<Action> uniform_plan;  // ground truth under the all-ones schedule
    int L = 0;                         // uniform optimal plan length

    TaskRef ref() const { return {id, L, gt.c_opt}; }
};

// The ten nonuniform schedules studied alongside the uniform baseline.
const std::vector<CostSchedule>& candidate_schedules();

std::vector<Task> generate_tasks(int n_blocks, int count, std::uint64_t seed,
                                 const CostSchedule& schedule, const StateGraph& graph,
                                 bool full_state_goals = false);

// Line-delimited JSON records; lossless round-trip.
void save_tasks(const std::filesystem::path& path, std::span<const Task> tasks);
std::vector<Task> load_tasks(const std::filesystem::path& path);

// --- solution shift -------------------------------------------------------

// rate[L] = fraction of L-bucket tasks whose cost-optimal plan (recomputed
// under `schedule`) is shifted against their uniform ground truth.
struct ShiftRow {
    CostSchedule schedule;
    std::map<int, double> rate_by_length;
    std::map<int, int> tasks_by_length;
    double overall = 0.0;
};

ShiftRow shift_rate(std::span<const Task> tasks, const CostSchedule& schedule,
                    const StateGraph& graph, bool strict = false, int threads = 1);

std::vector<ShiftRow> shift_table(std::span<const Task> tasks,
                                  std::span<const CostSchedule> schedules,
                                  const StateGraph& graph, bool strict = false,
                                  int threads = 1);

// Candidates ranked by overall shift rate, descending; ties keep the
// candidate order. Returns the top k schedules.
std::vector<CostSchedule> select_schedules(std::span<const Task> tasks,
                                           std::span<const CostSchedule> candidates, int k,
                                           const StateGraph& graph, int threads = 1);

std::string render_shift_table(std::span<const ShiftRow> rows);

// --- experiments ----------------------------------------------------------

struct ExperimentConfig {
    PlannerKind planner = PlannerKind::TotBfs;
    ScorerKind scorer = ScorerKind::Heuristic;
    ScorerParams scorer_params;
    std::string remote_endpoint;  // required for ScorerKind::Remote
    BudgetRegime regime = BudgetRegime::Unlimited;
    SearchConfig search;
    std::uint64_t master_seed = 0;
};

std::unique_ptr<Scorer> make_scorer(const ExperimentConfig& cfg, const Task& task,
                                    const StateGraph& graph);

// Runs every task; per-task scorer seeds derive from the master seed and the
// task index, so results are independent of execution order.
// Serial reference implementation.
std::vector<RunOutcome> run_suite_serial(const ExperimentConfig& cfg,
                                         std::span<const Task> tasks,
                                         const StateGraph& graph);

// OpenMP fan-out over tasks; byte-identical outcomes to run_suite_serial.
std::vector<RunOutcome> run_suite_parallel(const ExperimentConfig& cfg,
                                           std::span<const Task> tasks,
                                           const StateGraph& graph, int threads);

struct ExperimentResult {
    std::vector<RunOutcome> outcomes;
    MetricReport report;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::span<const Task> tasks,
                                const StateGraph& graph, int threads = 1);

// --- persistence ----------------------------------------------------------

// One JSON line per run: status, plan, cost, expansions, full trace.
void save_outcomes(const std::filesystem::path& path, std::span<const Task> tasks,
                   std::span<const RunOutcome> outcomes, const ExperimentConfig& cfg);

struct LoadedRun {
    std::string task_id;
    RunOutcome outcome;
};
std::vector<LoadedRun> load_outcomes(const std::filesystem::path& path);

// Reproducibility manifest: config, seeds, and suite reference.
void save_manifest(const std::filesystem::path& path, const ExperimentConfig& cfg,
                   const std::string& suite_path, std::size_t task_count);

std::string planner_name(PlannerKind k);
std::string scorer_name(ScorerKind k);
std::string regime_name(BudgetRegime r);
PlannerKind parse_planner(const std::string& s);
ScorerKind parse_scorer(const std::string& s);
BudgetRegime parse_regime(const std::string& s);
CostSchedule parse_schedule(const std::string& s);  // "20,1,1,1"
std::string schedule_name(const CostSchedule& s);

}  // namespace bbw
