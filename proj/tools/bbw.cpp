// Command-line front end: task generation, solution-shift tables, planner
// runs, metric reports, and infeasible-prefix audits.

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>

#include "bbw/bench.hpp"
#include "bbw/render.hpp"

using namespace bbw;

namespace {

std::map<int, StateGraph> graph_cache;

const StateGraph& graph_for(int n_blocks) {
    auto it = graph_cache.find(n_blocks);
    if (it == graph_cache.end())
        it = graph_cache.emplace(n_blocks, enumerate_states(n_blocks)).first;
    return it->second;
}

int common_block_count(const std::vector<Task>& tasks) {
    if (tasks.empty()) throw std::runtime_error("empty task suite");
    for (const Task& t : tasks)
        if (t.n_blocks != tasks.front().n_blocks)
            throw std::runtime_error("mixed block counts in one suite");
    return tasks.front().n_blocks;
}

// Pairs runs back up with their tasks; order-insensitive.
std::vector<std::pair<const Task*, const RunOutcome*>> join_runs(
    const std::vector<Task>& tasks, const std::vector<LoadedRun>& runs) {
    std::unordered_map<std::string, const Task*> by_id;
    for (const Task& t : tasks) by_id[t.id] = &t;
    std::vector<std::pair<const Task*, const RunOutcome*>> joined;
    for (const LoadedRun& r : runs) {
        auto it = by_id.find(r.task_id);
        if (it == by_id.end())
            throw std::runtime_error("run references unknown task " + r.task_id);
        joined.emplace_back(it->second, &r.outcome);
    }
    return joined;
}

int default_threads() {
#ifdef _OPENMP
    if (const char* env = std::getenv("OMP_NUM_THREADS")) return std::atoi(env);
    return 2;
#else
    return 1;
#endif
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Budget-BlocksWorld planning workbench"};
    app.require_subcommand(1);

    // --- gen ---------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate a task suite");
    int gen_blocks = 5, gen_count = 100;
    std::uint64_t gen_seed = 0;
    std::string gen_schedule = "1,1,1,1", gen_out = "suite.jsonl";
    bool gen_full = false;
    gen->add_option("--blocks", gen_blocks, "block count")->check(CLI::Range(2, kMaxBlocks));
    gen->add_option("--count", gen_count, "number of tasks");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--schedule", gen_schedule, "cost schedule pu,un,pd,st");
    gen->add_option("--out", gen_out, "output JSONL path");
    gen->add_flag("--full-goals", gen_full, "goals fix every block's support");

    // --- shift -------------------------------------------------------------
    auto* shift = app.add_subcommand("shift", "solution-shift table over schedules");
    std::string shift_suite;
    std::vector<std::string> shift_schedules;
    bool shift_strict = false;
    int shift_top = 0, shift_threads = default_threads();
    shift->add_option("--suite", shift_suite, "task suite JSONL")->required();
    shift->add_option("--schedule", shift_schedules,
                      "candidate schedule, repeatable (default: built-in ten)");
    shift->add_flag("--strict", shift_strict, "compare full action identity");
    shift->add_option("--top", shift_top, "also print the top-K schedules");
    shift->add_option("--threads", shift_threads, "worker threads");

    // --- run ---------------------------------------------------------------
    auto* run = app.add_subcommand("run", "run one planner over a suite");
    std::string run_suite, run_planner = "bfs", run_scorer = "heuristic";
    std::string run_regime = "unlimited", run_out = "runs.jsonl", run_manifest;
    std::string run_endpoint;
    ExperimentConfig cfg;
    int run_threads = default_threads();
    run->add_option("--suite", run_suite, "task suite JSONL")->required();
    run->add_option("--planner", run_planner, "bfs|dfs|mcts|bi");
    run->add_option("--scorer", run_scorer, "heuristic|noisy|random|oracle|remote");
    run->add_option("--regime", run_regime, "tight|loose|unlimited");
    run->add_option("--limit", cfg.search.expansion_limit, "expansion limit");
    run->add_option("--depth", cfg.search.max_depth, "max trajectory length");
    run->add_option("--branch", cfg.search.branching, "proposals per expansion");
    run->add_flag("--prune", cfg.search.hard_pruning, "drop over-budget children");
    run->add_option("--beta", cfg.search.uct_beta, "UCT exploration weight");
    run->add_option("--rollout-depth", cfg.search.rollout_depth, "MCTS rollout cap");
    run->add_flag("--expand-all", cfg.search.expand_all,
                  "Bi-Search: expand every applicable action");
    run->add_flag("--reward-backprop", cfg.search.backprop_reward_only,
                  "MCTS: backpropagate squashed rewards, not rollout returns");
    run->add_option("--root-cap", cfg.search.backward_root_cap, "backward root cap");
    run->add_option("--tau", cfg.scorer_params.tau, "scorer softmax temperature");
    run->add_option("--kappa", cfg.scorer_params.kappa, "feasibility slope");
    run->add_option("--noise", cfg.scorer_params.noise, "scorer noise stddev");
    run->add_option("--seed", cfg.master_seed, "master seed");
    run->add_option("--endpoint", run_endpoint,
                    "remote scorer URL (or BBW_SCORER_ENDPOINT)");
    run->add_option("--threads", run_threads, "worker threads");
    run->add_option("--out", run_out, "output runs JSONL");
    run->add_option("--manifest", run_manifest, "manifest path (default <out>.manifest.json)");

    // --- report ------------------------------------------------------------
    auto* report = app.add_subcommand("report", "metrics from a saved run file");
    std::string rep_suite, rep_runs, rep_format = "table";
    int rep_limit = 500;
    report->add_option("--suite", rep_suite, "task suite JSONL")->required();
    report->add_option("--runs", rep_runs, "runs JSONL")->required();
    report->add_option("--format", rep_format, "table|csv");
    report->add_option("--limit", rep_limit, "expansion limit used for the runs");

    // --- audit -------------------------------------------------------------
    auto* audit = app.add_subcommand("audit", "infeasible-prefix audit of failed runs");
    std::string aud_suite, aud_runs, aud_regime = "tight", aud_bound = "";
    int aud_samples = 1000;
    std::uint64_t aud_seed = 0;
    audit->add_option("--suite", aud_suite, "task suite JSONL")->required();
    audit->add_option("--runs", aud_runs, "runs JSONL")->required();
    audit->add_option("--regime", aud_regime, "tight|loose (sets budgets and bound)");
    audit->add_option("--bound", aud_bound, "override: C (c_opt) or B (budget)");
    audit->add_option("--samples", aud_samples, "sample size");
    audit->add_option("--seed", aud_seed, "sampling seed");

    // --- hmap --------------------------------------------------------------
    auto* hmap = app.add_subcommand("hmap", "dump one task's remaining-cost map");
    std::string hm_suite, hm_task;
    int hm_limit = 0;
    hmap->add_option("--suite", hm_suite, "task suite JSONL")->required();
    hmap->add_option("--task", hm_task, "task id (default: first task)");
    hmap->add_option("--limit", hm_limit, "print at most N states (0 = all)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            const CostSchedule sched = parse_schedule(gen_schedule);
            const StateGraph& graph = graph_for(gen_blocks);
            auto tasks = generate_tasks(gen_blocks, gen_count, gen_seed, sched, graph, gen_full);
            save_tasks(gen_out, tasks);
            std::map<int, int> by_L;
            for (const Task& t : tasks) ++by_L[t.L];
            std::cout << tasks.size() << " tasks -> " << gen_out << " (";
            bool first = true;
            for (auto [L, n] : by_L) {
                std::cout << (first ? "" : ", ") << "L=" << L << ": " << n;
                first = false;
            }
            std::cout << ")\n";
        } else if (*shift) {
            auto tasks = load_tasks(shift_suite);
            const StateGraph& graph = graph_for(common_block_count(tasks));
            std::vector<CostSchedule> cands;
            if (shift_schedules.empty())
                cands = candidate_schedules();
            else
                for (const auto& s : shift_schedules) cands.push_back(parse_schedule(s));
            auto rows = shift_table(tasks, cands, graph, shift_strict, shift_threads);
            std::cout << render_shift_table(rows);
            if (shift_top > 0) {
                auto picked = select_schedules(tasks, cands, shift_top, graph, shift_threads);
                std::cout << "selected:";
                for (const auto& s : picked) std::cout << ' ' << schedule_name(s);
                std::cout << '\n';
            }
        } else if (*run) {
            cfg.planner = parse_planner(run_planner);
            cfg.scorer = parse_scorer(run_scorer);
            cfg.regime = parse_regime(run_regime);
            cfg.remote_endpoint = run_endpoint;
            auto tasks = load_tasks(run_suite);
            const StateGraph& graph = graph_for(common_block_count(tasks));
            ExperimentResult res = run_experiment(cfg, tasks, graph, run_threads);
            save_outcomes(run_out, tasks, res.outcomes, cfg);
            if (run_manifest.empty()) run_manifest = run_out + ".manifest.json";
            save_manifest(run_manifest, cfg, run_suite, tasks.size());
            std::cout << render_table(res.report);
        } else if (*report) {
            auto tasks = load_tasks(rep_suite);
            auto runs = load_outcomes(rep_runs);
            auto joined = join_runs(tasks, runs);
            std::vector<RunOutcome> outcomes;
            std::vector<TaskRef> refs;
            for (auto [t, o] : joined) {
                outcomes.push_back(*o);
                refs.push_back(t->ref());
            }
            MetricReport rep = aggregate_report(outcomes, refs, rep_limit);
            std::cout << (rep_format == "csv" ? render_csv(rep) : render_table(rep));
        } else if (*audit) {
            auto tasks = load_tasks(aud_suite);
            auto runs = load_outcomes(aud_runs);
            const StateGraph& graph = graph_for(common_block_count(tasks));
            const BudgetRegime regime = parse_regime(aud_regime);
            if (regime == BudgetRegime::Unlimited)
                throw std::runtime_error("audit needs a finite budget regime");
            const bool use_c = aud_bound.empty() ? regime == BudgetRegime::Tight
                                                 : aud_bound == "C";
            auto joined = join_runs(tasks, runs);
            std::vector<std::unordered_map<std::uint64_t, Cost>> hmaps;
            std::vector<AuditInput> inputs;
            hmaps.reserve(joined.size());
            for (auto [t, o] : joined) {
                if (o->status == Status::Solved) continue;
                hmaps.push_back(
                    by_key(graph, remaining_cost_map(t->goal, t->schedule, graph)));
                const Cost bound = use_c
                                       ? t->gt.c_opt
                                       : resolve_budget(regime, t->gt.c_opt, t->schedule).limit;
                inputs.push_back({o, &hmaps.back(), bound});
            }
            AuditResult res = audit_infeasibility(inputs, aud_samples, aud_seed);
            std::cout << "failed runs: " << inputs.size() << "\nsampled expansions: "
                      << res.sampled << "\ninfeasible prefixes: " << res.infeasible_expanded
                      << "\nfailure rate: " << res.failure_rate << '\n';
        } else if (*hmap) {
            auto tasks = load_tasks(hm_suite);
            const Task* task = &tasks.front();
            if (!hm_task.empty()) {
                auto it = std::find_if(tasks.begin(), tasks.end(),
                                       [&](const Task& t) { return t.id == hm_task; });
                if (it == tasks.end()) throw std::runtime_error("no task " + hm_task);
                task = &*it;
            }
            const StateGraph& graph = graph_for(task->n_blocks);
            auto h = remaining_cost_map(task->goal, task->schedule, graph);
            std::vector<int> order(graph.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                return h[a] != h[b] ? h[a] < h[b]
                                    : graph.states[a].key() < graph.states[b].key();
            });
            std::cout << "task " << task->id << ", goal: " << render_goal(task->goal) << '\n';
            int printed = 0;
            for (int s : order) {
                std::cout << h[s] << "\t" << graph.states[s].key() << "\t"
                          << render_state(graph.states[s]) << '\n';
                if (hm_limit > 0 && ++printed >= hm_limit) break;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
