#include "bbw/bench.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <json.hpp>

namespace bbw {

using nlohmann::json;

const std::vector<CostSchedule>& candidate_schedules() {
    static const std::vector<CostSchedule> rows = {
        {20, 1, 1, 1},  {1, 20, 1, 1},  {1, 1, 20, 1},  {1, 1, 1, 20},  {20, 1, 20, 1},
        {1, 20, 1, 20}, {20, 20, 1, 1}, {1, 1, 20, 20}, {20, 1, 1, 20}, {1, 20, 20, 1},
    };
    return rows;
}

// ---------------------------------------------------------------------------
// generation

std::vector<Task> generate_tasks(int n_blocks, int count, std::uint64_t seed,
                                 const CostSchedule& schedule, const StateGraph& graph,
                                 bool full_state_goals) {
    if (n_blocks < 2) throw std::invalid_argument("need at least 2 blocks");
    if (graph.n_blocks != n_blocks) throw std::invalid_argument("graph block count mismatch");

    std::vector<int> hand_empty;
    for (std::size_t i = 0; i < graph.size(); ++i)
        if (graph.states[i].hand_empty()) hand_empty.push_back(static_cast<int>(i));

    std::mt19937_64 rng(seed);
    std::vector<Task> tasks;
    tasks.reserve(static_cast<std::size_t>(count));
    while (static_cast<int>(tasks.size()) < count) {
        const WorldState& initial =
            graph.states[hand_empty[rng() % hand_empty.size()]];
        const WorldState& target =
            graph.states[hand_empty[rng() % hand_empty.size()]];
        std::vector<std::pair<int, int>> atoms;
        for (int b = 0; b < n_blocks; ++b) atoms.emplace_back(b, *target.support_of(b));
        if (!full_state_goals) {
            // consistent random subset of the target's on-relations
            std::shuffle(atoms.begin(), atoms.end(), rng);
            const std::size_t arity = 1 + rng() % atoms.size();
            atoms.resize(arity);
        }
        Goal goal = Goal::of(std::move(atoms));
        if (satisfies_goal(initial, goal)) continue;  // degenerate, resample

        Task t;
        t.n_blocks = n_blocks;
        t.initial = initial;
        t.goal = std::move(goal);
        t.schedule = schedule;
        t.gt = optimal_plan(initial, t.goal, schedule, graph);
        GroundTruth uniform = optimal_plan(initial, t.goal, CostSchedule::uniform(), graph);
        t.uniform_plan = std::move(uniform.optimal_plan);
        t.L = uniform.uniform_optimal_length;
        t.gt.uniform_optimal_length = t.L;
        t.id = "n" + std::to_string(n_blocks) + "-s" + std::to_string(seed) + "-" +
               std::to_string(tasks.size());
        tasks.push_back(std::move(t));
    }
    return tasks;
}

// ---------------------------------------------------------------------------
// JSON encoding

namespace {

json action_to_json(const Action& a) {
    static const char* kinds[] = {"pu", "un", "pd", "st"};
    json j = json::array();
    j.push_back(kinds[static_cast<int>(a.kind)]);
    j.push_back(static_cast<int>(a.block));
    if (a.kind == ActionKind::Unstack || a.kind == ActionKind::Stack)
        j.push_back(static_cast<int>(a.other));
    return j;
}

Action action_from_json(const json& j) {
    const std::string k = j.at(0).get<std::string>();
    const int b = j.at(1).get<int>();
    if (k == "pu") return Action::pick_up(b);
    if (k == "pd") return Action::put_down(b);
    if (k == "un") return Action::unstack(b, j.at(2).get<int>());
    if (k == "st") return Action::stack(b, j.at(2).get<int>());
    throw std::invalid_argument("unknown action kind: " + k);
}

json plan_to_json(std::span<const Action> plan) {
    json j = json::array();
    for (const Action& a : plan) j.push_back(action_to_json(a));
    return j;
}

std::vector<Action> plan_from_json(const json& j) {
    std::vector<Action> out;
    for (const auto& a : j) out.push_back(action_from_json(a));
    return out;
}

json state_to_json(const WorldState& s) {
    json sup = json::array();
    for (int b = 0; b < s.num_blocks(); ++b) {
        auto v = s.support_of(b);
        sup.push_back(v ? json(*v) : json(nullptr));
    }
    json j;
    j["support"] = sup;
    j["held"] = s.held() ? json(*s.held()) : json(nullptr);
    return j;
}

WorldState state_from_json(const json& j) {
    std::vector<int> support;
    for (const auto& v : j.at("support")) support.push_back(v.is_null() ? kTable : v.get<int>());
    std::optional<int> held;
    if (!j.at("held").is_null()) held = j.at("held").get<int>();
    return WorldState::make(std::move(support), held);
}

json schedule_to_json(const CostSchedule& s) {
    return json::array({s.pick_up, s.unstack, s.put_down, s.stack});
}

CostSchedule schedule_from_json(const json& j) {
    return {j.at(0).get<Cost>(), j.at(1).get<Cost>(), j.at(2).get<Cost>(),
            j.at(3).get<Cost>()};
}

json task_to_json(const Task& t) {
    json j;
    j["id"] = t.id;
    j["n_blocks"] = t.n_blocks;
    j["initial"] = state_to_json(t.initial);
    json goal = json::array();
    for (auto [x, y] : t.goal.atoms()) goal.push_back(json::array({x, y}));
    j["goal"] = goal;
    j["schedule"] = schedule_to_json(t.schedule);
    j["c_opt"] = t.gt.c_opt;
    j["plan"] = plan_to_json(t.gt.optimal_plan);
    j["L"] = t.L;
    j["uniform_plan"] = plan_to_json(t.uniform_plan);
    return j;
}

Task task_from_json(const json& j) {
    Task t;
    t.id = j.at("id").get<std::string>();
    t.n_blocks = j.at("n_blocks").get<int>();
    t.initial = state_from_json(j.at("initial"));
    std::vector<std::pair<int, int>> atoms;
    for (const auto& a : j.at("goal"))
        atoms.emplace_back(a.at(0).get<int>(), a.at(1).get<int>());
    t.goal = Goal::of(std::move(atoms));
    t.schedule = schedule_from_json(j.at("schedule"));
    t.gt.c_opt = j.at("c_opt").get<Cost>();
    t.gt.optimal_plan = plan_from_json(j.at("plan"));
    t.L = j.at("L").get<int>();
    t.gt.uniform_optimal_length = t.L;
    t.uniform_plan = plan_from_json(j.at("uniform_plan"));
    return t;
}

}  // namespace

void save_tasks(const std::filesystem::path& path, std::span<const Task> tasks) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    for (const Task& t : tasks) out << task_to_json(t).dump() << '\n';
}

std::vector<Task> load_tasks(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<Task> tasks;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        tasks.push_back(task_from_json(json::parse(line)));
    }
    return tasks;
}

// ---------------------------------------------------------------------------
// solution shift

ShiftRow shift_rate(std::span<const Task> tasks, const CostSchedule& schedule,
                    const StateGraph& graph, bool strict, int threads) {
    std::vector<char> shifted(tasks.size(), 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, threads))
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(tasks.size()); ++i) {
        const Task& t = tasks[static_cast<std::size_t>(i)];
        const GroundTruth gt = optimal_plan(t.initial, t.goal, schedule, graph);
        shifted[static_cast<std::size_t>(i)] =
            plans_shifted(gt.optimal_plan, t.uniform_plan, strict) ? 1 : 0;
    }
    ShiftRow row;
    row.schedule = schedule;
    std::map<int, int> hits;
    int total_hits = 0;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        row.tasks_by_length[tasks[i].L] += 1;
        if (shifted[i]) {
            hits[tasks[i].L] += 1;
            ++total_hits;
        }
    }
    for (auto& [L, n] : row.tasks_by_length)
        row.rate_by_length[L] = static_cast<double>(hits[L]) / n;
    row.overall = tasks.empty() ? 0.0 : static_cast<double>(total_hits) / tasks.size();
    return row;
}

std::vector<ShiftRow> shift_table(std::span<const Task> tasks,
                                  std::span<const CostSchedule> schedules,
                                  const StateGraph& graph, bool strict, int threads) {
    std::vector<ShiftRow> rows;
    for (const CostSchedule& s : schedules)
        rows.push_back(shift_rate(tasks, s, graph, strict, threads));
    return rows;
}

std::vector<CostSchedule> select_schedules(std::span<const Task> tasks,
                                           std::span<const CostSchedule> candidates, int k,
                                           const StateGraph& graph, int threads) {
    std::vector<ShiftRow> rows = shift_table(tasks, candidates, graph, false, threads);
    std::vector<int> order(rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&rows](int a, int b) { return rows[a].overall > rows[b].overall; });
    std::vector<CostSchedule> out;
    for (int i = 0; i < std::min<int>(k, static_cast<int>(order.size())); ++i)
        out.push_back(rows[order[i]].schedule);
    return out;
}

std::string render_shift_table(std::span<const ShiftRow> rows) {
    std::set<int> lengths;
    for (const ShiftRow& r : rows)
        for (const auto& [L, _] : r.rate_by_length) lengths.insert(L);
    std::ostringstream out;
    out << "schedule        ";
    for (int L : lengths) out << "  L=" << L << "   ";
    out << "overall\n";
    for (const ShiftRow& r : rows) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%-15s ", schedule_name(r.schedule).c_str());
        out << buf;
        for (int L : lengths) {
            auto it = r.rate_by_length.find(L);
            if (it == r.rate_by_length.end())
                out << "   --   ";
            else {
                std::snprintf(buf, sizeof buf, " %5.1f%% ", 100.0 * it->second);
                out << buf;
            }
        }
        std::snprintf(buf, sizeof buf, " %5.1f%%\n", 100.0 * r.overall);
        out << buf;
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// experiments

namespace {

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t task_seed(const ExperimentConfig& cfg, const Task& task) {
    std::uint64_t h = cfg.master_seed;
    for (char c : task.id) h = mix(h ^ static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
    return h;
}

}  // namespace

std::unique_ptr<Scorer> make_scorer(const ExperimentConfig& cfg, const Task& task,
                                    const StateGraph& graph) {
    ScorerParams p = cfg.scorer_params;
    p.seed = task_seed(cfg, task);
    switch (cfg.scorer) {
        case ScorerKind::Heuristic:
            p.noise = 0.0;
            return std::make_unique<HeuristicScorer>(graph, task.initial, task.goal,
                                                     task.schedule, p);
        case ScorerKind::Noisy:
            if (p.noise <= 0.0) p.noise = 1.0;
            return std::make_unique<HeuristicScorer>(graph, task.initial, task.goal,
                                                     task.schedule, p);
        case ScorerKind::Random:
            return std::make_unique<RandomScorer>(p.seed);
        case ScorerKind::Oracle:
            return std::make_unique<OracleScorer>(graph, task.initial, task.goal,
                                                  task.schedule);
        case ScorerKind::Remote: {
            std::string endpoint = cfg.remote_endpoint;
            if (endpoint.empty())
                if (const char* env = std::getenv("BBW_SCORER_ENDPOINT")) endpoint = env;
            if (endpoint.empty())
                throw std::runtime_error(
                    "remote scorer needs --endpoint or BBW_SCORER_ENDPOINT");
            return make_remote_scorer(endpoint);
        }
    }
    throw std::logic_error("unknown scorer kind");
}

namespace {

RunOutcome run_one(const ExperimentConfig& cfg, const Task& task, const StateGraph& graph) {
    PlannerInput input;
    input.initial = task.initial;
    input.goal = task.goal;
    input.schedule = task.schedule;
    input.budget = resolve_budget(cfg.regime, task.gt.c_opt, task.schedule);
    input.all_states = std::shared_ptr<const std::vector<WorldState>>(
        std::shared_ptr<const StateGraph>{}, &graph.states);
    SearchConfig sc = cfg.search;
    sc.seed = task_seed(cfg, task);
    std::unique_ptr<Scorer> scorer = make_scorer(cfg, task, graph);
    return run_planner(cfg.planner, input, *scorer, sc);
}

}  // namespace

std::vector<RunOutcome> run_suite_serial(const ExperimentConfig& cfg,
                                         std::span<const Task> tasks,
                                         const StateGraph& graph) {
    std::vector<RunOutcome> out(tasks.size());
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        try {
            out[i] = run_one(cfg, tasks[i], graph);
        } catch (const std::exception& e) {
            std::cerr << "task " << tasks[i].id << " failed: " << e.what() << '\n';
            out[i] = RunOutcome{};
        }
    }
    return out;
}

std::vector<RunOutcome> run_suite_parallel(const ExperimentConfig& cfg,
                                           std::span<const Task> tasks,
                                           const StateGraph& graph, int threads) {
    std::vector<RunOutcome> out(tasks.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, threads))
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(tasks.size()); ++i) {
        try {
            out[static_cast<std::size_t>(i)] =
                run_one(cfg, tasks[static_cast<std::size_t>(i)], graph);
        } catch (const std::exception& e) {
#ifdef _OPENMP
#pragma omp critical
#endif
            std::cerr << "task " << tasks[static_cast<std::size_t>(i)].id
                      << " failed: " << e.what() << '\n';
        }
    }
    return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::span<const Task> tasks,
                                const StateGraph& graph, int threads) {
    ExperimentResult res;
    res.outcomes = threads > 1 ? run_suite_parallel(cfg, tasks, graph, threads)
                               : run_suite_serial(cfg, tasks, graph);
    std::vector<TaskRef> refs;
    for (const Task& t : tasks) refs.push_back(t.ref());
    res.report = aggregate_report(res.outcomes, refs, cfg.search.expansion_limit);
    return res;
}

// ---------------------------------------------------------------------------
// run persistence

namespace {

const char* status_name(Status s) {
    switch (s) {
        case Status::Solved: return "solved";
        case Status::BudgetViolation: return "budget_violation";
        case Status::SearchExhaustion: return "search_exhaustion";
    }
    return "?";
}

Status parse_status(const std::string& s) {
    if (s == "solved") return Status::Solved;
    if (s == "budget_violation") return Status::BudgetViolation;
    if (s == "search_exhaustion") return Status::SearchExhaustion;
    throw std::invalid_argument("unknown status: " + s);
}

const char* event_name(TraceRecord::Event e) {
    switch (e) {
        case TraceRecord::Event::Expanded: return "expand";
        case TraceRecord::Event::Pruned: return "prune";
        case TraceRecord::Event::GoalFound: return "goal";
    }
    return "?";
}

TraceRecord::Event parse_event(const std::string& s) {
    if (s == "expand") return TraceRecord::Event::Expanded;
    if (s == "prune") return TraceRecord::Event::Pruned;
    if (s == "goal") return TraceRecord::Event::GoalFound;
    throw std::invalid_argument("unknown trace event: " + s);
}

json trace_to_json(const TraceRecord& r) {
    json j;
    j["i"] = r.index;
    j["dir"] = r.direction == Direction::Forward ? "f" : "b";
    j["key"] = r.state_key;
    j["action"] = r.action ? action_to_json(*r.action) : json(nullptr);
    j["g"] = r.g;
    j["reward"] = r.reward;
    j["N"] = r.visits;
    j["Q"] = r.q;
    j["event"] = event_name(r.event);
    return j;
}

TraceRecord trace_from_json(const json& j) {
    TraceRecord r;
    r.index = j.at("i").get<int>();
    r.direction = j.at("dir").get<std::string>() == "f" ? Direction::Forward
                                                        : Direction::Backward;
    r.state_key = j.at("key").get<std::uint64_t>();
    if (!j.at("action").is_null()) r.action = action_from_json(j.at("action"));
    r.g = j.at("g").get<Cost>();
    r.reward = j.at("reward").get<double>();
    r.visits = j.at("N").get<int>();
    r.q = j.at("Q").get<double>();
    r.event = parse_event(j.at("event").get<std::string>());
    return r;
}

}  // namespace

void save_outcomes(const std::filesystem::path& path, std::span<const Task> tasks,
                   std::span<const RunOutcome> outcomes, const ExperimentConfig& cfg) {
    if (tasks.size() != outcomes.size())
        throw std::invalid_argument("task/outcome count mismatch");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const RunOutcome& o = outcomes[i];
        json j;
        j["task_id"] = tasks[i].id;
        j["L"] = tasks[i].L;
        j["c_opt"] = tasks[i].gt.c_opt;
        j["status"] = status_name(o.status);
        j["plan"] = o.plan ? plan_to_json(*o.plan) : json(nullptr);
        j["plan_cost"] = o.plan_cost ? json(*o.plan_cost) : json(nullptr);
        j["expansions"] = o.expansions_used;
        j["limit"] = cfg.search.expansion_limit;
        json trace = json::array();
        for (const TraceRecord& r : o.trace) trace.push_back(trace_to_json(r));
        j["trace"] = trace;
        out << j.dump() << '\n';
    }
}

std::vector<LoadedRun> load_outcomes(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<LoadedRun> runs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        LoadedRun r;
        r.task_id = j.at("task_id").get<std::string>();
        r.outcome.status = parse_status(j.at("status").get<std::string>());
        if (!j.at("plan").is_null()) r.outcome.plan = plan_from_json(j.at("plan"));
        if (!j.at("plan_cost").is_null()) r.outcome.plan_cost = j.at("plan_cost").get<Cost>();
        r.outcome.expansions_used = j.at("expansions").get<int>();
        for (const auto& t : j.at("trace")) r.outcome.trace.push_back(trace_from_json(t));
        runs.push_back(std::move(r));
    }
    return runs;
}

void save_manifest(const std::filesystem::path& path, const ExperimentConfig& cfg,
                   const std::string& suite_path, std::size_t task_count) {
    json j;
    j["format_version"] = 1;
    j["planner"] = planner_name(cfg.planner);
    j["scorer"] = scorer_name(cfg.scorer);
    j["regime"] = regime_name(cfg.regime);
    j["expansion_limit"] = cfg.search.expansion_limit;
    j["max_depth"] = cfg.search.max_depth;
    j["branching"] = cfg.search.branching;
    j["hard_pruning"] = cfg.search.hard_pruning;
    j["uct_beta"] = cfg.search.uct_beta;
    j["rollout_depth"] = cfg.search.rollout_depth;
    j["expand_all"] = cfg.search.expand_all;
    j["backward_root_cap"] = cfg.search.backward_root_cap;
    j["tau"] = cfg.scorer_params.tau;
    j["kappa"] = cfg.scorer_params.kappa;
    j["noise"] = cfg.scorer_params.noise;
    j["master_seed"] = cfg.master_seed;
    j["suite"] = suite_path;
    j["tasks"] = task_count;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// names

std::string planner_name(PlannerKind k) {
    switch (k) {
        case PlannerKind::TotBfs: return "bfs";
        case PlannerKind::TotDfs: return "dfs";
        case PlannerKind::Mcts: return "mcts";
        case PlannerKind::BiSearch: return "bi";
    }
    return "?";
}

std::string scorer_name(ScorerKind k) {
    switch (k) {
        case ScorerKind::Heuristic: return "heuristic";
        case ScorerKind::Noisy: return "noisy";
        case ScorerKind::Random: return "random";
        case ScorerKind::Oracle: return "oracle";
        case ScorerKind::Remote: return "remote";
    }
    return "?";
}

std::string regime_name(BudgetRegime r) {
    switch (r) {
        case BudgetRegime::Tight: return "tight";
        case BudgetRegime::Loose: return "loose";
        case BudgetRegime::Unlimited: return "unlimited";
    }
    return "?";
}

PlannerKind parse_planner(const std::string& s) {
    if (s == "bfs") return PlannerKind::TotBfs;
    if (s == "dfs") return PlannerKind::TotDfs;
    if (s == "mcts") return PlannerKind::Mcts;
    if (s == "bi") return PlannerKind::BiSearch;
    throw std::invalid_argument("unknown planner: " + s);
}

ScorerKind parse_scorer(const std::string& s) {
    if (s == "heuristic") return ScorerKind::Heuristic;
    if (s == "noisy") return ScorerKind::Noisy;
    if (s == "random") return ScorerKind::Random;
    if (s == "oracle") return ScorerKind::Oracle;
    if (s == "remote") return ScorerKind::Remote;
    throw std::invalid_argument("unknown scorer: " + s);
}

BudgetRegime parse_regime(const std::string& s) {
    if (s == "tight") return BudgetRegime::Tight;
    if (s == "loose") return BudgetRegime::Loose;
    if (s == "unlimited") return BudgetRegime::Unlimited;
    throw std::invalid_argument("unknown regime: " + s);
}

CostSchedule parse_schedule(const std::string& s) {
    std::istringstream in(s);
    std::array<Cost, 4> v{};
    char sep = 0;
    for (int i = 0; i < 4; ++i) {
        if (!(in >> v[static_cast<std::size_t>(i)]))
            throw std::invalid_argument("bad schedule: " + s);
        if (i < 3 && !(in >> sep)) throw std::invalid_argument("bad schedule: " + s);
    }
    CostSchedule out{v[0], v[1], v[2], v[3]};
    if (!out.valid()) throw std::invalid_argument("schedule costs must be >= 1");
    return out;
}

std::string schedule_name(const CostSchedule& s) {
    return std::to_string(s.pick_up) + "," + std::to_string(s.unstack) + "," +
           std::to_string(s.put_down) + "," + std::to_string(s.stack);
}

}  // namespace bbw
