// Times the serial suite runner against the OpenMP fan-out and checks that
// both produce identical outcomes.

#include <chrono>
#include <iostream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bbw/bench.hpp"

using namespace bbw;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool same_outcome(const RunOutcome& a, const RunOutcome& b) {
    if (a.status != b.status || a.plan != b.plan || a.plan_cost != b.plan_cost ||
        a.expansions_used != b.expansions_used || a.trace.size() != b.trace.size())
        return false;
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        const TraceRecord &x = a.trace[i], &y = b.trace[i];
        if (x.index != y.index || x.direction != y.direction || x.state_key != y.state_key ||
            x.action != y.action || x.g != y.g || x.reward != y.reward ||
            x.visits != y.visits || x.q != y.q || x.event != y.event)
            return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    int n_blocks = 5, count = 60, threads = 4, repeats = 3;
    if (argc > 1) n_blocks = std::stoi(argv[1]);
    if (argc > 2) count = std::stoi(argv[2]);
    if (argc > 3) threads = std::stoi(argv[3]);
#ifndef _OPENMP
    std::cout << "(built without OpenMP; parallel path runs serially)\n";
#endif

    StateGraph graph = enumerate_states(n_blocks);
    auto tasks = generate_tasks(n_blocks, count, 7, CostSchedule{20, 1, 1, 1}, graph);

    ExperimentConfig cfg;
    cfg.planner = PlannerKind::Mcts;
    cfg.scorer = ScorerKind::Noisy;
    cfg.regime = BudgetRegime::Loose;
    cfg.master_seed = 7;

    std::cout << "suite: " << count << " tasks, " << n_blocks << " blocks, planner mcts\n";
    double best_serial = 1e30, best_parallel = 1e30;
    std::vector<RunOutcome> serial, parallel;
    for (int r = 0; r < repeats; ++r) {
        auto t0 = Clock::now();
        serial = run_suite_serial(cfg, tasks, graph);
        best_serial = std::min(best_serial, seconds_since(t0));

        t0 = Clock::now();
        parallel = run_suite_parallel(cfg, tasks, graph, threads);
        best_parallel = std::min(best_parallel, seconds_since(t0));
    }

    for (std::size_t i = 0; i < serial.size(); ++i)
        if (!same_outcome(serial[i], parallel[i])) {
            std::cerr << "MISMATCH at task " << tasks[i].id << '\n';
            return 1;
        }

    std::printf("serial   : %.3fs\n", best_serial);
    std::printf("parallel : %.3fs (%d threads, speedup %.2fx)\n", best_parallel, threads,
                best_serial / best_parallel);
    std::cout << "outcomes identical\n";
    return 0;
}
