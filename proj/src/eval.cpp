#include "bbw/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <random>

namespace bbw {

OracleViolation::OracleViolation(Cost c_opt, Cost c_gen)
    : std::runtime_error("generated plan cost " + std::to_string(c_gen) +
                         " below optimal " + std::to_string(c_opt)) {}

MissingHMap::MissingHMap() : std::runtime_error("audit input without an h-map") {}

double optimality(Cost c_opt, Cost c_gen) {
    if (c_gen < c_opt) throw OracleViolation(c_opt, c_gen);
    if (c_opt <= 0) throw std::invalid_argument("optimality undefined for c_opt <= 0");
    return static_cast<double>(c_opt) / static_cast<double>(c_gen);
}

double efficiency(int expansions_used, int expansion_limit) {
    if (expansion_limit <= 0 || expansions_used < 0 || expansions_used > expansion_limit)
        throw std::invalid_argument("expansion count outside [0, limit]");
    return 1.0 - static_cast<double>(expansions_used) / static_cast<double>(expansion_limit);
}

Status classify_failure(const RunOutcome& outcome) {
    if (outcome.status == Status::Solved)
        throw std::invalid_argument("classify_failure on a Solved run");
    for (const TraceRecord& r : outcome.trace)
        if (r.event == TraceRecord::Event::GoalFound) return Status::BudgetViolation;
    return Status::SearchExhaustion;
}

namespace {

void finalize(MetricBucket& b, double opt_sum, double eff_sum) {
    b.success_rate = b.tasks ? static_cast<double>(b.solved) / b.tasks : 0.0;
    if (b.solved > 0) {
        b.mean_optimality = opt_sum / b.solved;
        b.mean_efficiency = eff_sum / b.solved;
    }
}

}  // namespace

MetricReport aggregate_report(std::span<const RunOutcome> outcomes,
                              std::span<const TaskRef> tasks, int expansion_limit) {
    if (outcomes.size() != tasks.size())
        throw std::invalid_argument("outcome/task count mismatch");
    MetricReport rep;
    std::map<int, std::pair<double, double>> sums;  // L -> (opt, eff)
    std::pair<double, double> agg_sums{0.0, 0.0};
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const RunOutcome& o = outcomes[i];
        MetricBucket& b = rep.by_length[tasks[i].L];
        auto& [opt_sum, eff_sum] = sums[tasks[i].L];
        ++b.tasks;
        ++rep.aggregate.tasks;
        if (o.status == Status::Solved) {
            ++b.solved;
            ++rep.aggregate.solved;
            // empty-plan tasks are excluded from optimality averaging by
            // construction: the generator rejects initial-satisfies-goal tasks
            const double opt = optimality(tasks[i].c_opt, *o.plan_cost);
            const double eff = efficiency(o.expansions_used, expansion_limit);
            opt_sum += opt;
            eff_sum += eff;
            agg_sums.first += opt;
            agg_sums.second += eff;
        } else if (o.status == Status::BudgetViolation) {
            ++b.budget_violations;
            ++rep.aggregate.budget_violations;
        } else {
            ++b.search_exhaustions;
            ++rep.aggregate.search_exhaustions;
        }
    }
    for (auto& [L, b] : rep.by_length) finalize(b, sums[L].first, sums[L].second);
    finalize(rep.aggregate, agg_sums.first, agg_sums.second);
    return rep;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string fmt_or_dash(const std::optional<double>& v) {
    return v ? fmt(*v) : "--";
}

void emit_row(std::string& out, const std::string& label, const MetricBucket& b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-6s %6d %8d %8s %8s %8s %6d %6d\n", label.c_str(),
                  b.tasks, b.solved, fmt(b.success_rate).c_str(),
                  fmt_or_dash(b.mean_optimality).c_str(),
                  fmt_or_dash(b.mean_efficiency).c_str(), b.budget_violations,
                  b.search_exhaustions);
    out += buf;
}

}  // namespace

std::string render_table(const MetricReport& rep) {
    std::string out;
    out += "L       tasks   solved       SR      Opt      Eff     BV     SE\n";
    for (const auto& [L, b] : rep.by_length) emit_row(out, std::to_string(L), b);
    emit_row(out, "all", rep.aggregate);
    return out;
}

std::string render_csv(const MetricReport& rep) {
    std::string out =
        "L,tasks,solved,success_rate,optimality,efficiency,budget_violations,"
        "search_exhaustions\n";
    auto row = [&out](const std::string& label, const MetricBucket& b) {
        out += label + ',' + std::to_string(b.tasks) + ',' + std::to_string(b.solved) + ',' +
               fmt(b.success_rate) + ',' + fmt_or_dash(b.mean_optimality) + ',' +
               fmt_or_dash(b.mean_efficiency) + ',' + std::to_string(b.budget_violations) +
               ',' + std::to_string(b.search_exhaustions) + '\n';
    };
    for (const auto& [L, b] : rep.by_length) row(std::to_string(L), b);
    row("all", rep.aggregate);
    return out;
}

AuditResult audit_infeasibility(std::span<const AuditInput> inputs, int max_samples,
                                std::uint64_t seed) {
    std::vector<std::pair<int, int>> population;  // (input, trace index)
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (!inputs[i].h) throw MissingHMap();
        const auto& trace = inputs[i].outcome->trace;
        for (std::size_t t = 0; t < trace.size(); ++t)
            if (trace[t].event == TraceRecord::Event::Expanded)
                population.emplace_back(static_cast<int>(i), static_cast<int>(t));
    }
    // partial Fisher-Yates: sample without replacement, stable across platforms
    std::mt19937_64 rng(seed);
    const int n = static_cast<int>(population.size());
    const int k = std::min(max_samples, n);
    for (int i = 0; i < k; ++i) {
        const auto j = i + static_cast<int>(rng() % static_cast<std::uint64_t>(n - i));
        std::swap(population[i], population[j]);
    }

    AuditResult res;
    res.sampled = k;
    for (int i = 0; i < k; ++i) {
        const auto [in, ti] = population[i];
        const TraceRecord& rec = inputs[in].outcome->trace[ti];
        auto it = inputs[in].h->find(rec.state_key);
        if (it == inputs[in].h->end()) throw MissingHMap();
        AuditSample s;
        s.input_index = in;
        s.trace_index = ti;
        s.g = rec.g;
        s.h = it->second;
        s.infeasible_prefix = s.g + s.h > inputs[in].bound;
        if (s.infeasible_prefix) ++res.infeasible_expanded;
        res.samples.push_back(s);
    }
    res.failure_rate = res.sampled ? static_cast<double>(res.infeasible_expanded) / res.sampled
                                   : 0.0;
    return res;
}

}  // namespace bbw
