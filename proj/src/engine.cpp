#include "mms/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <string>
#include <utility>

#include "mms/error.hpp"
#include "mms/vecmath.hpp"

namespace mms {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Runs fn(i) for i in [0, count), either on the plain serial path or under
// OpenMP. Results must be written to preallocated per-index slots; the first
// exception is rethrown after the loop so worker count never changes outcomes.
template <typename Fn>
void for_each_member(int count, int threads, Fn&& fn) {
    if (threads <= 1) {
        for (int i = 0; i < count; i++) fn(i);
        return;
    }
#ifdef _OPENMP
    std::exception_ptr first_error = nullptr;
#pragma omp parallel for num_threads(threads) schedule(static)
    for (int i = 0; i < count; i++) {
        try {
            fn(i);
        } catch (...) {
#pragma omp critical
            if (first_error == nullptr) first_error = std::current_exception();
        }
    }
    if (first_error != nullptr) std::rethrow_exception(first_error);
#else
    for (int i = 0; i < count; i++) fn(i);
#endif
}

GenerationStats stats_of(int generation, const std::vector<ObjectiveVector>& objectives,
                         int front0_size) {
    GenerationStats s;
    s.generation = generation;
    s.front0_size = front0_size;
    s.objective_max.assign(objectives[0].values.size(), 0.0);
    for (size_t m = 0; m < s.objective_max.size(); m++) {
        double best = objectives[0].values[m];
        for (const auto& v : objectives) best = std::max(best, v.values[m]);
        s.objective_max[m] = best;
    }
    return s;
}

[[noreturn]] void rethrow_with_context(const std::string& where) {
    try {
        throw;
    } catch (const Error& e) {
        throw Error(e.kind(), where + ": " + e.what());
    } catch (const std::exception& e) {
        throw runtime_failure(where + ": " + e.what());
    }
}

nlohmann::ordered_json params_json(const EvolutionParams& p) {
    nlohmann::ordered_json j;
    j["objective_set"] = objective_set_name(p.objective_set);
    j["population_size"] = p.population_size;
    j["mating_pool_size"] = p.mating_pool_size;
    j["scale_factor"] = p.scale_factor;
    j["crossover_rate"] = p.crossover_rate;
    j["eta_m"] = p.eta_m;
    if (p.gene_mutation_prob) {
        j["gene_mutation_prob"] = *p.gene_mutation_prob;
    } else {
        j["gene_mutation_prob"] = nullptr; // resolved to 1/dim at run time
    }
    j["insertion_prob"] = p.insertion_prob;
    j["deletion_prob"] = p.deletion_prob;
    j["max_text_clusters"] = p.max_text_clusters;
    j["max_image_clusters"] = p.max_image_clusters;
    j["max_generations"] = p.max_generations;
    j["seed"] = p.seed;
    return j;
}

} // namespace

RunRecord run(const Topic& topic, const EvolutionParams& params, int threads) {
    const auto start = std::chrono::steady_clock::now();
    params.validate();
    topic.validate();
    if (threads < 1) threads = 1;

    RunRecord record;
    record.params = params;
    const int pop_size = params.population_size;
    const ObjectiveSet set = params.objective_set;
    const Bounds bounds = compute_bounds(topic);
    const ObjectiveContext ctx(topic);

    std::vector<Solution> population;
    std::vector<ObjectiveVector> objectives(pop_size);
    try {
        population = init_population(topic, params, params.seed, threads);
        for_each_member(pop_size, threads,
                        [&](int i) { objectives[i] = evaluate(population[i], ctx, set); });
    } catch (...) {
        rethrow_with_context("initialization");
    }

    std::vector<int> rank(pop_size, 0);
    std::vector<double> crowding(pop_size, 0.0);
    {
        const SelectionResult initial = environmental_selection(objectives, pop_size);
        rank = initial.rank;
        crowding = initial.crowding;
        int front0 = 0;
        for (int r : rank) front0 += r == 0 ? 1 : 0;
        record.trace.push_back(stats_of(0, objectives, front0));
    }

    for (int g = 1; g <= params.max_generations; g++) {
        try {
            std::vector<Solution> offspring(pop_size);
            std::vector<ObjectiveVector> offspring_obj(pop_size);
            for_each_member(pop_size, threads, [&](int i) {
                Rng rng = make_rng(mix_seed(params.seed, seed_tag::offspring,
                                            static_cast<std::uint64_t>(g),
                                            static_cast<std::uint64_t>(i)));
                offspring[i] = make_offspring(population, i, params, topic, bounds, rng);
                offspring_obj[i] = evaluate(offspring[i], ctx, set);
            });

            std::vector<ObjectiveVector> pool_obj = objectives;
            pool_obj.insert(pool_obj.end(), offspring_obj.begin(), offspring_obj.end());
            const SelectionResult sel = environmental_selection(pool_obj, pop_size);

            std::vector<Solution> next_pop;
            std::vector<ObjectiveVector> next_obj;
            next_pop.reserve(pop_size);
            next_obj.reserve(pop_size);
            int front0 = 0;
            for (int p = 0; p < pop_size; p++) {
                const int idx = sel.selected[p];
                if (idx < pop_size) {
                    next_pop.push_back(population[idx]);
                    next_obj.push_back(objectives[idx]);
                } else {
                    next_pop.push_back(std::move(offspring[idx - pop_size]));
                    next_obj.push_back(std::move(offspring_obj[idx - pop_size]));
                }
                rank[p] = sel.rank[idx];
                crowding[p] = sel.crowding[idx];
                front0 += sel.rank[idx] == 0 ? 1 : 0;
            }
            population = std::move(next_pop);
            objectives = std::move(next_obj);
            record.trace.push_back(stats_of(g, objectives, front0));
        } catch (...) {
            rethrow_with_context("generation " + std::to_string(g));
        }
    }

    record.final_population.members = std::move(population);
    record.final_population.objectives = std::move(objectives);
    record.final_population.rank = std::move(rank);
    record.final_population.crowding = std::move(crowding);
    record.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return record;
}

std::vector<FrontMember> pareto_front(const RunRecord& record) {
    std::vector<FrontMember> front;
    const RankedPopulation& pop = record.final_population;
    for (int i = 0; i < pop.size(); i++) {
        if (pop.rank[i] == 0) front.push_back({pop.members[i], pop.objectives[i], i});
    }
    return front;
}

std::string telemetry_csv(const RunRecord& record) {
    const int n_obj = objective_count(record.params.objective_set);
    std::string csv = "generation";
    for (int m = 0; m < n_obj; m++) csv += ",objective" + std::to_string(m) + "_max";
    csv += ",front0_size\n";
    for (const auto& s : record.trace) {
        csv += std::to_string(s.generation);
        for (double v : s.objective_max) csv += "," + fmt_double(v);
        csv += "," + std::to_string(s.front0_size) + "\n";
    }
    return csv;
}

nlohmann::ordered_json population_json(const RunRecord& record) {
    nlohmann::ordered_json j;
    j["params"] = params_json(record.params);
    j["population"] = nlohmann::ordered_json::array();
    const RankedPopulation& pop = record.final_population;
    for (int i = 0; i < pop.size(); i++) {
        nlohmann::ordered_json member;
        member["index"] = i;
        member["rank"] = pop.rank[i];
        member["crowding"] = pop.crowding[i];
        member["objectives"] = pop.objectives[i].values;
        member["solution"] = pop.members[i].to_json();
        j["population"].push_back(std::move(member));
    }
    return j;
}

} // namespace mms
