#ifndef MMS_ENGINE_HPP
#define MMS_ENGINE_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "mms/corpus.hpp"
#include "mms/evolution.hpp"
#include "mms/pareto.hpp"

namespace mms {

struct GenerationStats {
    int generation = 0; // 0 is the initial population
    std::vector<double> objective_max;
    int front0_size = 0;
};

struct RankedPopulation {
    std::vector<Solution> members;
    std::vector<ObjectiveVector> objectives;
    std::vector<int> rank;
    std::vector<double> crowding;

    int size() const { return static_cast<int>(members.size()); }
};

struct RunRecord {
    EvolutionParams params;
    std::vector<GenerationStats> trace; // max_generations + 1 entries
    RankedPopulation final_population;
    double wall_seconds = 0.0; // excluded from serialized artifacts
};

/// The generational loop: initialize from double K-medoid, then per
/// generation breed one offspring per member, evaluate, and select the best
/// |P| of parents plus offspring. threads > 1 runs the per-member breed and
/// evaluate kernel with OpenMP; results are identical for any thread count.
RunRecord run(const Topic& topic, const EvolutionParams& params, int threads = 1);

struct FrontMember {
    Solution solution;
    ObjectiveVector objectives;
    int member_index = 0; // position in the final population
};

/// Front-0 members of the final population.
std::vector<FrontMember> pareto_front(const RunRecord& record);

/// Telemetry CSV: generation, per-objective population maxima, front-0 size.
std::string telemetry_csv(const RunRecord& record);

/// Final population checkpoint with objectives, ranks, and crowding.
nlohmann::ordered_json population_json(const RunRecord& record);

} // namespace mms

#endif
