#ifndef MMS_EVOLUTION_HPP
#define MMS_EVOLUTION_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "mms/genome.hpp"
#include "mms/objectives.hpp"
#include "mms/rng.hpp"

namespace mms {

struct EvolutionParams {
    int population_size = 40;   // |P|
    int mating_pool_size = 5;   // H
    double scale_factor = 0.7;  // F
    double crossover_rate = 0.8;
    double eta_m = 20.0; // polynomial mutation distribution index
    // Per-gene mutation probability; unset means 1/dim, resolved per topic.
    std::optional<double> gene_mutation_prob;
    double insertion_prob = 0.1;
    double deletion_prob = 0.1;
    int max_text_clusters = 8;
    int max_image_clusters = 8;
    int max_generations = 50; // g_max
    std::uint64_t seed = 0;
    ObjectiveSet objective_set = ObjectiveSet::summarization;

    void validate() const; // throws config errors
    double resolved_gene_mutation_prob(int dim) const;
    int max_clusters(Modality mod) const {
        return mod == Modality::text ? max_text_clusters : max_image_clusters;
    }
};

/// H distinct member indices, uniform without replacement, never `current`.
std::vector<int> mating_pool_indices(int pop_size, int current, int pool_size, Rng& rng);

/// Scaled-difference crossover over the active region of `current`: per gene,
/// with probability CR the gene becomes current + F * (x1 - x2), donors
/// aligned by slot; a slot inert in either donor contributes zero difference.
/// Active counts are inherited from `current`.
Solution crossover(const Solution& current, const Solution& x1, const Solution& x2,
                   double scale_factor, double crossover_rate, Rng& rng);

/// Clamps every active gene into [lower, upper].
Solution repair(Solution candidate, const Bounds& bounds);

/// Perturbation factor for one gene of polynomial mutation: r1 is the
/// uniform draw, the gene's position between the bounds shapes the two
/// branches. Zero-width bounds yield 0.
double polynomial_delta(double r1, double gene, double lower, double upper, double eta_m);

/// Per active gene, with probability p_m, perturb by delta * (upper - lower)
/// and re-clamp.
Solution polynomial_mutation(Solution solution, const Bounds& bounds, double eta_m,
                             double gene_mutation_prob, Rng& rng);

/// Appends one active center equal to the embedding of a uniformly drawn unit
/// of the modality; no-op at capacity.
Solution insertion_mutation(Solution solution, const Topic& topic, Modality mod, Rng& rng);

/// Removes a uniformly chosen active center; no-op at the floor of 2.
Solution deletion_mutation(Solution solution, Modality mod, Rng& rng);

/// Full offspring pipeline: mating pool, crossover, repair, polynomial
/// mutation, per-modality insertion/deletion draws, final repair.
Solution make_offspring(const std::vector<Solution>& population, int current,
                        const EvolutionParams& params, const Topic& topic,
                        const Bounds& bounds, Rng& rng);

/// |P| solutions initialized from per-member double K-medoid runs with
/// uniformly drawn cluster counts; member streams are derived from `seed` so
/// results do not depend on worker count.
std::vector<Solution> init_population(const Topic& topic, const EvolutionParams& params,
                                      std::uint64_t seed, int threads = 1);

} // namespace mms

#endif
