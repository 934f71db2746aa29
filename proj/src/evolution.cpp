#include "mms/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>

#include "mms/clustering.hpp"
#include "mms/error.hpp"

namespace mms {

void EvolutionParams::validate() const {
    if (population_size < 4) throw config_error("population_size must be >= 4");
    if (mating_pool_size < 2) throw config_error("mating_pool_size must be >= 2");
    if (mating_pool_size >= population_size) {
        throw config_error("mating_pool_size must be smaller than population_size");
    }
    if (!std::isfinite(scale_factor)) throw config_error("scale_factor must be finite");
    if (crossover_rate < 0.0 || crossover_rate > 1.0) {
        throw config_error("crossover_rate must lie in [0, 1]");
    }
    if (!(eta_m > 0.0)) throw config_error("eta_m must be > 0");
    if (gene_mutation_prob && (*gene_mutation_prob < 0.0 || *gene_mutation_prob > 1.0)) {
        throw config_error("gene_mutation_prob must lie in [0, 1]");
    }
    if (insertion_prob < 0.0 || insertion_prob > 1.0) {
        throw config_error("insertion_prob must lie in [0, 1]");
    }
    if (deletion_prob < 0.0 || deletion_prob > 1.0) {
        throw config_error("deletion_prob must lie in [0, 1]");
    }
    if (max_text_clusters < 2) throw config_error("max_text_clusters must be >= 2");
    if (max_image_clusters < 2) throw config_error("max_image_clusters must be >= 2");
    if (max_generations < 1) throw config_error("max_generations must be >= 1");
}

double EvolutionParams::resolved_gene_mutation_prob(int dim) const {
    if (gene_mutation_prob) return *gene_mutation_prob;
    if (dim < 1) throw std::invalid_argument("resolved_gene_mutation_prob: dim must be >= 1");
    return 1.0 / dim;
}

std::vector<int> mating_pool_indices(int pop_size, int current, int pool_size, Rng& rng) {
    if (current < 0 || current >= pop_size) {
        throw std::invalid_argument("mating_pool_indices: current out of range");
    }
    // Two distinct donors must exist, so the floor is 2.
    if (pool_size < 2 || pool_size > pop_size - 1) {
        throw std::invalid_argument("mating_pool_indices: pool size " +
                                    std::to_string(pool_size) + " with population " +
                                    std::to_string(pop_size));
    }
    std::vector<int> candidates;
    candidates.reserve(pop_size - 1);
    for (int i = 0; i < pop_size; i++) {
        if (i != current) candidates.push_back(i);
    }
    // Partial Fisher-Yates: the first pool_size entries become the draw.
    for (int i = 0; i < pool_size; i++) {
        const int j = uniform_int(rng, i, static_cast<int>(candidates.size()) - 1);
        std::swap(candidates[i], candidates[j]);
    }
    candidates.resize(pool_size);
    return candidates;
}

Solution crossover(const Solution& current, const Solution& x1, const Solution& x2,
                   double scale_factor, double crossover_rate, Rng& rng) {
    Solution offspring = current;
    for (Modality mod : {Modality::text, Modality::image}) {
        for (int slot = 0; slot < current.active(mod); slot++) {
            auto out = offspring.center_mut(mod, slot);
            // A slot inert in either donor contributes zero difference.
            const bool donors_active = slot < x1.active(mod) && slot < x2.active(mod);
            for (int d = 0; d < current.dim(); d++) {
                const double r = uniform01(rng);
                if (r <= crossover_rate && donors_active) {
                    out[d] += scale_factor *
                              (x1.center(mod, slot)[d] - x2.center(mod, slot)[d]);
                }
            }
        }
    }
    return offspring;
}

Solution repair(Solution candidate, const Bounds& bounds) {
    for (Modality mod : {Modality::text, Modality::image}) {
        for (int slot = 0; slot < candidate.active(mod); slot++) {
            auto row = candidate.center_mut(mod, slot);
            for (int d = 0; d < candidate.dim(); d++) {
                row[d] = std::clamp(row[d], bounds.lower[d], bounds.upper[d]);
            }
        }
    }
    return candidate;
}

double polynomial_delta(double r1, double gene, double lower, double upper, double eta_m) {
    const double range = upper - lower;
    if (range <= 0.0) return 0.0;
    const double delta1 = std::clamp((gene - lower) / range, 0.0, 1.0);
    const double delta2 = std::clamp((upper - gene) / range, 0.0, 1.0);
    const double exponent = 1.0 / (eta_m + 1.0);
    if (r1 <= 0.5) {
        const double val = 2.0 * r1 + (1.0 - 2.0 * r1) * std::pow(1.0 - delta1, eta_m + 1.0);
        return std::pow(val, exponent) - 1.0;
    }
    const double val =
        2.0 * (1.0 - r1) + 2.0 * (r1 - 0.5) * std::pow(1.0 - delta2, eta_m + 1.0);
    return 1.0 - std::pow(val, exponent);
}

Solution polynomial_mutation(Solution solution, const Bounds& bounds, double eta_m,
                             double gene_mutation_prob, Rng& rng) {
    for (Modality mod : {Modality::text, Modality::image}) {
        for (int slot = 0; slot < solution.active(mod); slot++) {
            auto row = solution.center_mut(mod, slot);
            for (int d = 0; d < solution.dim(); d++) {
                if (uniform01(rng) >= gene_mutation_prob) continue;
                const double r1 = uniform01(rng);
                const double delta =
                    polynomial_delta(r1, row[d], bounds.lower[d], bounds.upper[d], eta_m);
                row[d] += delta * (bounds.upper[d] - bounds.lower[d]);
                row[d] = std::clamp(row[d], bounds.lower[d], bounds.upper[d]);
            }
        }
    }
    return solution;
}

Solution insertion_mutation(Solution solution, const Topic& topic, Modality mod, Rng& rng) {
    if (solution.active(mod) >= solution.capacity(mod)) return solution;
    const int unit = uniform_int(rng, 0, topic.n_units(mod) - 1);
    solution.append_center(mod, topic.embedding(mod, unit));
    return solution;
}

Solution deletion_mutation(Solution solution, Modality mod, Rng& rng) {
    if (solution.active(mod) <= 2) return solution;
    const int slot = uniform_int(rng, 0, solution.active(mod) - 1);
    solution.remove_center(mod, slot);
    return solution;
}

Solution make_offspring(const std::vector<Solution>& population, int current,
                        const EvolutionParams& params, const Topic& topic,
                        const Bounds& bounds, Rng& rng) {
    const std::vector<int> pool = mating_pool_indices(
        static_cast<int>(population.size()), current, params.mating_pool_size, rng);
    const int a = uniform_int(rng, 0, params.mating_pool_size - 1);
    int b = uniform_int(rng, 0, params.mating_pool_size - 2);
    if (b >= a) b++;
    const Solution& x1 = population[pool[a]];
    const Solution& x2 = population[pool[b]];

    Solution child = crossover(population[current], x1, x2, params.scale_factor,
                               params.crossover_rate, rng);
    child = repair(std::move(child), bounds);
    child = polynomial_mutation(std::move(child), bounds, params.eta_m,
                                params.resolved_gene_mutation_prob(child.dim()), rng);
    for (Modality mod : {Modality::text, Modality::image}) {
        if (uniform01(rng) < params.insertion_prob) {
            child = insertion_mutation(std::move(child), topic, mod, rng);
        }
    }
    for (Modality mod : {Modality::text, Modality::image}) {
        if (uniform01(rng) < params.deletion_prob) {
            child = deletion_mutation(std::move(child), mod, rng);
        }
    }
    return repair(std::move(child), bounds);
}

namespace {

Solution init_member(const Topic& topic, const EvolutionParams& params, std::uint64_t seed,
                     int member) {
    Rng rng = make_rng(mix_seed(seed, seed_tag::init, static_cast<std::uint64_t>(member)));
    const int k_txt = uniform_int(rng, 2, params.max_text_clusters);
    const int k_img = uniform_int(rng, 2, params.max_image_clusters);
    const auto [text_clustering, image_clustering] = double_kmedoid(topic, k_txt, k_img, rng);

    Solution s(topic.dim, params.max_text_clusters, params.max_image_clusters, k_txt, k_img);
    for (int j = 0; j < k_txt; j++) {
        auto emb = topic.text_embedding(text_clustering.centers[j].id);
        std::copy(emb.begin(), emb.end(), s.center_mut(Modality::text, j).begin());
    }
    for (int j = 0; j < k_img; j++) {
        auto emb = topic.image_embedding(image_clustering.centers[j].id);
        std::copy(emb.begin(), emb.end(), s.center_mut(Modality::image, j).begin());
    }
    return s;
}

} // namespace

std::vector<Solution> init_population(const Topic& topic, const EvolutionParams& params,
                                      std::uint64_t seed, int threads) {
    params.validate();
    if (params.max_text_clusters > topic.n_text() ||
        params.max_image_clusters > topic.n_image()) {
        throw config_error("topic '" + topic.name + "' is too small for the requested cluster "
                           "maxima (" + std::to_string(params.max_text_clusters) + " text, " +
                           std::to_string(params.max_image_clusters) + " image)");
    }

    std::vector<Solution> members(params.population_size);
    if (threads <= 1) {
        for (int i = 0; i < params.population_size; i++) {
            members[i] = init_member(topic, params, seed, i);
        }
        return members;
    }

#ifdef _OPENMP
    std::exception_ptr first_error = nullptr;
#pragma omp parallel for num_threads(threads) schedule(static)
    for (int i = 0; i < params.population_size; i++) {
        try {
            members[i] = init_member(topic, params, seed, i);
        } catch (...) {
#pragma omp critical
            if (first_error == nullptr) first_error = std::current_exception();
        }
    }
    if (first_error != nullptr) std::rethrow_exception(first_error);
#else
    for (int i = 0; i < params.population_size; i++) {
        members[i] = init_member(topic, params, seed, i);
    }
#endif
    return members;
}

} // namespace mms
