// Times the OpenMP member kernel against the serial reference and checks that
// both produce identical populations.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <utility>

#include "mms/corpus.hpp"
#include "mms/engine.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

double time_run(const mms::Topic& topic, const mms::EvolutionParams& params, int threads,
                mms::RunRecord* out) {
    const auto start = std::chrono::steady_clock::now();
    mms::RunRecord record = mms::run(topic, params, threads);
    const auto stop = std::chrono::steady_clock::now();
    if (out) *out = std::move(record);
    return std::chrono::duration<double>(stop - start).count();
}

bool same_results(const mms::RunRecord& a, const mms::RunRecord& b) {
    if (a.final_population.members.size() != b.final_population.members.size()) return false;
    for (std::size_t i = 0; i < a.final_population.members.size(); ++i) {
        if (!(a.final_population.members[i] == b.final_population.members[i])) return false;
        if (!(a.final_population.objectives[i] == b.final_population.objectives[i])) return false;
    }
    return mms::telemetry_csv(a) == mms::telemetry_csv(b);
}

} // namespace

int main(int argc, char** argv) {
    int threads = 4;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    if (argc > 1) threads = std::atoi(argv[1]);
    if (threads < 2) threads = 2;

    mms::SyntheticSpec spec;
    spec.seed = 7;
    spec.n_clusters = 5;
    spec.per_cluster_text = 30;
    spec.per_cluster_img = 20;
    spec.dim = 256;
    spec.noise = 0.1;
    const mms::Topic topic = mms::generate_synthetic_topic(spec);

    mms::EvolutionParams params;
    params.population_size = 64;
    params.max_generations = 30;
    params.seed = 11;

    std::printf("topic: %d sentences, %d images, dim %d\n", topic.n_text(), topic.n_image(),
                topic.dim);
    std::printf("population %d, %d generations\n", params.population_size, params.max_generations);

    time_run(topic, params, 1, nullptr); // warm-up

    mms::RunRecord serial;
    const double t_serial = time_run(topic, params, 1, &serial);
    std::printf("serial reference : %8.3f s\n", t_serial);

    mms::RunRecord parallel;
    const double t_parallel = time_run(topic, params, threads, &parallel);
    std::printf("%2d threads       : %8.3f s  (speedup %.2fx)\n", threads, t_parallel,
                t_parallel > 0.0 ? t_serial / t_parallel : 0.0);

    if (!same_results(serial, parallel)) {
        std::printf("MISMATCH: parallel run diverged from the serial reference\n");
        return 1;
    }
    std::printf("parallel output matches the serial reference\n");
    return 0;
}
