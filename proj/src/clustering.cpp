#include "mms/clustering.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "mms/error.hpp"
#include "mms/vecmath.hpp"

namespace mms {

namespace {

constexpr int kMaxIterations = 100;

// Pool member -> most similar center, ties to the lowest cluster index.
std::vector<int> assign_to_centers(const std::vector<Row>& pool,
                                   const std::vector<int>& center_ids) {
    std::vector<int> assignment(pool.size(), 0);
    for (size_t m = 0; m < pool.size(); m++) {
        double best = -2.0;
        int best_c = 0;
        for (size_t c = 0; c < center_ids.size(); c++) {
            const double s = cosine_sim(pool[m], pool[center_ids[c]]);
            if (s > best) {
                best = s;
                best_c = static_cast<int>(c);
            }
        }
        assignment[m] = best_c;
    }
    return assignment;
}

double pool_similarity(const std::vector<Row>& pool, const std::vector<int>& center_ids,
                       const std::vector<int>& assignment) {
    double total = 0.0;
    for (size_t m = 0; m < pool.size(); m++) {
        total += cosine_sim(pool[m], pool[center_ids[assignment[m]]]);
    }
    return total;
}

std::vector<Row> rows_of(const Topic& topic, Modality mod) {
    std::vector<Row> rows;
    rows.reserve(topic.n_units(mod));
    for (int i = 0; i < topic.n_units(mod); i++) rows.push_back(topic.embedding(mod, i));
    return rows;
}

} // namespace

std::vector<int> kmeanspp_seed(const std::vector<Row>& points, int k, Rng& rng) {
    const int n = static_cast<int>(points.size());
    if (k < 2 || k > n) {
        throw std::invalid_argument("kmeanspp_seed: k=" + std::to_string(k) + " with " +
                                    std::to_string(n) + " points");
    }
    std::vector<int> seeds;
    std::vector<bool> chosen(n, false);
    std::vector<double> nearest_d2(n, 0.0);

    int first = uniform_int(rng, 0, n - 1);
    seeds.push_back(first);
    chosen[first] = true;
    for (int i = 0; i < n; i++) {
        const double d = cosine_distance(points[i], points[first]);
        nearest_d2[i] = d * d;
    }

    while (static_cast<int>(seeds.size()) < k) {
        double total = 0.0;
        for (int i = 0; i < n; i++) {
            if (!chosen[i]) total += nearest_d2[i];
        }
        int pick = -1;
        if (total > 0.0) {
            const double u = uniform01(rng) * total;
            double acc = 0.0;
            for (int i = 0; i < n; i++) {
                if (chosen[i]) continue;
                acc += nearest_d2[i];
                if (acc > u) {
                    pick = i;
                    break;
                }
            }
            if (pick < 0) { // u landed on the accumulated total
                for (int i = n - 1; i >= 0; i--) {
                    if (!chosen[i]) {
                        pick = i;
                        break;
                    }
                }
            }
        } else {
            // Every remaining point coincides with a seed; fall back to a
            // uniform draw over the unchosen ones.
            int remaining = n - static_cast<int>(seeds.size());
            int r = uniform_int(rng, 0, remaining - 1);
            for (int i = 0; i < n; i++) {
                if (chosen[i]) continue;
                if (r-- == 0) {
                    pick = i;
                    break;
                }
            }
        }
        seeds.push_back(pick);
        chosen[pick] = true;
        for (int i = 0; i < n; i++) {
            if (chosen[i]) continue;
            const double d = cosine_distance(points[i], points[pick]);
            nearest_d2[i] = std::min(nearest_d2[i], d * d);
        }
    }
    return seeds;
}

KMedoidResult kmedoid(const std::vector<Row>& pool, int n_points, int k, Rng& rng) {
    if (n_points < 1 || n_points > static_cast<int>(pool.size())) {
        throw std::invalid_argument("kmedoid: eligible prefix " + std::to_string(n_points) +
                                    " out of range for pool of " + std::to_string(pool.size()));
    }
    if (k < 2 || k > n_points) {
        throw std::invalid_argument("kmedoid: k=" + std::to_string(k) + " with " +
                                    std::to_string(n_points) + " eligible points");
    }

    std::vector<Row> eligible(pool.begin(), pool.begin() + n_points);
    KMedoidResult result;
    result.center_ids = kmeanspp_seed(eligible, k, rng);

    std::vector<int> prev_assignment;
    for (int iter = 0; iter < kMaxIterations; iter++) {
        std::vector<int> assignment = assign_to_centers(pool, result.center_ids);
        if (assignment == prev_assignment) break;
        prev_assignment = assignment;

        // A cluster that captured no center-eligible member cannot elect a
        // medoid; hand it the worst-served eligible non-center point.
        std::vector<bool> has_eligible(k, false);
        for (int m = 0; m < n_points; m++) has_eligible[assignment[m]] = true;
        std::vector<bool> is_center(n_points, false);
        for (int c : result.center_ids) is_center[c] = true;
        for (int c = 0; c < k; c++) {
            if (has_eligible[c]) continue;
            int worst = -1;
            double worst_sim = 2.0;
            for (int m = 0; m < n_points; m++) {
                if (is_center[m]) continue;
                const double s = cosine_sim(pool[m], pool[result.center_ids[assignment[m]]]);
                if (s < worst_sim) {
                    worst_sim = s;
                    worst = m;
                }
            }
            if (worst < 0) continue; // every eligible point is a center already
            result.center_ids[c] = worst;
            assignment[worst] = c;
            is_center[worst] = true;
        }

        // Medoid update: per cluster the eligible member most similar to the
        // whole member set, ties to the lowest index.
        for (int c = 0; c < k; c++) {
            int best = -1;
            double best_sum = 0.0;
            for (int cand = 0; cand < n_points; cand++) {
                if (assignment[cand] != c) continue;
                double sum = 0.0;
                for (size_t m = 0; m < pool.size(); m++) {
                    if (assignment[m] == c) sum += cosine_sim(pool[cand], pool[m]);
                }
                if (best < 0 || sum > best_sum) {
                    best = cand;
                    best_sum = sum;
                }
            }
            if (best >= 0) result.center_ids[c] = best;
        }

        result.assignment = assignment;
        result.trace.push_back(pool_similarity(pool, result.center_ids, assignment));
    }

    if (result.assignment.empty()) {
        result.assignment = assign_to_centers(pool, result.center_ids);
    }
    result.total_similarity = pool_similarity(pool, result.center_ids, result.assignment);
    return result;
}

std::pair<Clustering, Clustering> double_kmedoid(const Topic& topic, int k_txt, int k_img,
                                                 Rng& rng) {
    const auto text_rows = rows_of(topic, Modality::text);
    const auto image_rows = rows_of(topic, Modality::image);

    auto run = [&](Modality own, int k) {
        const auto& own_rows = own == Modality::text ? text_rows : image_rows;
        const auto& other_rows = own == Modality::text ? image_rows : text_rows;
        std::vector<Row> pool = own_rows;
        pool.insert(pool.end(), other_rows.begin(), other_rows.end());
        KMedoidResult r = kmedoid(pool, static_cast<int>(own_rows.size()), k, rng);

        Clustering c;
        c.scope = own == Modality::text ? ClusterScope::text_only : ClusterScope::image_only;
        for (int id : r.center_ids) c.centers.push_back({own, id});
        const Modality other = own == Modality::text ? Modality::image : Modality::text;
        for (size_t i = 0; i < own_rows.size(); i++) {
            c.pool.push_back({own, static_cast<int>(i)});
        }
        for (size_t i = 0; i < other_rows.size(); i++) {
            c.pool.push_back({other, static_cast<int>(i)});
        }
        c.assignment = std::move(r.assignment);
        c.trace = std::move(r.trace);
        c.total_similarity = r.total_similarity;
        return c;
    };

    Clustering text_clustering = run(Modality::text, k_txt);
    Clustering image_clustering = run(Modality::image, k_img);
    return {std::move(text_clustering), std::move(image_clustering)};
}

MultimodalSelection multimodal_kmedoid(const Topic& topic, int k, Rng& rng) {
    // Top-k per modality is only well-defined when both modalities can fill k.
    if (k < 2 || k > std::min(topic.n_text(), topic.n_image())) {
        throw std::invalid_argument("multimodal_kmedoid: k=" + std::to_string(k) +
                                    " outside [2, min(text, image)] = [2, " +
                                    std::to_string(std::min(topic.n_text(), topic.n_image())) +
                                    "]");
    }
    const auto text_rows = rows_of(topic, Modality::text);
    const auto image_rows = rows_of(topic, Modality::image);
    std::vector<Row> pool = text_rows;
    pool.insert(pool.end(), image_rows.begin(), image_rows.end());
    const int n = static_cast<int>(pool.size());

    KMedoidResult r = kmedoid(pool, n, k, rng);

    MultimodalSelection sel;
    sel.clustering.scope = ClusterScope::joint;
    const int n_text = topic.n_text();
    auto ref_of = [&](int pool_index) {
        return pool_index < n_text ? UnitRef{Modality::text, pool_index}
                                   : UnitRef{Modality::image, pool_index - n_text};
    };
    for (int id : r.center_ids) sel.clustering.centers.push_back(ref_of(id));
    for (int i = 0; i < n; i++) sel.clustering.pool.push_back(ref_of(i));
    sel.clustering.assignment = r.assignment;
    sel.clustering.trace = std::move(r.trace);
    sel.clustering.total_similarity = r.total_similarity;

    // Per cluster the most central member of each modality, ties to the
    // lowest pool index; clusters missing a modality contribute nothing.
    for (int c = 0; c < k; c++) {
        int best_text = -1, best_image = -1;
        double best_text_sim = -2.0, best_image_sim = -2.0;
        for (int m = 0; m < n; m++) {
            if (r.assignment[m] != c) continue;
            const double s = cosine_sim(pool[m], pool[r.center_ids[c]]);
            if (m < n_text) {
                if (s > best_text_sim) {
                    best_text_sim = s;
                    best_text = m;
                }
            } else if (s > best_image_sim) {
                best_image_sim = s;
                best_image = m - n_text;
            }
        }
        if (best_text >= 0) sel.sentence_ids.push_back(best_text);
        if (best_image >= 0) sel.image_ids.push_back(best_image);
    }
    return sel;
}

} // namespace mms
