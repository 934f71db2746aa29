#ifndef MMS_CLUSTERING_HPP
#define MMS_CLUSTERING_HPP

#include <span>
#include <utility>
#include <vector>

#include "mms/corpus.hpp"
#include "mms/rng.hpp"

namespace mms {

using Row = std::span<const double>;

enum class ClusterScope { text_only, image_only, joint };

struct UnitRef {
    Modality modality;
    int id;

    bool operator==(const UnitRef&) const = default;
};

struct Clustering {
    ClusterScope scope = ClusterScope::joint;
    std::vector<UnitRef> centers;    // medoid units, center-eligible modality only
    std::vector<UnitRef> pool;       // membership pool (may span both modalities)
    std::vector<int> assignment;     // pool index -> cluster index
    std::vector<double> trace;       // total within-cluster similarity per iteration
    double total_similarity = 0.0;
};

/// kmeans++ seeding over cosine geometry: first seed uniform, each later seed
/// drawn with probability proportional to squared cosine distance to its
/// nearest chosen seed. Returns k distinct indices into points.
std::vector<int> kmeanspp_seed(const std::vector<Row>& points, int k, Rng& rng);

struct KMedoidResult {
    std::vector<int> center_ids;  // indices into the eligible prefix
    std::vector<int> assignment;  // pool index -> cluster index
    std::vector<double> trace;
    double total_similarity = 0.0;
};

/// Similarity-maximizing K-medoid. pool[0..n_points) are the center-eligible
/// points; the remaining pool rows participate in membership only. Alternates
/// nearest-center assignment with best-medoid updates until the assignment
/// reaches a fixpoint or the iteration cap.
KMedoidResult kmedoid(const std::vector<Row>& pool, int n_points, int k, Rng& rng);

/// Two per-modality K-medoid runs sharing the joint space: text centers come
/// from text units but image units join the text membership pool, and
/// symmetrically for images.
std::pair<Clustering, Clustering> double_kmedoid(const Topic& topic, int k_txt,
                                                 int k_img, Rng& rng);

struct MultimodalSelection {
    std::vector<int> sentence_ids; // nearest sentence per cluster, where present
    std::vector<int> image_ids;    // nearest image per cluster, where present
    Clustering clustering;
};

/// Single K-medoid over the pooled unit set; per cluster the nearest sentence
/// and nearest image to the center are selected. A cluster with no member of
/// a modality contributes nothing for that modality.
MultimodalSelection multimodal_kmedoid(const Topic& topic, int k, Rng& rng);

} // namespace mms

#endif
