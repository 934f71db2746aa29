#ifndef MMS_OBJECTIVES_HPP
#define MMS_OBJECTIVES_HPP

#include <string>
#include <vector>

#include "mms/corpus.hpp"
#include "mms/genome.hpp"

namespace mms {

enum class ObjectiveSet { summarization, clustering, unimodal };

int objective_count(ObjectiveSet set);
const char* objective_set_name(ObjectiveSet set);
ObjectiveSet parse_objective_set(const std::string& name);

/// All objectives are maximized.
struct ObjectiveVector {
    ObjectiveSet set_id = ObjectiveSet::summarization;
    std::vector<double> values;

    bool operator==(const ObjectiveVector&) const = default;
};

// Added to redundancy denominators so ratio objectives stay finite when the
// centers are mutually orthogonal.
inline constexpr double kRedundancyEpsilon = 1e-9;

// Returned by the cluster validity index when total compactness is exactly
// zero; large but finite so downstream sorting never sees inf/NaN.
inline constexpr double kValidityDegenerateSentinel = 1e12;

/// Sum over active centers of the similarities to their assigned own-modality
/// units.
double salience(const Solution& solution, const Topic& topic, Modality mod);

/// Sum over ordered pairs of distinct active same-modality centers of their
/// similarity; each unordered pair counts twice.
double redundancy(const Solution& solution, Modality mod);

/// Sum over all (active text center, active image center) pairs of their
/// similarity.
double cross_corr(const Solution& solution);

/// Maximum cosine distance over pairs of active same-modality centers (the
/// separation term of the validity index).
double max_center_separation(const Solution& solution, Modality mod);

/// PBM-style cluster validity index under cosine distance:
/// ((1/K) * (E1/EK) * DK)^2. A zero EK yields the degenerate sentinel and
/// sets *degenerate when provided.
double pbm(const Solution& solution, const Topic& topic, Modality mod,
           bool* degenerate = nullptr);

/// Per-topic precomputation shared by every evaluation: the modality
/// centroids and their total cosine distance to the units (the E1 terms),
/// which do not depend on the solution.
struct ObjectiveContext {
    explicit ObjectiveContext(const Topic& topic);

    const Topic& topic() const { return *topic_; }
    double e1(Modality mod) const { return mod == Modality::text ? e1_text_ : e1_image_; }

private:
    const Topic* topic_;
    double e1_text_ = 0.0;
    double e1_image_ = 0.0;
};

ObjectiveVector evaluate(const Solution& solution, const ObjectiveContext& ctx,
                         ObjectiveSet set);
ObjectiveVector evaluate(const Solution& solution, const Topic& topic, ObjectiveSet set);

} // namespace mms

#endif
