#include "mms/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mms/error.hpp"
#include "mms/vecmath.hpp"

namespace mms {

int objective_count(ObjectiveSet set) {
    switch (set) {
    case ObjectiveSet::summarization: return 3;
    case ObjectiveSet::clustering: return 3;
    case ObjectiveSet::unimodal: return 2;
    }
    throw std::invalid_argument("objective_count: bad set");
}

const char* objective_set_name(ObjectiveSet set) {
    switch (set) {
    case ObjectiveSet::summarization: return "summarization";
    case ObjectiveSet::clustering: return "clustering";
    case ObjectiveSet::unimodal: return "unimodal";
    }
    throw std::invalid_argument("objective_set_name: bad set");
}

ObjectiveSet parse_objective_set(const std::string& name) {
    if (name == "summarization") return ObjectiveSet::summarization;
    if (name == "clustering") return ObjectiveSet::clustering;
    if (name == "unimodal") return ObjectiveSet::unimodal;
    throw config_error("unknown objective set '" + name +
                       "' (expected summarization, clustering, or unimodal)");
}

double salience(const Solution& solution, const Topic& topic, Modality mod) {
    const std::vector<int> assignment = decode_modality(solution, topic, mod);
    double total = 0.0;
    for (int i = 0; i < topic.n_units(mod); i++) {
        total += cosine_sim(solution.center(mod, assignment[i]), topic.embedding(mod, i));
    }
    return total;
}

double redundancy(const Solution& solution, Modality mod) {
    const int k = solution.active(mod);
    double total = 0.0;
    for (int j = 0; j < k; j++) {
        for (int i = 0; i < k; i++) {
            if (i == j) continue;
            total += cosine_sim(solution.center(mod, j), solution.center(mod, i));
        }
    }
    return total;
}

double cross_corr(const Solution& solution) {
    double total = 0.0;
    for (int t = 0; t < solution.active_text(); t++) {
        for (int i = 0; i < solution.active_image(); i++) {
            total += cosine_sim(solution.center(Modality::text, t),
                                solution.center(Modality::image, i));
        }
    }
    return total;
}

double max_center_separation(const Solution& solution, Modality mod) {
    const int k = solution.active(mod);
    double best = 0.0;
    for (int i = 0; i < k; i++) {
        for (int j = i + 1; j < k; j++) {
            best = std::max(best,
                            cosine_distance(solution.center(mod, i), solution.center(mod, j)));
        }
    }
    return best;
}

namespace {

double modality_e1(const Topic& topic, Modality mod) {
    const int n = topic.n_units(mod);
    std::vector<double> centroid(topic.dim, 0.0);
    for (int i = 0; i < n; i++) {
        auto row = topic.embedding(mod, i);
        for (int d = 0; d < topic.dim; d++) centroid[d] += row[d];
    }
    for (double& x : centroid) x /= n;
    double e1 = 0.0;
    for (int i = 0; i < n; i++) e1 += cosine_distance(centroid, topic.embedding(mod, i));
    return e1;
}

double pbm_from_e1(const Solution& solution, const Topic& topic, Modality mod, double e1,
                   bool* degenerate) {
    if (degenerate != nullptr) *degenerate = false;
    const std::vector<int> assignment = decode_modality(solution, topic, mod);
    double ek = 0.0;
    for (int i = 0; i < topic.n_units(mod); i++) {
        ek += cosine_distance(solution.center(mod, assignment[i]), topic.embedding(mod, i));
    }
    if (ek == 0.0) {
        if (degenerate != nullptr) *degenerate = true;
        return kValidityDegenerateSentinel;
    }
    const double k = solution.active(mod);
    const double dk = max_center_separation(solution, mod);
    const double root = (1.0 / k) * (e1 / ek) * dk;
    return root * root;
}

} // namespace

double pbm(const Solution& solution, const Topic& topic, Modality mod, bool* degenerate) {
    return pbm_from_e1(solution, topic, mod, modality_e1(topic, mod), degenerate);
}

ObjectiveContext::ObjectiveContext(const Topic& topic)
    : topic_(&topic), e1_text_(modality_e1(topic, Modality::text)),
      e1_image_(modality_e1(topic, Modality::image)) {}

ObjectiveVector evaluate(const Solution& solution, const ObjectiveContext& ctx,
                         ObjectiveSet set) {
    const Topic& topic = ctx.topic();
    ObjectiveVector v;
    v.set_id = set;
    switch (set) {
    case ObjectiveSet::summarization:
        v.values = {salience(solution, topic, Modality::text) /
                        (redundancy(solution, Modality::text) + kRedundancyEpsilon),
                    salience(solution, topic, Modality::image) /
                        (redundancy(solution, Modality::image) + kRedundancyEpsilon),
                    cross_corr(solution)};
        break;
    case ObjectiveSet::clustering:
        v.values = {pbm_from_e1(solution, topic, Modality::text, ctx.e1(Modality::text), nullptr),
                    pbm_from_e1(solution, topic, Modality::image, ctx.e1(Modality::image),
                                nullptr),
                    cross_corr(solution)};
        break;
    case ObjectiveSet::unimodal:
        v.values = {salience(solution, topic, Modality::text) /
                        (redundancy(solution, Modality::text) + kRedundancyEpsilon),
                    salience(solution, topic, Modality::image) /
                        (redundancy(solution, Modality::image) + kRedundancyEpsilon)};
        break;
    }
    return v;
}

ObjectiveVector evaluate(const Solution& solution, const Topic& topic, ObjectiveSet set) {
    return evaluate(solution, ObjectiveContext(topic), set);
}

} // namespace mms
