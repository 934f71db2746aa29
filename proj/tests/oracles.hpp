// Independent reference implementations the tests check the real code
// against. Everything here is written the slow, obvious way on purpose and
// shares no logic with src/.
#ifndef MMS_TESTS_ORACLES_HPP
#define MMS_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mms/corpus.hpp"
#include "mms/genome.hpp"
#include "mms/objectives.hpp"
#include "mms/rng.hpp"

namespace oracle {

inline double cos_sim(const std::vector<double>& a, const std::vector<double>& b) {
    double ab = 0.0;
    double aa = 0.0;
    double bb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ab += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    return ab / (std::sqrt(aa) * std::sqrt(bb));
}

// Centers and units of one modality copied out of the fast structures.
struct ModalityView {
    std::vector<std::vector<double>> centers;
    std::vector<std::vector<double>> units;
};

inline ModalityView view_of(const mms::Solution& solution, const mms::Topic& topic,
                            mms::Modality modality) {
    ModalityView view;
    const int active = solution.active(modality);
    for (int c = 0; c < active; ++c) {
        auto row = solution.center(modality, c);
        view.centers.emplace_back(row.begin(), row.end());
    }
    const int units = modality == mms::Modality::text ? topic.n_text() : topic.n_image();
    for (int i = 0; i < units; ++i) {
        auto row = topic.embedding(modality, i);
        view.units.emplace_back(row.begin(), row.end());
    }
    return view;
}

inline std::vector<int> assign(const ModalityView& view) {
    std::vector<int> assignment;
    for (const auto& unit : view.units) {
        int best = 0;
        double best_sim = cos_sim(view.centers[0], unit);
        for (std::size_t c = 1; c < view.centers.size(); ++c) {
            const double sim = cos_sim(view.centers[c], unit);
            if (sim > best_sim) {
                best_sim = sim;
                best = static_cast<int>(c);
            }
        }
        assignment.push_back(best);
    }
    return assignment;
}

inline double salience(const ModalityView& view) {
    const std::vector<int> assignment = assign(view);
    double total = 0.0;
    for (std::size_t i = 0; i < view.units.size(); ++i) {
        total += cos_sim(view.centers[static_cast<std::size_t>(assignment[i])], view.units[i]);
    }
    return total;
}

inline double redundancy(const ModalityView& view) {
    double total = 0.0;
    for (std::size_t i = 0; i < view.centers.size(); ++i) {
        for (std::size_t j = 0; j < view.centers.size(); ++j) {
            if (i != j) total += cos_sim(view.centers[i], view.centers[j]);
        }
    }
    return total;
}

inline double cross_corr(const ModalityView& text, const ModalityView& image) {
    double total = 0.0;
    for (const auto& t : text.centers) {
        for (const auto& v : image.centers) total += cos_sim(t, v);
    }
    return total;
}

// PBM validity index; degenerate set when every unit sits exactly on its
// assigned center.
inline double pbm(const ModalityView& view, bool* degenerate = nullptr) {
    if (degenerate) *degenerate = false;
    const std::size_t n = view.units.size();
    const std::size_t dim = view.units.front().size();
    std::vector<double> centroid(dim, 0.0);
    for (const auto& unit : view.units) {
        for (std::size_t d = 0; d < dim; ++d) centroid[d] += unit[d];
    }
    for (std::size_t d = 0; d < dim; ++d) centroid[d] /= static_cast<double>(n);
    double e1 = 0.0;
    for (const auto& unit : view.units) e1 += 1.0 - cos_sim(centroid, unit);

    const std::vector<int> assignment = assign(view);
    double ek = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ek += 1.0 - cos_sim(view.centers[static_cast<std::size_t>(assignment[i])], view.units[i]);
    }
    double dk = 0.0;
    for (std::size_t i = 0; i < view.centers.size(); ++i) {
        for (std::size_t j = i + 1; j < view.centers.size(); ++j) {
            dk = std::max(dk, 1.0 - cos_sim(view.centers[i], view.centers[j]));
        }
    }
    if (ek == 0.0) {
        if (degenerate) *degenerate = true;
        return mms::kValidityDegenerateSentinel;
    }
    const double root = (1.0 / static_cast<double>(view.centers.size())) * (e1 / ek) * dk;
    return root * root;
}

inline bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return false;
        if (a[i] > b[i]) strict = true;
    }
    return strict;
}

// Fronts by repeated peeling: scan for members nobody still standing
// dominates, remove them, repeat.
inline std::vector<std::vector<int>> fronts(const std::vector<std::vector<double>>& points) {
    const int n = static_cast<int>(points.size());
    std::vector<char> done(static_cast<std::size_t>(n), 0);
    std::vector<std::vector<int>> result;
    int remaining = n;
    while (remaining > 0) {
        std::vector<int> front;
        for (int i = 0; i < n; ++i) {
            if (done[static_cast<std::size_t>(i)]) continue;
            bool is_dominated = false;
            for (int j = 0; j < n && !is_dominated; ++j) {
                if (j == i || done[static_cast<std::size_t>(j)]) continue;
                if (dominates(points[static_cast<std::size_t>(j)],
                              points[static_cast<std::size_t>(i)])) {
                    is_dominated = true;
                }
            }
            if (!is_dominated) front.push_back(i);
        }
        for (int i : front) done[static_cast<std::size_t>(i)] = 1;
        remaining -= static_cast<int>(front.size());
        result.push_back(std::move(front));
    }
    return result;
}

// Two-sided Kolmogorov-Smirnov tail probability Q(lambda) with the small-n
// correction factor.
inline double ks_p_value(double d_stat, int n) {
    const double sqn = std::sqrt(static_cast<double>(n));
    const double lambda = (sqn + 0.12 + 0.11 / sqn) * d_stat;
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 200; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-14) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

// Distribution function of the bounded polynomial-mutation offset for a gene
// with normalized gaps delta1 (below) and delta2 (above) and index eta.
inline double polynomial_cdf(double d, double delta1, double delta2, double eta) {
    const double a = std::pow(1.0 - delta1, eta + 1.0);
    const double b = std::pow(1.0 - delta2, eta + 1.0);
    if (d <= -delta1) return 0.0;
    if (d >= delta2) return 1.0;
    if (d <= 0.0) return (std::pow(1.0 + d, eta + 1.0) - a) / (2.0 * (1.0 - a));
    return ((2.0 - b) - std::pow(1.0 - d, eta + 1.0)) / (2.0 * (1.0 - b));
}

// Longest common contiguous token run (common substring over token arrays).
inline int longest_common_run(const std::vector<std::string>& a,
                              const std::vector<std::string>& b) {
    int best = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            int len = 0;
            while (i + len < a.size() && j + len < b.size() &&
                   a[i + static_cast<std::size_t>(len)] == b[j + static_cast<std::size_t>(len)]) {
                ++len;
            }
            best = std::max(best, len);
        }
    }
    return best;
}

inline std::vector<double> random_embedding(mms::Rng& rng, int dim) {
    while (true) {
        std::vector<double> row(static_cast<std::size_t>(dim));
        double norm2 = 0.0;
        for (double& x : row) {
            x = mms::uniform01(rng) * 2.0 - 1.0;
            norm2 += x * x;
        }
        if (norm2 > 1e-6) return row;
    }
}

// A topic of plain document sentences and original images with uniform
// random embeddings; no videos, no gold.
inline mms::Topic random_topic(mms::Rng& rng, int n_text, int n_image, int dim) {
    mms::Topic topic;
    topic.name = "random";
    topic.dim = dim;
    for (int i = 0; i < n_text; ++i) {
        mms::TextUnit unit;
        unit.id = i;
        unit.text = "sentence " + std::to_string(i);
        unit.source = mms::TextSource::document;
        unit.embedding = random_embedding(rng, dim);
        topic.text_units.push_back(std::move(unit));
    }
    for (int i = 0; i < n_image; ++i) {
        mms::ImageUnit unit;
        unit.id = i;
        unit.source = mms::ImageSource::original;
        unit.embedding = random_embedding(rng, dim);
        topic.image_units.push_back(std::move(unit));
    }
    topic.validate();
    return topic;
}

inline mms::Solution random_solution(mms::Rng& rng, const mms::Topic& topic, int max_text,
                                     int max_image) {
    const int active_text = mms::uniform_int(rng, 2, max_text);
    const int active_image = mms::uniform_int(rng, 2, max_image);
    mms::Solution solution(topic.dim, max_text, max_image, active_text, active_image);
    for (int c = 0; c < active_text; ++c) {
        const std::vector<double> row = random_embedding(rng, topic.dim);
        std::copy(row.begin(), row.end(), solution.center_mut(mms::Modality::text, c).begin());
    }
    for (int c = 0; c < active_image; ++c) {
        const std::vector<double> row = random_embedding(rng, topic.dim);
        std::copy(row.begin(), row.end(), solution.center_mut(mms::Modality::image, c).begin());
    }
    return solution;
}

} // namespace oracle

#endif
