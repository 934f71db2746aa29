#ifndef MMS_EVALUATION_HPP
#define MMS_EVALUATION_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mms/corpus.hpp"
#include "mms/postprocess.hpp"

namespace mms {

/// Lowercased alphanumeric tokens; everything else separates.
std::vector<std::string> tokenize(const std::string& text);

struct RougeScore {
    double recall = 0.0;
    double precision = 0.0;
    double f1 = 0.0;
};

/// N-gram overlap with clipped counts against a single reference.
RougeScore rouge_n(const std::string& candidate, const std::string& reference, int n);

/// Longest common subsequence of tokens against a single reference.
RougeScore rouge_l(const std::string& candidate, const std::string& reference);

/// Multi-reference: the maximum recall and the maximum F1 over references,
/// each taken independently. Empty references are skipped.
RougeScore rouge_n_multi(const std::string& candidate,
                         const std::vector<std::string>& references, int n);
RougeScore rouge_l_multi(const std::string& candidate,
                         const std::vector<std::string>& references);

struct ImagePR {
    std::optional<double> precision; // empty selection leaves it unset
    double recall = 0.0;
};

ImagePR image_pr(const std::vector<int>& selected, const std::vector<int>& gold);

struct BundleReport {
    int member_index = 0;
    RougeScore rouge1;
    RougeScore rouge2;
    RougeScore rougel;
    ImagePR images;             // meaningful only when images_scored
    bool images_scored = false; // false when the topic has no gold images
    bool video_correct = false; // meaningful only when video_scored
    bool video_scored = false;  // false when the topic has no gold videos
};

struct TopicReport {
    std::string topic_name;
    std::vector<BundleReport> bundles;
    // Per-metric maxima over bundles; video is an OR.
    RougeScore best_rouge1;
    RougeScore best_rouge2;
    RougeScore best_rougel;
    ImagePR best_images;
    bool images_scored = false;
    bool any_video_correct = false;
    bool video_scored = false;
};

/// Candidate text for a bundle: its sentences joined with single spaces.
std::string bundle_candidate_text(const SummaryBundle& bundle);

BundleReport evaluate_bundle(const SummaryBundle& bundle, const Topic& topic);

/// Throws Error{data} when the topic carries no usable gold summary.
TopicReport evaluate_bundles(const std::vector<SummaryBundle>& bundles, const Topic& topic);

/// Free-text candidate against the topic references (no images, no video).
BundleReport evaluate_text(const std::string& candidate, const Topic& topic);

nlohmann::ordered_json report_json(const TopicReport& report);

/// Long-format CSV: topic, member, metric, value.
std::string report_csv(const TopicReport& report);

} // namespace mms

#endif
