#ifndef MMS_POSTPROCESS_HPP
#define MMS_POSTPROCESS_HPP

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mms/corpus.hpp"
#include "mms/engine.hpp"
#include "mms/genome.hpp"
#include "mms/objectives.hpp"

namespace mms {

struct PostprocessParams {
    double alpha = 0.4;  // lower image-similarity cutoff
    double beta = 0.95;  // upper image-similarity cutoff (near-duplicate guard)
    double video_weight = 0.5; // visual share of the video score
    bool include_transcript_sentences = true;

    void validate() const; // throws Error{config} on bad ranges
};

/// One solution turned into a consumable summary.
struct SummaryBundle {
    int member_index = 0;
    std::vector<int> sentence_ids; // ascending document order
    std::vector<std::string> sentences;
    std::vector<int> image_ids;    // ascending, originals only
    int video_id = -1;             // -1 when no video qualifies
    bool video_scored = false;     // true when any video received a score
    ObjectiveVector objectives;    // empty for baseline bundles
};

/// Nearest sentence per active text center, deduplicated, in document order.
/// Transcript sentences are candidates only when the params say so.
std::vector<int> extract_text(const Solution& solution, const Topic& topic,
                              const PostprocessParams& params);

/// Original images whose similarity to some active image center lies in
/// [alpha, beta]. Keyframes never appear in summaries.
std::vector<int> select_images(const Solution& solution, const Topic& topic,
                               const PostprocessParams& params);

struct VideoScore {
    int video_id = -1;
    double visual = 0.0;
    double verbal = 0.0;
    double score = 0.0;
    bool has_visual = false; // video had keyframes
    bool has_verbal = false; // video had transcript sentences
};

/// Score one video against arbitrary center sets (rows of length dim).
VideoScore score_video(int video_id, const Topic& topic,
                       std::span<const std::span<const double>> text_centers,
                       std::span<const std::span<const double>> image_centers,
                       const PostprocessParams& params);

VideoScore score_video(int video_id, const Topic& topic, const Solution& solution,
                       const PostprocessParams& params);

/// All videos scored; empty when the topic has none.
std::vector<VideoScore> score_videos(const Topic& topic, const Solution& solution,
                                     const PostprocessParams& params);

/// Highest-scoring video, ties to the lowest id; -1 when there are no videos.
int select_video(const std::vector<VideoScore>& scores);

SummaryBundle make_bundle(const Solution& solution, int member_index,
                          const Topic& topic, const PostprocessParams& params);

/// One bundle per front-0 member, in member order.
std::vector<SummaryBundle> postprocess_front(const RunRecord& record, const Topic& topic,
                                             const PostprocessParams& params);

/// Throws Error{runtime} when a bundle references ids outside the topic.
void validate_bundle(const SummaryBundle& bundle, const Topic& topic);

nlohmann::ordered_json bundle_json(const SummaryBundle& bundle);

/// Plain-text rendering: sentences, then image ids, then the video id.
std::string bundle_text(const SummaryBundle& bundle);

} // namespace mms

#endif
