#include "mms/postprocess.hpp"

#include <algorithm>
#include <set>

#include "mms/error.hpp"
#include "mms/vecmath.hpp"

namespace mms {

void PostprocessParams::validate() const {
    if (!(alpha <= beta)) throw config_error("alpha must not exceed beta");
    if (video_weight < 0.0 || video_weight > 1.0) {
        throw config_error("video_weight must lie in [0, 1]");
    }
}

std::vector<int> extract_text(const Solution& solution, const Topic& topic,
                              const PostprocessParams& params) {
    std::vector<bool> mask(topic.n_text(), true);
    if (!params.include_transcript_sentences) {
        for (int i = 0; i < topic.n_text(); i++) mask[i] = !topic.text_units[i].is_transcript();
    }
    std::vector<int> ids = nearest_sentences(solution, topic, mask);
    std::sort(ids.begin(), ids.end()); // unit ids are document positions
    return ids;
}

std::vector<int> select_images(const Solution& solution, const Topic& topic,
                               const PostprocessParams& params) {
    std::vector<int> selected;
    for (int i = 0; i < topic.n_image(); i++) {
        if (topic.image_units[i].is_keyframe()) continue;
        for (int s = 0; s < solution.active_image(); s++) {
            const double sim =
                cosine_sim(solution.center(Modality::image, s), topic.image_embedding(i));
            if (sim >= params.alpha && sim <= params.beta) {
                selected.push_back(i);
                break;
            }
        }
    }
    return selected;
}

VideoScore score_video(int video_id, const Topic& topic,
                       std::span<const std::span<const double>> text_centers,
                       std::span<const std::span<const double>> image_centers,
                       const PostprocessParams& params) {
    VideoScore score;
    score.video_id = video_id;

    auto component = [](std::span<const double> unit,
                        std::span<const std::span<const double>> centers) {
        double best = -2.0;
        for (const auto& c : centers) best = std::max(best, cosine_sim(c, unit));
        return best;
    };

    if (!image_centers.empty()) {
        double sum = 0.0;
        int count = 0;
        for (const auto& u : topic.image_units) {
            if (!u.is_keyframe() || u.video_id != video_id) continue;
            sum += component(u.embedding, image_centers);
            count++;
        }
        if (count > 0) {
            score.visual = sum / count;
            score.has_visual = true;
        }
    }
    if (!text_centers.empty()) {
        double sum = 0.0;
        int count = 0;
        for (const auto& u : topic.text_units) {
            if (!u.is_transcript() || u.video_id != video_id) continue;
            sum += component(u.embedding, text_centers);
            count++;
        }
        if (count > 0) {
            score.verbal = sum / count;
            score.has_verbal = true;
        }
    }
    score.score = params.video_weight * score.visual + (1.0 - params.video_weight) * score.verbal;
    return score;
}

VideoScore score_video(int video_id, const Topic& topic, const Solution& solution,
                       const PostprocessParams& params) {
    std::vector<std::span<const double>> text_centers, image_centers;
    for (int s = 0; s < solution.active_text(); s++) {
        text_centers.push_back(solution.center(Modality::text, s));
    }
    for (int s = 0; s < solution.active_image(); s++) {
        image_centers.push_back(solution.center(Modality::image, s));
    }
    return score_video(video_id, topic, text_centers, image_centers, params);
}

std::vector<VideoScore> score_videos(const Topic& topic, const Solution& solution,
                                     const PostprocessParams& params) {
    std::vector<VideoScore> scores;
    scores.reserve(topic.video_ids.size());
    for (int id : topic.video_ids) scores.push_back(score_video(id, topic, solution, params));
    return scores;
}

int select_video(const std::vector<VideoScore>& scores) {
    int best_id = -1;
    double best = 0.0;
    for (const auto& s : scores) {
        if (best_id < 0 || s.score > best || (s.score == best && s.video_id < best_id)) {
            best_id = s.video_id;
            best = s.score;
        }
    }
    return best_id;
}

SummaryBundle make_bundle(const Solution& solution, int member_index, const Topic& topic,
                          const PostprocessParams& params) {
    params.validate();
    SummaryBundle bundle;
    bundle.member_index = member_index;
    bundle.sentence_ids = extract_text(solution, topic, params);
    for (int id : bundle.sentence_ids) bundle.sentences.push_back(topic.text_units[id].text);
    bundle.image_ids = select_images(solution, topic, params);
    const auto scores = score_videos(topic, solution, params);
    bundle.video_id = select_video(scores);
    bundle.video_scored = !scores.empty();
    return bundle;
}

std::vector<SummaryBundle> postprocess_front(const RunRecord& record, const Topic& topic,
                                             const PostprocessParams& params) {
    std::vector<SummaryBundle> bundles;
    for (const FrontMember& member : pareto_front(record)) {
        SummaryBundle bundle = make_bundle(member.solution, member.member_index, topic, params);
        bundle.objectives = member.objectives;
        bundles.push_back(std::move(bundle));
    }
    return bundles;
}

void validate_bundle(const SummaryBundle& bundle, const Topic& topic) {
    std::set<int> seen;
    for (int id : bundle.sentence_ids) {
        if (id < 0 || id >= topic.n_text()) {
            throw runtime_failure("bundle references unknown sentence " + std::to_string(id));
        }
        if (!seen.insert(id).second) {
            throw runtime_failure("bundle repeats sentence " + std::to_string(id));
        }
    }
    seen.clear();
    for (int id : bundle.image_ids) {
        if (id < 0 || id >= topic.n_image()) {
            throw runtime_failure("bundle references unknown image " + std::to_string(id));
        }
        if (topic.image_units[id].is_keyframe()) {
            throw runtime_failure("bundle selects keyframe image " + std::to_string(id));
        }
        if (!seen.insert(id).second) {
            throw runtime_failure("bundle repeats image " + std::to_string(id));
        }
    }
    if (topic.video_ids.empty()) {
        if (bundle.video_id != -1) {
            throw runtime_failure("bundle selects a video on a video-free topic");
        }
    } else if (!topic.has_video(bundle.video_id)) {
        throw runtime_failure("bundle selects unknown video " + std::to_string(bundle.video_id));
    }
}

nlohmann::ordered_json bundle_json(const SummaryBundle& bundle) {
    nlohmann::ordered_json j;
    j["member_index"] = bundle.member_index;
    j["sentence_ids"] = bundle.sentence_ids;
    j["sentences"] = bundle.sentences;
    j["image_ids"] = bundle.image_ids;
    j["video_id"] = bundle.video_id;
    j["video_scored"] = bundle.video_scored;
    if (!bundle.objectives.values.empty()) {
        j["objective_set"] = objective_set_name(bundle.objectives.set_id);
        j["objectives"] = bundle.objectives.values;
    }
    return j;
}

std::string bundle_text(const SummaryBundle& bundle) {
    std::string out;
    for (const auto& s : bundle.sentences) out += s + "\n";
    out += "\n";
    out += "images:";
    for (int id : bundle.image_ids) out += " " + std::to_string(id);
    if (bundle.image_ids.empty()) out += " none";
    out += "\n";
    out += "video: ";
    out += bundle.video_id >= 0 ? std::to_string(bundle.video_id) : "none";
    out += "\n";
    return out;
}

} // namespace mms
