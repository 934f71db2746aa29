#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include <doctest.h>

#include "mms/corpus.hpp"
#include "mms/engine.hpp"
#include "mms/error.hpp"
#include "mms/genome.hpp"
#include "mms/postprocess.hpp"
#include "mms/rng.hpp"

#include "oracles.hpp"

using mms::Modality;
using mms::PostprocessParams;
using mms::Solution;
using mms::SummaryBundle;
using mms::Topic;

namespace {

Topic planted(std::uint64_t seed, int clusters, int text, int img, int dim, double noise) {
    mms::SyntheticSpec spec;
    spec.seed = seed;
    spec.n_clusters = clusters;
    spec.per_cluster_text = text;
    spec.per_cluster_img = img;
    spec.dim = dim;
    spec.noise = noise;
    return mms::generate_synthetic_topic(spec);
}

Solution make_solution(int dim, const std::vector<std::vector<double>>& text_centers,
                       const std::vector<std::vector<double>>& image_centers) {
    const int kt = static_cast<int>(text_centers.size());
    const int ki = static_cast<int>(image_centers.size());
    Solution solution(dim, kt, ki, kt, ki);
    for (int j = 0; j < kt; ++j) {
        std::ranges::copy(text_centers[static_cast<std::size_t>(j)],
                          solution.center_mut(Modality::text, j).begin());
    }
    for (int j = 0; j < ki; ++j) {
        std::ranges::copy(image_centers[static_cast<std::size_t>(j)],
                          solution.center_mut(Modality::image, j).begin());
    }
    return solution;
}

std::vector<double> row_of(std::span<const double> row) {
    return {row.begin(), row.end()};
}

// Two videos with one keyframe and one transcript each, plus loose units.
// Everything is axis-aligned so similarities are exact.
Topic video_topic() {
    Topic topic;
    topic.name = "videos";
    topic.dim = 4;
    topic.video_ids = {0, 1};

    topic.text_units.resize(4);
    topic.text_units[0] = {0, "doc one", mms::TextSource::document, -1, {1, 0, 0, 0}};
    topic.text_units[1] = {1, "doc two", mms::TextSource::document, -1, {0, 1, 0, 0}};
    topic.text_units[2] = {2, "spoken zero", mms::TextSource::transcript, 0, {0, 0, 1, 0}};
    topic.text_units[3] = {3, "spoken one", mms::TextSource::transcript, 1, {0, 0, 0, 1}};

    topic.image_units.resize(4);
    topic.image_units[0] = {0, mms::ImageSource::original, -1, 0.0, {1, 0, 0, 0}};
    topic.image_units[1] = {1, mms::ImageSource::original, -1, 0.0, {0, 1, 0, 0}};
    topic.image_units[2] = {2, mms::ImageSource::keyframe, 0, 1.5, {0, 0, 1, 0}};
    topic.image_units[3] = {3, mms::ImageSource::keyframe, 1, 2.5, {0, 0, 0, 1}};
    topic.validate();
    return topic;
}

} // namespace

TEST_SUITE("postprocess") {

TEST_CASE("postprocess parameter validation") {
    PostprocessParams params;
    params.validate(); // defaults legal
    params.alpha = 0.9;
    params.beta = 0.5;
    CHECK_THROWS_AS(params.validate(), mms::Error);
    params = {};
    params.video_weight = 1.5;
    CHECK_THROWS_AS(params.validate(), mms::Error);
}

TEST_CASE("text extraction returns document order, deduplicated") {
    mms::Rng rng = mms::make_rng(701);
    const Topic topic = oracle::random_topic(rng, 6, 3, 5);
    const PostprocessParams params;

    // Centers on sentences 4 and 1 (slot order reversed from id order).
    const Solution on_units = make_solution(
        5, {row_of(topic.text_embedding(4)), row_of(topic.text_embedding(1))},
        {row_of(topic.image_embedding(0)), row_of(topic.image_embedding(1))});
    CHECK(mms::extract_text(on_units, topic, params) == std::vector<int>{1, 4});

    // Both centers nearest the same sentence -> one entry.
    const Solution shared = make_solution(
        5, {row_of(topic.text_embedding(2)), row_of(topic.text_embedding(2))},
        {row_of(topic.image_embedding(0)), row_of(topic.image_embedding(1))});
    CHECK(mms::extract_text(shared, topic, params) == std::vector<int>{2});
}

TEST_CASE("text extraction on a planted topic finds one exemplar per cluster") {
    const Topic topic = planted(702, 3, 4, 3, 9, 0.0);
    std::vector<std::vector<double>> text_centers;
    std::vector<std::vector<double>> image_centers;
    for (int c = 0; c < 3; ++c) {
        text_centers.push_back(row_of(topic.text_embedding(c * 4)));
        image_centers.push_back(row_of(topic.image_embedding(c * 3)));
    }
    const Solution solution = make_solution(topic.dim, text_centers, image_centers);
    CHECK(mms::extract_text(solution, topic, PostprocessParams{}) ==
          std::vector<int>{0, 4, 8});
}

TEST_CASE("transcript sentences can be barred from the text summary") {
    const Topic topic = video_topic();
    PostprocessParams params;

    // One center on a transcript sentence, one on a document sentence.
    const Solution solution = make_solution(
        4, {{0, 0, 1, 0}, {1, 0, 0, 0}},
        {{1, 0, 0, 0}, {0, 1, 0, 0}});
    params.include_transcript_sentences = true;
    CHECK(mms::extract_text(solution, topic, params) == std::vector<int>{0, 2});

    params.include_transcript_sentences = false;
    const std::vector<int> restricted = mms::extract_text(solution, topic, params);
    for (int id : restricted) {
        CHECK_FALSE(topic.text_units[static_cast<std::size_t>(id)].is_transcript());
    }
    CHECK(std::find(restricted.begin(), restricted.end(), 0) != restricted.end());
}

TEST_CASE("image selection bands") {
    const Topic topic = video_topic();
    PostprocessParams params;

    const Solution solution = make_solution(
        4, {{1, 0, 0, 0}, {0, 1, 0, 0}},
        {{1, 0, 0, 0}, {0, 0, 1, 0}});

    // A vacuous band admits every original image and still no keyframes.
    params.alpha = -1.0;
    params.beta = 1.0;
    CHECK(mms::select_images(solution, topic, params) == std::vector<int>{0, 1});

    // A point band at exactly 1 keeps only the image a center sits on.
    params.alpha = 1.0;
    params.beta = 1.0;
    CHECK(mms::select_images(solution, topic, params) == std::vector<int>{0});
}

TEST_CASE("image selection on a planted topic keeps own-cluster originals") {
    const Topic topic = planted(703, 3, 4, 4, 9, 0.05);
    PostprocessParams params;
    params.alpha = 0.8;
    params.beta = 1.0;

    // Two centers inside cluster 0 only.
    const Solution solution = make_solution(
        topic.dim,
        {row_of(topic.text_embedding(0)), row_of(topic.text_embedding(1))},
        {row_of(topic.image_embedding(0)), row_of(topic.image_embedding(1))});
    const std::vector<int> selected = mms::select_images(solution, topic, params);
    CHECK(selected == std::vector<int>{0, 1, 2}); // cluster 0 originals, keyframe 3 excluded
}

TEST_CASE("widening the band never drops an image") {
    mms::Rng rng = mms::make_rng(704);
    for (int trial = 0; trial < 15; ++trial) {
        const Topic topic = oracle::random_topic(rng, 4, 8, 5);
        const Solution solution = oracle::random_solution(rng, topic, 3, 3);
        PostprocessParams narrow;
        narrow.alpha = 0.2;
        narrow.beta = 0.7;
        PostprocessParams wide;
        wide.alpha = -0.1;
        wide.beta = 0.9;
        const std::vector<int> inner = mms::select_images(solution, topic, narrow);
        const std::vector<int> outer = mms::select_images(solution, topic, wide);
        CHECK(std::includes(outer.begin(), outer.end(), inner.begin(), inner.end()));
    }
}

TEST_CASE("video scores decompose into weighted components") {
    const Topic topic = video_topic();
    const Solution solution = make_solution(
        4, {{0, 0, 1, 0}, {1, 0, 0, 0}},
        {{0, 0, 1, 0}, {1, 0, 0, 0}});

    PostprocessParams params;
    params.video_weight = 1.0;
    // Video 0's keyframe sits on an image center: visual = 1.
    const mms::VideoScore full = mms::score_video(0, topic, solution, params);
    CHECK(full.has_visual);
    CHECK(full.has_verbal);
    CHECK(full.visual == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(full.score == doctest::Approx(full.visual).epsilon(1e-12)); // weight extreme

    for (double weight : {0.0, 0.25, 0.5, 1.0}) {
        params.video_weight = weight;
        const mms::VideoScore score = mms::score_video(0, topic, solution, params);
        CHECK(score.score ==
              doctest::Approx(weight * score.visual + (1.0 - weight) * score.verbal)
                  .epsilon(1e-12));
        CHECK(score.visual == doctest::Approx(full.visual).epsilon(1e-12));
        CHECK(score.verbal == doctest::Approx(full.verbal).epsilon(1e-12));
    }
}

TEST_CASE("video scoring matches a hand computation on a planted topic") {
    const Topic topic = planted(705, 3, 4, 3, 9, 0.1);
    mms::Rng rng = mms::make_rng(706);
    const Solution solution = oracle::random_solution(rng, topic, 3, 3);
    PostprocessParams params;
    params.video_weight = 0.6;

    const std::vector<mms::VideoScore> scores = mms::score_videos(topic, solution, params);
    REQUIRE(scores.size() == topic.video_ids.size());
    for (const mms::VideoScore& score : scores) {
        double visual = 0.0;
        int keyframes = 0;
        for (const auto& image : topic.image_units) {
            if (!image.is_keyframe() || image.video_id != score.video_id) continue;
            double best = -2.0;
            for (int slot = 0; slot < solution.active_image(); ++slot) {
                best = std::max(best, oracle::cos_sim(
                    row_of(solution.center(Modality::image, slot)), image.embedding));
            }
            visual += best;
            ++keyframes;
        }
        if (keyframes > 0) visual /= keyframes;
        double verbal = 0.0;
        int transcripts = 0;
        for (const auto& text : topic.text_units) {
            if (!text.is_transcript() || text.video_id != score.video_id) continue;
            double best = -2.0;
            for (int slot = 0; slot < solution.active_text(); ++slot) {
                best = std::max(best, oracle::cos_sim(
                    row_of(solution.center(Modality::text, slot)), text.embedding));
            }
            verbal += best;
            ++transcripts;
        }
        if (transcripts > 0) verbal /= transcripts;

        CHECK(score.has_visual == (keyframes > 0));
        CHECK(score.has_verbal == (transcripts > 0));
        CHECK(score.visual == doctest::Approx(visual).epsilon(1e-9));
        CHECK(score.verbal == doctest::Approx(verbal).epsilon(1e-9));
        CHECK(score.score ==
              doctest::Approx(0.6 * visual + 0.4 * verbal).epsilon(1e-9));
    }
}

TEST_CASE("a video with no attached units scores zero and is flagged") {
    Topic topic = video_topic();
    topic.video_ids.push_back(2); // no keyframes, no transcripts
    topic.validate();
    const Solution solution = make_solution(
        4, {{1, 0, 0, 0}, {0, 1, 0, 0}}, {{1, 0, 0, 0}, {0, 1, 0, 0}});
    const mms::VideoScore score = mms::score_video(2, topic, solution, PostprocessParams{});
    CHECK_FALSE(score.has_visual);
    CHECK_FALSE(score.has_verbal);
    CHECK(score.score == 0.0);
}

TEST_CASE("video selection takes the argmax with ties to the lower id") {
    CHECK(mms::select_video({{4, 0, 0, 0.7, true, true}}) == 4);
    CHECK(mms::select_video({{0, 0, 0, 0.5, true, true},
                             {1, 0, 0, 0.9, true, true},
                             {2, 0, 0, 0.2, true, true}}) == 1);
    CHECK(mms::select_video({{0, 0, 0, 0.5, true, true},
                             {1, 0, 0, 0.5, true, true}}) == 0); // tie rule
    CHECK(mms::select_video({}) == -1);
}

TEST_CASE("bundles assemble every piece and validate against their topic") {
    const Topic topic = planted(707, 3, 5, 4, 10, 0.1);
    mms::EvolutionParams params;
    params.population_size = 8;
    params.mating_pool_size = 3;
    params.max_text_clusters = 4;
    params.max_image_clusters = 4;
    params.max_generations = 4;
    params.seed = 9;
    const mms::RunRecord record = mms::run(topic, params);
    const std::vector<mms::FrontMember> front = mms::pareto_front(record);
    const PostprocessParams post;
    const std::vector<SummaryBundle> bundles = mms::postprocess_front(record, topic, post);
    REQUIRE(bundles.size() == front.size());
    for (std::size_t b = 0; b < bundles.size(); ++b) {
        const SummaryBundle& bundle = bundles[b];
        CHECK(bundle.member_index == front[b].member_index);
        CHECK(bundle.objectives == front[b].objectives);
        CHECK(std::is_sorted(bundle.sentence_ids.begin(), bundle.sentence_ids.end()));
        CHECK(std::is_sorted(bundle.image_ids.begin(), bundle.image_ids.end()));
        REQUIRE(bundle.sentences.size() == bundle.sentence_ids.size());
        for (std::size_t s = 0; s < bundle.sentences.size(); ++s) {
            CHECK(bundle.sentences[s] ==
                  topic.text_units[static_cast<std::size_t>(bundle.sentence_ids[s])].text);
        }
        CHECK(bundle.video_scored);
        CHECK(topic.has_video(bundle.video_id));
        mms::validate_bundle(bundle, topic); // throws on any inconsistency
    }
}

TEST_CASE("a video-free topic produces videoless bundles") {
    mms::Rng rng = mms::make_rng(708);
    const Topic topic = oracle::random_topic(rng, 6, 4, 5);
    const Solution solution = make_solution(
        5, {row_of(topic.text_embedding(0)), row_of(topic.text_embedding(1))},
        {row_of(topic.image_embedding(0)), row_of(topic.image_embedding(1))});
    const SummaryBundle bundle = mms::make_bundle(solution, 0, topic, PostprocessParams{});
    CHECK(bundle.video_id == -1);
    CHECK_FALSE(bundle.video_scored);
    mms::validate_bundle(bundle, topic);
}

TEST_CASE("bundle validation rejects every malformed reference") {
    const Topic topic = video_topic();
    SummaryBundle good;
    good.sentence_ids = {0, 1};
    good.sentences = {"doc one", "doc two"};
    good.image_ids = {0};
    good.video_id = 1;
    good.video_scored = true;
    mms::validate_bundle(good, topic);

    SummaryBundle bad = good;
    bad.sentence_ids = {0, 9};
    CHECK_THROWS_AS(mms::validate_bundle(bad, topic), mms::Error);
    bad = good;
    bad.sentence_ids = {1, 1};
    CHECK_THROWS_AS(mms::validate_bundle(bad, topic), mms::Error);
    bad = good;
    bad.image_ids = {7};
    CHECK_THROWS_AS(mms::validate_bundle(bad, topic), mms::Error);
    bad = good;
    bad.image_ids = {2}; // keyframe
    CHECK_THROWS_AS(mms::validate_bundle(bad, topic), mms::Error);
    bad = good;
    bad.image_ids = {0, 0};
    CHECK_THROWS_AS(mms::validate_bundle(bad, topic), mms::Error);
    bad = good;
    bad.video_id = 5;
    CHECK_THROWS_AS(mms::validate_bundle(bad, topic), mms::Error);
    bad = good;
    bad.video_id = -1; // topic has videos, one must be chosen
    CHECK_THROWS_AS(mms::validate_bundle(bad, topic), mms::Error);

    // And the mirror image: a video id on a video-free topic.
    mms::Rng rng = mms::make_rng(709);
    const Topic plain = oracle::random_topic(rng, 4, 3, 4);
    SummaryBundle stray;
    stray.sentence_ids = {0};
    stray.sentences = {plain.text_units[0].text};
    stray.video_id = 0;
    CHECK_THROWS_AS(mms::validate_bundle(stray, plain), mms::Error);
}

TEST_CASE("bundle serialization carries the full summary") {
    const Topic topic = video_topic();
    SummaryBundle bundle;
    bundle.member_index = 3;
    bundle.sentence_ids = {0, 1};
    bundle.sentences = {"doc one", "doc two"};
    bundle.image_ids = {0, 1};
    bundle.video_id = 0;
    bundle.video_scored = true;
    bundle.objectives = {mms::ObjectiveSet::summarization, {1.5, 2.5, 3.5}};

    const nlohmann::ordered_json j = mms::bundle_json(bundle);
    CHECK(j["member_index"].get<int>() == 3);
    CHECK(j["sentence_ids"].get<std::vector<int>>() == std::vector<int>{0, 1});
    CHECK(j["sentences"].get<std::vector<std::string>>() ==
          std::vector<std::string>{"doc one", "doc two"});
    CHECK(j["image_ids"].get<std::vector<int>>() == std::vector<int>{0, 1});
    CHECK(j["video_id"].get<int>() == 0);
    CHECK(j["objective_set"].get<std::string>() == "summarization");
    CHECK(j["objectives"].get<std::vector<double>>() ==
          std::vector<double>{1.5, 2.5, 3.5});

    // Baseline-style bundles carry no objective vector at all.
    SummaryBundle plain = bundle;
    plain.objectives = {};
    CHECK_FALSE(mms::bundle_json(plain).contains("objectives"));

    const std::string text = mms::bundle_text(bundle);
    CHECK(text.find("doc one") != std::string::npos);
    CHECK(text.find("doc two") != std::string::npos);
    CHECK(text.find("0") != std::string::npos);
}

} // TEST_SUITE
