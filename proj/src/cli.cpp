#include "mms/cli.hpp"

#include <algorithm>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mms/clustering.hpp"
#include "mms/engine.hpp"
#include "mms/error.hpp"
#include "mms/evaluation.hpp"

namespace mms {

namespace fs = std::filesystem;

namespace {

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw runtime_failure("cannot open " + path.string() + " for writing");
    out << content;
    out.close();
    if (!out) throw runtime_failure("write failed for " + path.string());
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw data_error("read failed for " + path.string());
    return buffer.str();
}

std::string json_text(const nlohmann::ordered_json& doc) { return doc.dump(2) + "\n"; }

// Full option values including defaults, minus unset value-less entries
// (echoed as `key=""`), so the echo parses back as a valid config file.
std::string effective_config(const CLI::App& app) {
    std::istringstream in(app.config_to_str(true, false));
    std::string line;
    std::string out;
    while (std::getline(in, line)) {
        if (line.size() >= 3 && line.compare(line.size() - 3, 3, "=\"\"") == 0) continue;
        out += line;
        out += '\n';
    }
    return out;
}

std::string zero_padded(int value, std::size_t width) {
    std::string digits = std::to_string(value);
    while (digits.size() < width) digits.insert(digits.begin(), '0');
    return digits;
}

// Re-throws the in-flight exception with the topic name prepended, keeping
// the error kind so the exit code still reflects the original failure.
[[noreturn]] void rethrow_for_topic(const std::string& name) {
    try {
        throw;
    } catch (const Error& e) {
        throw Error(e.kind(), "topic '" + name + "': " + e.what());
    } catch (const std::exception& e) {
        throw runtime_failure("topic '" + name + "': " + e.what());
    }
}

std::vector<Topic> load_topics(const std::vector<std::string>& paths) {
    if (paths.empty()) throw config_error("at least one --topic is required");
    std::vector<Topic> topics;
    std::set<std::string> names;
    for (const std::string& path : paths) {
        Topic topic = load_topic(path);
        if (!names.insert(topic.name).second) {
            throw config_error("duplicate topic name '" + topic.name +
                               "'; per-topic output directories would collide");
        }
        topics.push_back(std::move(topic));
    }
    return topics;
}

template <typename Fn>
void for_each_topic(int count, int workers, Fn&& body) {
#ifdef _OPENMP
    if (workers > 1 && count > 1) {
        std::exception_ptr first_error;
#pragma omp parallel for num_threads(workers) schedule(dynamic)
        for (int i = 0; i < count; ++i) {
            try {
                body(i);
            } catch (...) {
#pragma omp critical
                {
                    if (!first_error) first_error = std::current_exception();
                }
            }
        }
        if (first_error) std::rethrow_exception(first_error);
        return;
    }
#endif
    for (int i = 0; i < count; ++i) body(i);
}

void write_bundle_files(const fs::path& topic_dir, const std::vector<SummaryBundle>& bundles) {
    fs::create_directories(topic_dir / "bundles");
    for (std::size_t i = 0; i < bundles.size(); ++i) {
        const std::string stem = "bundle_" + zero_padded(static_cast<int>(i), 3);
        write_text_file(topic_dir / "bundles" / (stem + ".json"), json_text(bundle_json(bundles[i])));
        write_text_file(topic_dir / "bundles" / (stem + ".txt"), bundle_text(bundles[i]));
    }
}

void write_report_files(const fs::path& topic_dir, const TopicReport& report) {
    write_text_file(topic_dir / "report.json", json_text(report_json(report)));
    write_text_file(topic_dir / "scores.csv", report_csv(report));
}

void run_one_topic(const Topic& topic, const RunOptions& options, int engine_threads) {
    RunRecord record = run(topic, options.evolution, engine_threads);
    std::vector<SummaryBundle> bundles = postprocess_front(record, topic, options.postprocess);
    for (const SummaryBundle& bundle : bundles) validate_bundle(bundle, topic);

    const fs::path topic_dir = fs::path(options.out_dir) / topic.name;
    fs::create_directories(topic_dir);
    write_text_file(topic_dir / "telemetry.csv", telemetry_csv(record));
    write_text_file(topic_dir / "final_population.json", json_text(population_json(record)));
    write_bundle_files(topic_dir, bundles);
    if (topic.gold.has_value()) {
        write_report_files(topic_dir, evaluate_bundles(bundles, topic));
    }
}

void baseline_one_topic(const Topic& topic, int topic_index, const BaselineOptions& options) {
    const fs::path topic_dir = fs::path(options.out_dir) / topic.name;
    const std::uint64_t topic_seed =
        mix_seed(options.seed, seed_tag::baseline, static_cast<std::uint64_t>(topic_index));

    if (options.which == "random_video") {
        Rng rng = make_rng(topic_seed);
        std::vector<SummaryBundle> bundles;
        bundles.reserve(static_cast<std::size_t>(options.attempts));
        for (int attempt = 0; attempt < options.attempts; ++attempt) {
            bundles.push_back(random_video_bundle(topic, rng));
        }
        fs::create_directories(topic_dir);
        write_bundle_files(topic_dir, bundles);
        if (topic.gold.has_value() && !topic.gold->gold_video_ids.empty()) {
            int correct = 0;
            for (const SummaryBundle& bundle : bundles) {
                correct += topic.gold->gold_video_ids.count(bundle.video_id) > 0 ? 1 : 0;
            }
            nlohmann::ordered_json report;
            report["topic"] = topic.name;
            report["baseline"] = options.which;
            report["attempts"] = options.attempts;
            report["correct"] = correct;
            report["accuracy"] = static_cast<double>(correct) / options.attempts;
            write_text_file(topic_dir / "report.json", json_text(report));
        }
        return;
    }

    SummaryBundle bundle;
    if (options.which == "double_kmedoid") {
        if (options.k_text < 2 || options.k_text > topic.n_text()) {
            throw config_error("k-text must lie in [2, " + std::to_string(topic.n_text()) + "]");
        }
        if (options.k_image < 2 || options.k_image > topic.n_image()) {
            throw config_error("k-image must lie in [2, " + std::to_string(topic.n_image()) + "]");
        }
        bundle = double_kmedoid_bundle(topic, options.k_text, options.k_image, topic_seed,
                                       options.postprocess);
    } else {
        const int limit = std::min(topic.n_text(), topic.n_image());
        if (options.k < 2 || options.k > limit) {
            throw config_error("k must lie in [2, " + std::to_string(limit) +
                               "] (bounded by the smaller modality)");
        }
        bundle = multimodal_kmedoid_bundle(topic, options.k, topic_seed, options.postprocess);
    }
    validate_bundle(bundle, topic);
    fs::create_directories(topic_dir);
    write_bundle_files(topic_dir, {bundle});
    if (topic.gold.has_value()) {
        write_report_files(topic_dir, evaluate_bundles({bundle}, topic));
    }
}

/// Sorted, deduplicated unit ids turned into a bundle; the chosen video is
/// the one scoring best against the selected units' own embeddings.
SummaryBundle selection_bundle(const Topic& topic, std::vector<int> sentence_ids,
                               std::vector<int> image_ids, const PostprocessParams& params) {
    std::sort(sentence_ids.begin(), sentence_ids.end());
    sentence_ids.erase(std::unique(sentence_ids.begin(), sentence_ids.end()), sentence_ids.end());
    std::sort(image_ids.begin(), image_ids.end());
    image_ids.erase(std::unique(image_ids.begin(), image_ids.end()), image_ids.end());

    SummaryBundle bundle;
    bundle.member_index = 0;
    bundle.sentence_ids = sentence_ids;
    for (int id : sentence_ids) bundle.sentences.push_back(topic.text_units[id].text);
    bundle.image_ids = image_ids;

    std::vector<std::span<const double>> text_rows;
    std::vector<std::span<const double>> image_rows;
    for (int id : sentence_ids) text_rows.emplace_back(topic.text_units[id].embedding);
    for (int id : image_ids) image_rows.emplace_back(topic.image_units[id].embedding);
    std::vector<VideoScore> scores;
    scores.reserve(topic.video_ids.size());
    for (int video : topic.video_ids) {
        scores.push_back(score_video(video, topic, text_rows, image_rows, params));
    }
    bundle.video_scored = !scores.empty();
    bundle.video_id = select_video(scores);
    return bundle;
}

SummaryBundle bundle_from_json(const nlohmann::json& doc, const Topic& topic,
                               const std::string& where) {
    SummaryBundle bundle;
    try {
        bundle.member_index = doc.value("member_index", 0);
        bundle.sentence_ids = doc.value("sentence_ids", std::vector<int>{});
        bundle.image_ids = doc.value("image_ids", std::vector<int>{});
        bundle.video_id = doc.value("video_id", -1);
        bundle.video_scored = doc.value("video_scored", bundle.video_id >= 0);
    } catch (const nlohmann::json::exception& e) {
        throw data_error(where + ": " + e.what());
    }
    try {
        validate_bundle(bundle, topic);
    } catch (const Error& e) {
        // Malformed input, not an internal failure.
        throw data_error(where + ": " + e.what());
    }
    for (int id : bundle.sentence_ids) bundle.sentences.push_back(topic.text_units[id].text);
    return bundle;
}

} // namespace

SummaryBundle double_kmedoid_bundle(const Topic& topic, int k_text, int k_image,
                                    std::uint64_t seed, const PostprocessParams& params) {
    params.validate();
    Rng rng = make_rng(seed);
    auto [text_side, image_side] = double_kmedoid(topic, k_text, k_image, rng);
    std::vector<int> sentence_ids;
    for (const UnitRef& center : text_side.centers) {
        if (!params.include_transcript_sentences && topic.text_units[center.id].is_transcript()) {
            continue;
        }
        sentence_ids.push_back(center.id);
    }
    std::vector<int> image_ids;
    for (const UnitRef& center : image_side.centers) {
        if (topic.image_units[center.id].is_keyframe()) continue;
        image_ids.push_back(center.id);
    }
    return selection_bundle(topic, std::move(sentence_ids), std::move(image_ids), params);
}

SummaryBundle multimodal_kmedoid_bundle(const Topic& topic, int k, std::uint64_t seed,
                                        const PostprocessParams& params) {
    params.validate();
    Rng rng = make_rng(seed);
    MultimodalSelection selection = multimodal_kmedoid(topic, k, rng);
    std::vector<int> sentence_ids;
    for (int id : selection.sentence_ids) {
        if (!params.include_transcript_sentences && topic.text_units[id].is_transcript()) continue;
        sentence_ids.push_back(id);
    }
    std::vector<int> image_ids;
    for (int id : selection.image_ids) {
        if (topic.image_units[id].is_keyframe()) continue;
        image_ids.push_back(id);
    }
    return selection_bundle(topic, std::move(sentence_ids), std::move(image_ids), params);
}

SummaryBundle random_video_bundle(const Topic& topic, Rng& rng) {
    SummaryBundle bundle;
    if (!topic.video_ids.empty()) {
        const int pick = uniform_int(rng, 0, static_cast<int>(topic.video_ids.size()) - 1);
        bundle.video_id = topic.video_ids[static_cast<std::size_t>(pick)];
        bundle.video_scored = true;
    }
    return bundle;
}

void cmd_run(const RunOptions& options) {
    options.evolution.validate();
    options.postprocess.validate();
    if (options.workers < 1) throw config_error("workers must be at least 1");
    std::vector<Topic> topics = load_topics(options.topics);
    // A lone topic gets the workers inside the engine; several topics run in
    // parallel with a serial engine each. Outputs are identical either way.
    const bool single = topics.size() == 1;
    const int engine_threads = single ? options.workers : 1;
    const int topic_workers = single ? 1 : options.workers;
    for_each_topic(static_cast<int>(topics.size()), topic_workers, [&](int t) {
        try {
            run_one_topic(topics[static_cast<std::size_t>(t)], options, engine_threads);
        } catch (...) {
            rethrow_for_topic(topics[static_cast<std::size_t>(t)].name);
        }
    });
}

void cmd_baseline(const BaselineOptions& options) {
    options.postprocess.validate();
    if (options.workers < 1) throw config_error("workers must be at least 1");
    if (options.which != "double_kmedoid" && options.which != "multimodal_kmedoid" &&
        options.which != "random_video") {
        throw config_error("unknown baseline '" + options.which +
                           "' (expected double_kmedoid, multimodal_kmedoid, or random_video)");
    }
    if (options.attempts < 1) throw config_error("attempts must be at least 1");
    std::vector<Topic> topics = load_topics(options.topics);
    for_each_topic(static_cast<int>(topics.size()), options.workers, [&](int t) {
        try {
            baseline_one_topic(topics[static_cast<std::size_t>(t)], t, options);
        } catch (...) {
            rethrow_for_topic(topics[static_cast<std::size_t>(t)].name);
        }
    });
}

void cmd_eval(const EvalOptions& options) {
    if (options.topic.empty()) throw config_error("eval needs --topic");
    Topic topic = load_topic(options.topic);
    if (!topic.gold.has_value()) {
        throw data_error("topic '" + topic.name +
                         "' carries no gold summary; nothing to evaluate against");
    }

    TopicReport report;
    if (!options.candidate_file.empty()) {
        if (!options.bundle_files.empty()) {
            throw config_error("give either --bundles or --candidate-file, not both");
        }
        BundleReport scored = evaluate_text(read_text_file(options.candidate_file), topic);
        report.topic_name = topic.name;
        report.bundles.push_back(scored);
        report.best_rouge1 = scored.rouge1;
        report.best_rouge2 = scored.rouge2;
        report.best_rougel = scored.rougel;
        report.best_images = scored.images;
        report.images_scored = scored.images_scored;
        report.any_video_correct = scored.video_scored && scored.video_correct;
        report.video_scored = scored.video_scored;
    } else {
        if (options.bundle_files.empty()) {
            throw config_error("eval needs --bundles or --candidate-file");
        }
        std::vector<SummaryBundle> bundles;
        for (const std::string& file : options.bundle_files) {
            nlohmann::json doc;
            try {
                doc = nlohmann::json::parse(read_text_file(file));
            } catch (const nlohmann::json::exception& e) {
                throw data_error(file + ": " + e.what());
            }
            bundles.push_back(bundle_from_json(doc, topic, file));
        }
        report = evaluate_bundles(bundles, topic);
    }

    fs::create_directories(options.out_dir);
    write_report_files(options.out_dir, report);
}

void cmd_synth(const SynthOptions& options) {
    Topic topic = generate_synthetic_topic(options.spec);
    const fs::path dir = options.out_dir.empty() ? fs::path(topic.name) : fs::path(options.out_dir);
    write_topic(topic, dir, options.binary_embeddings);
}

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Extractive multi-modal summarizer: evolutionary engine, clustering "
                 "baselines, and summary evaluation"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML config file; sections [run], [baseline], [eval], [synth]");

    RunOptions run_options;
    BaselineOptions baseline_options;
    EvalOptions eval_options;
    SynthOptions synth_options;
    std::string run_objective_set = "summarization";
    double run_gene_mutation_prob = -1.0;

    CLI::App* run_cmd = app.add_subcommand("run", "Evolve summaries for one or more topics");
    run_cmd->add_option("--topic", run_options.topics,
                        "Topic manifest file or directory (repeatable)");
    run_cmd->add_option("--out", run_options.out_dir, "Output directory")->capture_default_str();
    run_cmd->add_option("--workers", run_options.workers,
                        "Threads: across topics, or inside the engine for a single topic")
        ->capture_default_str();
    run_cmd->add_option("--seed", run_options.evolution.seed, "Base RNG seed")
        ->capture_default_str();
    run_cmd->add_option("--objective-set", run_objective_set,
                        "summarization, clustering, or unimodal")
        ->capture_default_str();
    run_cmd->add_option("--population-size", run_options.evolution.population_size, "")
        ->capture_default_str();
    run_cmd->add_option("--mating-pool-size", run_options.evolution.mating_pool_size, "")
        ->capture_default_str();
    run_cmd->add_option("--scale-factor", run_options.evolution.scale_factor,
                        "Differential weight F")
        ->capture_default_str();
    run_cmd->add_option("--crossover-rate", run_options.evolution.crossover_rate, "")
        ->capture_default_str();
    run_cmd->add_option("--eta-m", run_options.evolution.eta_m,
                        "Polynomial mutation distribution index")
        ->capture_default_str();
    CLI::Option* gene_mutation_option =
        run_cmd->add_option("--gene-mutation-prob", run_gene_mutation_prob,
                            "Per-gene mutation probability (default 1/dim)");
    run_cmd->add_option("--insertion-prob", run_options.evolution.insertion_prob, "")
        ->capture_default_str();
    run_cmd->add_option("--deletion-prob", run_options.evolution.deletion_prob, "")
        ->capture_default_str();
    run_cmd->add_option("--max-text-clusters", run_options.evolution.max_text_clusters, "")
        ->capture_default_str();
    run_cmd->add_option("--max-image-clusters", run_options.evolution.max_image_clusters, "")
        ->capture_default_str();
    run_cmd->add_option("--max-generations", run_options.evolution.max_generations, "")
        ->capture_default_str();
    run_cmd->add_option("--alpha", run_options.postprocess.alpha,
                        "Lower image-similarity cutoff")
        ->capture_default_str();
    run_cmd->add_option("--beta", run_options.postprocess.beta,
                        "Upper image-similarity cutoff")
        ->capture_default_str();
    run_cmd->add_option("--video-weight", run_options.postprocess.video_weight,
                        "Visual share of the video score")
        ->capture_default_str();
    run_cmd
        ->add_flag("--include-transcript-sentences,!--no-transcript-sentences",
                   run_options.postprocess.include_transcript_sentences,
                   "Allow transcript sentences in summaries (default on)")
        ->default_str("true");

    CLI::App* baseline_cmd = app.add_subcommand("baseline", "Run a non-evolutionary baseline");
    baseline_cmd->add_option("--topic", baseline_options.topics,
                             "Topic manifest file or directory (repeatable)");
    baseline_cmd->add_option("--out", baseline_options.out_dir, "Output directory")
        ->capture_default_str();
    baseline_cmd->add_option("--workers", baseline_options.workers, "Threads across topics")
        ->capture_default_str();
    baseline_cmd
        ->add_option("--which", baseline_options.which,
                     "double_kmedoid, multimodal_kmedoid, or random_video")
        ->capture_default_str();
    baseline_cmd->add_option("--k-text", baseline_options.k_text, "Text clusters (double_kmedoid)")
        ->capture_default_str();
    baseline_cmd
        ->add_option("--k-image", baseline_options.k_image, "Image clusters (double_kmedoid)")
        ->capture_default_str();
    baseline_cmd->add_option("--k", baseline_options.k, "Clusters (multimodal_kmedoid)")
        ->capture_default_str();
    baseline_cmd->add_option("--attempts", baseline_options.attempts,
                             "Draws per topic (random_video)")
        ->capture_default_str();
    baseline_cmd->add_option("--seed", baseline_options.seed, "Base RNG seed")
        ->capture_default_str();
    baseline_cmd->add_option("--alpha", baseline_options.postprocess.alpha, "")
        ->capture_default_str();
    baseline_cmd->add_option("--beta", baseline_options.postprocess.beta, "")
        ->capture_default_str();
    baseline_cmd->add_option("--video-weight", baseline_options.postprocess.video_weight, "")
        ->capture_default_str();
    baseline_cmd
        ->add_flag("--include-transcript-sentences,!--no-transcript-sentences",
                   baseline_options.postprocess.include_transcript_sentences,
                   "Allow transcript sentences in summaries (default on)")
        ->default_str("true");

    CLI::App* eval_cmd = app.add_subcommand("eval", "Score bundles or free text against gold");
    eval_cmd->add_option("--topic", eval_options.topic, "Topic manifest file or directory");
    eval_cmd->add_option("--bundles", eval_options.bundle_files,
                         "Bundle JSON files (repeatable)");
    eval_cmd->add_option("--candidate-file", eval_options.candidate_file,
                         "Free-text candidate instead of bundles");
    eval_cmd->add_option("--out", eval_options.out_dir, "Output directory")->capture_default_str();

    CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a synthetic planted topic");
    synth_cmd->add_option("--seed", synth_options.spec.seed, "")->capture_default_str();
    synth_cmd->add_option("--n-clusters", synth_options.spec.n_clusters, "")
        ->capture_default_str();
    synth_cmd->add_option("--per-cluster-text", synth_options.spec.per_cluster_text, "")
        ->capture_default_str();
    synth_cmd->add_option("--per-cluster-img", synth_options.spec.per_cluster_img, "")
        ->capture_default_str();
    synth_cmd->add_option("--dim", synth_options.spec.dim, "")->capture_default_str();
    synth_cmd->add_option("--noise", synth_options.spec.noise, "Gaussian noise scale")
        ->capture_default_str();
    synth_cmd->add_option("--name", synth_options.spec.name, "Topic name (default derived)");
    synth_cmd->add_option("--out", synth_options.out_dir, "Output directory (default: topic name)");
    synth_cmd
        ->add_flag("--binary-embeddings", synth_options.binary_embeddings,
                   "Store embeddings as float32 sidecar files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ErrorKind::config);
    }

    try {
        run_options.evolution.objective_set = parse_objective_set(run_objective_set);
        if (gene_mutation_option->count() > 0) {
            run_options.evolution.gene_mutation_prob = run_gene_mutation_prob;
        }

        fs::path echo_dir;
        if (app.got_subcommand(run_cmd)) {
            echo_dir = run_options.out_dir;
        } else if (app.got_subcommand(baseline_cmd)) {
            echo_dir = baseline_options.out_dir;
        } else if (app.got_subcommand(eval_cmd)) {
            echo_dir = eval_options.out_dir;
        } else {
            echo_dir = !synth_options.out_dir.empty()   ? fs::path(synth_options.out_dir)
                       : !synth_options.spec.name.empty() ? fs::path(synth_options.spec.name)
                                                          : fs::path(default_synthetic_name(synth_options.spec));
        }
        fs::create_directories(echo_dir);
        write_text_file(echo_dir / "effective_config.toml", effective_config(app));

        if (app.got_subcommand(run_cmd)) {
            cmd_run(run_options);
        } else if (app.got_subcommand(baseline_cmd)) {
            cmd_baseline(baseline_options);
        } else if (app.got_subcommand(eval_cmd)) {
            cmd_eval(eval_options);
        } else {
            cmd_synth(synth_options);
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(ErrorKind::runtime);
    }
}

} // namespace mms
