#ifndef MMS_CLI_HPP
#define MMS_CLI_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mms/corpus.hpp"
#include "mms/evolution.hpp"
#include "mms/postprocess.hpp"
#include "mms/rng.hpp"

namespace mms {

struct RunOptions {
    std::vector<std::string> topics; // manifest files or topic directories
    std::string out_dir = "out";
    int workers = 1;
    EvolutionParams evolution;
    PostprocessParams postprocess;
};

struct BaselineOptions {
    std::vector<std::string> topics;
    std::string out_dir = "out";
    int workers = 1;
    std::string which = "double_kmedoid"; // or multimodal_kmedoid, random_video
    int k_text = 4;
    int k_image = 4;
    int k = 4;         // multimodal variant
    int attempts = 10; // random_video draws per topic
    std::uint64_t seed = 0;
    PostprocessParams postprocess;
};

struct EvalOptions {
    std::string topic;
    std::vector<std::string> bundle_files;
    std::string candidate_file; // free-text alternative to bundles
    std::string out_dir = "out";
};

struct SynthOptions {
    SyntheticSpec spec;
    std::string out_dir;
    bool binary_embeddings = false;
};

// Command bodies throw Error; the entry point maps kinds to exit codes.
void cmd_run(const RunOptions& options);
void cmd_baseline(const BaselineOptions& options);
void cmd_eval(const EvalOptions& options);
void cmd_synth(const SynthOptions& options);

/// Selected units become the bundle directly: medoid sentences and medoid
/// original images, video picked by scoring against the selected embeddings.
SummaryBundle double_kmedoid_bundle(const Topic& topic, int k_text, int k_image,
                                    std::uint64_t seed,
                                    const PostprocessParams& params);
SummaryBundle multimodal_kmedoid_bundle(const Topic& topic, int k,
                                        std::uint64_t seed,
                                        const PostprocessParams& params);
/// One uniform draw over the topic's videos; text and images stay empty.
SummaryBundle random_video_bundle(const Topic& topic, Rng& rng);

/// Full argument parsing and dispatch; returns the process exit code.
int cli_main(int argc, const char* const* argv);

} // namespace mms

#endif
