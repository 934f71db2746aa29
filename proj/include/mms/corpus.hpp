#ifndef MMS_CORPUS_HPP
#define MMS_CORPUS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace mms {

enum class Modality { text, image };

enum class TextSource { document, transcript };
enum class ImageSource { original, keyframe };

struct TextUnit {
    int id = 0;
    std::string text;
    TextSource source = TextSource::document;
    int video_id = -1; // valid when source == transcript
    std::vector<double> embedding;

    bool is_transcript() const { return source == TextSource::transcript; }
};

struct ImageUnit {
    int id = 0;
    ImageSource source = ImageSource::original;
    int video_id = -1;       // valid when source == keyframe
    double frame_time = 0.0; // seconds, keyframes only
    std::vector<double> embedding;

    bool is_keyframe() const { return source == ImageSource::keyframe; }
};

struct GoldSummary {
    std::vector<std::string> reference_texts;
    std::set<int> gold_image_ids;
    std::set<int> gold_video_ids;
};

/// A topic bundles every unit of one summarization task: sentences and images
/// with their joint-space embeddings, the video list, and (optionally) gold
/// references. Topics are immutable after load and safe for concurrent reads.
struct Topic {
    std::string name;
    int dim = 512;
    std::vector<TextUnit> text_units;
    std::vector<ImageUnit> image_units;
    std::vector<int> video_ids;
    std::optional<GoldSummary> gold;

    int n_text() const { return static_cast<int>(text_units.size()); }
    int n_image() const { return static_cast<int>(image_units.size()); }

    std::span<const double> text_embedding(int i) const { return text_units[i].embedding; }
    std::span<const double> image_embedding(int i) const { return image_units[i].embedding; }
    std::span<const double> embedding(Modality mod, int i) const {
        return mod == Modality::text ? text_embedding(i) : image_embedding(i);
    }
    int n_units(Modality mod) const { return mod == Modality::text ? n_text() : n_image(); }

    bool has_video(int id) const;

    /// Checks every topic invariant; throws a data error naming the offending
    /// record on the first violation.
    void validate() const;
};

/// Loads a topic from a manifest directory (containing topic.json and any
/// binary embedding files) or from a direct path to the manifest file.
Topic load_topic(const std::filesystem::path& path);

/// Writes a manifest directory that load_topic round-trips. With
/// binary_embeddings, embeddings go to row-major little-endian float32 files
/// instead of inline JSON arrays.
void write_topic(const Topic& topic, const std::filesystem::path& dir,
                 bool binary_embeddings = false);

struct SyntheticSpec {
    std::uint64_t seed = 0;
    int n_clusters = 3;
    int per_cluster_text = 5;
    int per_cluster_img = 3;
    int dim = 16;
    double noise = 0.05;
    std::string name; // defaults to a seed/shape-derived name
};

/// Builds a topic with planted cluster structure: n_clusters orthonormal
/// latent directions shared by both modalities, units scattered around them
/// with Gaussian noise, one video per cluster, and a gold summary holding one
/// exemplar per cluster. Deterministic for a fixed seed.
Topic generate_synthetic_topic(const SyntheticSpec& spec);

/// Name a synthetic topic gets when the spec leaves `name` blank.
std::string default_synthetic_name(const SyntheticSpec& spec);

} // namespace mms

#endif
