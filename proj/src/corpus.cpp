#include "mms/corpus.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mms/error.hpp"
#include "mms/rng.hpp"
#include "mms/vecmath.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

// Embedding sidecar files are row-major little-endian float32.
static_assert(std::endian::native == std::endian::little,
              "binary embedding files assume a little-endian host");

namespace mms {

namespace {

constexpr double kNormFloor = 1e-12;

std::string text_source_name(TextSource s) {
    return s == TextSource::document ? "document" : "transcript";
}

std::string image_source_name(ImageSource s) {
    return s == ImageSource::original ? "original" : "keyframe";
}

TextSource parse_text_source(const std::string& s, const std::string& where) {
    if (s == "document") return TextSource::document;
    if (s == "transcript") return TextSource::transcript;
    throw data_error(where + ": unknown text source '" + s + "'");
}

ImageSource parse_image_source(const std::string& s, const std::string& where) {
    if (s == "original") return ImageSource::original;
    if (s == "keyframe") return ImageSource::keyframe;
    throw data_error(where + ": unknown image source '" + s + "'");
}

std::vector<std::vector<double>> read_f32_rows(const fs::path& file, int rows, int dim) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw data_error("cannot open embedding file: " + file.string());
    in.seekg(0, std::ios::end);
    const auto size = static_cast<std::uint64_t>(in.tellg());
    const std::uint64_t expected =
        static_cast<std::uint64_t>(rows) * static_cast<std::uint64_t>(dim) * 4;
    if (size != expected) {
        throw data_error("embedding file " + file.string() + " holds " + std::to_string(size) +
                         " bytes, expected " + std::to_string(expected) + " (" +
                         std::to_string(rows) + " rows x " + std::to_string(dim) +
                         " float32)");
    }
    std::vector<float> buf(static_cast<size_t>(rows) * dim);
    in.seekg(0);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(expected));
    if (!in) throw data_error("short read on embedding file: " + file.string());

    std::vector<std::vector<double>> out(rows);
    for (int r = 0; r < rows; r++) {
        out[r].assign(buf.begin() + static_cast<size_t>(r) * dim,
                      buf.begin() + static_cast<size_t>(r + 1) * dim);
    }
    return out;
}

void write_f32_rows(const fs::path& file, const std::vector<std::vector<double>>& rows) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw runtime_failure("cannot write embedding file: " + file.string());
    std::vector<float> buf;
    for (const auto& row : rows) {
        buf.assign(row.begin(), row.end());
        out.write(reinterpret_cast<const char*>(buf.data()),
                  static_cast<std::streamsize>(buf.size() * sizeof(float)));
    }
    if (!out) throw runtime_failure("write failure on embedding file: " + file.string());
}

const json& require(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) throw data_error(where + ": missing field '" + key + "'");
    return *it;
}

// Optional binary sidecar reference: {"file": ..., "rows": ...}.
struct SidecarRef {
    fs::path file;
    int rows = 0;
};

std::optional<SidecarRef> sidecar_ref(const json& manifest, const char* key,
                                      const fs::path& base_dir) {
    auto it = manifest.find(key);
    if (it == manifest.end() || it->is_null()) return std::nullopt;
    SidecarRef ref;
    ref.file = base_dir / require(*it, "file", key).get<std::string>();
    ref.rows = require(*it, "rows", key).get<int>();
    return ref;
}

std::vector<double> unit_embedding(const json& unit, const std::string& where, int index,
                                   const std::vector<std::vector<double>>* sidecar_rows) {
    const bool inline_present = unit.contains("embedding") && !unit["embedding"].is_null();
    if (sidecar_rows != nullptr) {
        if (inline_present) {
            throw data_error(where + ": both inline and sidecar embeddings present");
        }
        if (index >= static_cast<int>(sidecar_rows->size())) {
            throw data_error(where + ": no sidecar row " + std::to_string(index));
        }
        return (*sidecar_rows)[index];
    }
    if (!inline_present) throw data_error(where + ": missing embedding");
    return unit["embedding"].get<std::vector<double>>();
}

} // namespace

std::string default_synthetic_name(const SyntheticSpec& s) {
    std::ostringstream os;
    os << "synth-s" << s.seed << "-c" << s.n_clusters << "-t" << s.per_cluster_text << "-i"
       << s.per_cluster_img << "-d" << s.dim;
    return os.str();
}

bool Topic::has_video(int id) const {
    return std::find(video_ids.begin(), video_ids.end(), id) != video_ids.end();
}

void Topic::validate() const {
    if (dim < 1) throw data_error("topic " + name + ": dim must be >= 1");
    // The minimum cluster count is 2, so each modality needs at least 2 units.
    if (n_text() < 2) throw data_error("topic " + name + ": fewer than 2 text units");
    if (n_image() < 2) throw data_error("topic " + name + ": fewer than 2 image units");

    for (size_t i = 0; i < video_ids.size(); i++) {
        for (size_t j = i + 1; j < video_ids.size(); j++) {
            if (video_ids[i] == video_ids[j]) {
                throw data_error("topic " + name + ": duplicate video id " +
                                 std::to_string(video_ids[i]));
            }
        }
    }

    for (int i = 0; i < n_text(); i++) {
        const auto& u = text_units[i];
        const std::string where = "text unit " + std::to_string(i);
        if (u.id != i) {
            throw data_error(where + ": id " + std::to_string(u.id) +
                             " does not match its position");
        }
        if (static_cast<int>(u.embedding.size()) != dim) {
            throw data_error(where + ": embedding size " + std::to_string(u.embedding.size()) +
                             ", expected " + std::to_string(dim));
        }
        for (double x : u.embedding) {
            if (!std::isfinite(x)) throw data_error(where + ": non-finite embedding");
        }
        if (norm(u.embedding) < kNormFloor) throw data_error(where + ": zero-norm embedding");
        if (u.is_transcript()) {
            if (!has_video(u.video_id)) {
                throw data_error(where + ": transcript of unknown video " +
                                 std::to_string(u.video_id));
            }
        } else if (u.video_id != -1) {
            throw data_error(where + ": document sentence carries a video id");
        }
    }

    for (int i = 0; i < n_image(); i++) {
        const auto& u = image_units[i];
        const std::string where = "image unit " + std::to_string(i);
        if (u.id != i) {
            throw data_error(where + ": id " + std::to_string(u.id) +
                             " does not match its position");
        }
        if (static_cast<int>(u.embedding.size()) != dim) {
            throw data_error(where + ": embedding size " + std::to_string(u.embedding.size()) +
                             ", expected " + std::to_string(dim));
        }
        for (double x : u.embedding) {
            if (!std::isfinite(x)) throw data_error(where + ": non-finite embedding");
        }
        if (norm(u.embedding) < kNormFloor) throw data_error(where + ": zero-norm embedding");
        if (u.is_keyframe()) {
            if (!has_video(u.video_id)) {
                throw data_error(where + ": keyframe of unknown video " +
                                 std::to_string(u.video_id));
            }
        } else if (u.video_id != -1) {
            throw data_error(where + ": original image carries a video id");
        }
    }

    if (gold) {
        for (int id : gold->gold_image_ids) {
            if (id < 0 || id >= n_image()) {
                throw data_error("topic " + name + ": gold image id " + std::to_string(id) +
                                 " not in image units");
            }
        }
        for (int id : gold->gold_video_ids) {
            if (!has_video(id)) {
                throw data_error("topic " + name + ": gold video id " + std::to_string(id) +
                                 " not in videos");
            }
        }
    }
}

Topic load_topic(const fs::path& path) {
    fs::path manifest_path = path;
    if (fs::is_directory(path)) manifest_path = path / "topic.json";
    if (!fs::exists(manifest_path)) {
        throw data_error("no topic manifest at " + manifest_path.string());
    }
    const fs::path base_dir = manifest_path.parent_path();

    json manifest;
    {
        std::ifstream in(manifest_path);
        if (!in) throw data_error("cannot open " + manifest_path.string());
        try {
            manifest = json::parse(in);
        } catch (const json::exception& e) {
            throw data_error("manifest parse failure in " + manifest_path.string() + ": " +
                             e.what());
        }
    }

    Topic topic;
    try {
        topic.name = require(manifest, "name", "manifest").get<std::string>();
        topic.dim = require(manifest, "dim", "manifest").get<int>();
        if (manifest.contains("videos")) {
            topic.video_ids = manifest["videos"].get<std::vector<int>>();
        }
    } catch (const json::exception& e) {
        throw data_error("manifest header: " + std::string(e.what()));
    }

    std::optional<std::vector<std::vector<double>>> text_rows, image_rows;
    if (auto ref = sidecar_ref(manifest, "text_embeddings", base_dir)) {
        text_rows = read_f32_rows(ref->file, ref->rows, topic.dim);
    }
    if (auto ref = sidecar_ref(manifest, "image_embeddings", base_dir)) {
        image_rows = read_f32_rows(ref->file, ref->rows, topic.dim);
    }

    const auto& jtext = require(manifest, "text_units", "manifest");
    for (size_t i = 0; i < jtext.size(); i++) {
        const std::string where = "text unit " + std::to_string(i);
        try {
            const json& ju = jtext[i];
            TextUnit u;
            u.id = require(ju, "id", where).get<int>();
            u.text = require(ju, "text", where).get<std::string>();
            u.source = parse_text_source(require(ju, "source", where).get<std::string>(), where);
            if (ju.contains("video_id") && !ju["video_id"].is_null()) {
                u.video_id = ju["video_id"].get<int>();
            }
            u.embedding = unit_embedding(ju, where, static_cast<int>(i),
                                         text_rows ? &*text_rows : nullptr);
            topic.text_units.push_back(std::move(u));
        } catch (const json::exception& e) {
            throw data_error(where + ": " + e.what());
        }
    }

    const auto& jimage = require(manifest, "image_units", "manifest");
    for (size_t i = 0; i < jimage.size(); i++) {
        const std::string where = "image unit " + std::to_string(i);
        try {
            const json& ju = jimage[i];
            ImageUnit u;
            u.id = require(ju, "id", where).get<int>();
            u.source = parse_image_source(require(ju, "source", where).get<std::string>(), where);
            if (ju.contains("video_id") && !ju["video_id"].is_null()) {
                u.video_id = ju["video_id"].get<int>();
            }
            if (ju.contains("frame_time") && !ju["frame_time"].is_null()) {
                u.frame_time = ju["frame_time"].get<double>();
            }
            u.embedding = unit_embedding(ju, where, static_cast<int>(i),
                                         image_rows ? &*image_rows : nullptr);
            topic.image_units.push_back(std::move(u));
        } catch (const json::exception& e) {
            throw data_error(where + ": " + e.what());
        }
    }

    if (text_rows && static_cast<int>(text_rows->size()) != topic.n_text()) {
        throw data_error("text sidecar holds " + std::to_string(text_rows->size()) +
                         " rows for " + std::to_string(topic.n_text()) + " units");
    }
    if (image_rows && static_cast<int>(image_rows->size()) != topic.n_image()) {
        throw data_error("image sidecar holds " + std::to_string(image_rows->size()) +
                         " rows for " + std::to_string(topic.n_image()) + " units");
    }

    if (manifest.contains("gold") && !manifest["gold"].is_null()) {
        try {
            const json& jg = manifest["gold"];
            GoldSummary gold;
            if (jg.contains("reference_texts")) {
                gold.reference_texts = jg["reference_texts"].get<std::vector<std::string>>();
            }
            if (jg.contains("image_ids")) {
                for (int id : jg["image_ids"].get<std::vector<int>>()) {
                    gold.gold_image_ids.insert(id);
                }
            }
            if (jg.contains("video_ids")) {
                for (int id : jg["video_ids"].get<std::vector<int>>()) {
                    gold.gold_video_ids.insert(id);
                }
            }
            topic.gold = std::move(gold);
        } catch (const json::exception& e) {
            throw data_error("gold summary: " + std::string(e.what()));
        }
    }

    topic.validate();
    return topic;
}

void write_topic(const Topic& topic, const fs::path& dir, bool binary_embeddings) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw runtime_failure("cannot create topic directory " + dir.string());

    ordered_json manifest;
    manifest["name"] = topic.name;
    manifest["dim"] = topic.dim;
    manifest["videos"] = topic.video_ids;

    if (binary_embeddings) {
        std::vector<std::vector<double>> rows;
        rows.reserve(topic.text_units.size());
        for (const auto& u : topic.text_units) rows.push_back(u.embedding);
        write_f32_rows(dir / "text_embeddings.f32", rows);
        manifest["text_embeddings"] = {{"file", "text_embeddings.f32"},
                                       {"rows", topic.n_text()}};
        rows.clear();
        for (const auto& u : topic.image_units) rows.push_back(u.embedding);
        write_f32_rows(dir / "image_embeddings.f32", rows);
        manifest["image_embeddings"] = {{"file", "image_embeddings.f32"},
                                        {"rows", topic.n_image()}};
    }

    manifest["text_units"] = ordered_json::array();
    for (const auto& u : topic.text_units) {
        ordered_json ju;
        ju["id"] = u.id;
        ju["text"] = u.text;
        ju["source"] = text_source_name(u.source);
        if (u.is_transcript()) ju["video_id"] = u.video_id;
        if (!binary_embeddings) ju["embedding"] = u.embedding;
        manifest["text_units"].push_back(std::move(ju));
    }
    manifest["image_units"] = ordered_json::array();
    for (const auto& u : topic.image_units) {
        ordered_json ju;
        ju["id"] = u.id;
        ju["source"] = image_source_name(u.source);
        if (u.is_keyframe()) {
            ju["video_id"] = u.video_id;
            ju["frame_time"] = u.frame_time;
        }
        if (!binary_embeddings) ju["embedding"] = u.embedding;
        manifest["image_units"].push_back(std::move(ju));
    }

    if (topic.gold) {
        ordered_json jg;
        jg["reference_texts"] = topic.gold->reference_texts;
        jg["image_ids"] =
            std::vector<int>(topic.gold->gold_image_ids.begin(), topic.gold->gold_image_ids.end());
        jg["video_ids"] =
            std::vector<int>(topic.gold->gold_video_ids.begin(), topic.gold->gold_video_ids.end());
        manifest["gold"] = std::move(jg);
    }

    std::ofstream out(dir / "topic.json", std::ios::trunc);
    if (!out) throw runtime_failure("cannot write " + (dir / "topic.json").string());
    out << manifest.dump(2) << "\n";
    if (!out) throw runtime_failure("write failure on " + (dir / "topic.json").string());
}

Topic generate_synthetic_topic(const SyntheticSpec& spec) {
    if (spec.n_clusters < 2) throw config_error("synthetic: n_clusters must be >= 2");
    if (spec.per_cluster_text < 1) throw config_error("synthetic: per_cluster_text must be >= 1");
    if (spec.per_cluster_img < 1) throw config_error("synthetic: per_cluster_img must be >= 1");
    if (spec.dim < 1) throw config_error("synthetic: dim must be >= 1");
    if (spec.noise < 0.0) throw config_error("synthetic: noise must be >= 0");
    if (spec.n_clusters > spec.dim) {
        throw config_error("synthetic: n_clusters (" + std::to_string(spec.n_clusters) +
                           ") cannot exceed dim (" + std::to_string(spec.dim) +
                           "), the latent directions are orthonormal");
    }

    Rng rng = make_rng(mix_seed(spec.seed, seed_tag::synthetic));
    std::normal_distribution<double> gauss(0.0, 1.0);

    // Orthonormal latent directions via Gram-Schmidt on Gaussian draws.
    std::vector<std::vector<double>> latent;
    latent.reserve(spec.n_clusters);
    for (int k = 0; k < spec.n_clusters; k++) {
        for (int attempt = 0;; attempt++) {
            if (attempt >= 100) {
                throw runtime_failure("synthetic: failed to orthonormalize latent directions");
            }
            std::vector<double> v(spec.dim);
            for (double& x : v) x = gauss(rng);
            for (const auto& u : latent) {
                const double proj = dot(v, u);
                for (int d = 0; d < spec.dim; d++) v[d] -= proj * u[d];
            }
            const double len = norm(v);
            if (len < 1e-8) continue;
            for (double& x : v) x /= len;
            latent.push_back(std::move(v));
            break;
        }
    }

    auto noisy = [&](int k) {
        std::vector<double> v = latent[k];
        if (spec.noise > 0.0) {
            for (double& x : v) x += spec.noise * gauss(rng);
        }
        return v;
    };
    auto theme = [](int k) {
        return "topic" + std::to_string(k) + " aspect" + std::to_string(k) + " detail" +
               std::to_string(k);
    };

    Topic topic;
    topic.name = spec.name.empty() ? default_synthetic_name(spec) : spec.name;
    topic.dim = spec.dim;
    for (int k = 0; k < spec.n_clusters; k++) topic.video_ids.push_back(k);

    for (int k = 0; k < spec.n_clusters; k++) {
        for (int j = 0; j < spec.per_cluster_text; j++) {
            TextUnit u;
            u.id = k * spec.per_cluster_text + j;
            u.text = theme(k) + " item" + std::to_string(k) + "x" + std::to_string(j);
            // The last sentence of each cluster doubles as that video's
            // transcript once the cluster has more than one sentence.
            if (spec.per_cluster_text >= 2 && j == spec.per_cluster_text - 1) {
                u.source = TextSource::transcript;
                u.video_id = k;
            }
            u.embedding = noisy(k);
            topic.text_units.push_back(std::move(u));
        }
    }

    for (int k = 0; k < spec.n_clusters; k++) {
        for (int j = 0; j < spec.per_cluster_img; j++) {
            ImageUnit u;
            u.id = k * spec.per_cluster_img + j;
            if (spec.per_cluster_img >= 2 && j == spec.per_cluster_img - 1) {
                u.source = ImageSource::keyframe;
                u.video_id = k;
                u.frame_time = static_cast<double>(j);
            }
            u.embedding = noisy(k);
            topic.image_units.push_back(std::move(u));
        }
    }

    GoldSummary gold;
    std::string asc, desc;
    for (int k = 0; k < spec.n_clusters; k++) {
        const std::string& exemplar = topic.text_units[k * spec.per_cluster_text].text;
        asc += (k > 0 ? " " : "") + exemplar;
        const std::string& exemplar_back =
            topic.text_units[(spec.n_clusters - 1 - k) * spec.per_cluster_text].text;
        desc += (k > 0 ? " " : "") + exemplar_back;
    }
    std::string themes;
    for (int k = 0; k < spec.n_clusters; k++) themes += (k > 0 ? " " : "") + theme(k);
    gold.reference_texts = {asc, desc, themes};
    for (int k = 0; k < spec.n_clusters; k++) gold.gold_image_ids.insert(k * spec.per_cluster_img);
    gold.gold_video_ids = {0};
    topic.gold = std::move(gold);

    topic.validate();
    return topic;
}

} // namespace mms
