#ifndef MMS_GENOME_HPP
#define MMS_GENOME_HPP

#include <span>
#include <vector>

#include <json.hpp>

#include "mms/corpus.hpp"
#include "mms/vecmath.hpp"

namespace mms {

/// Variable-length genome: fixed-capacity arrays of real-valued text and
/// image cluster centers with an active-count prefix. Slots beyond the active
/// count are inert padding and never influence decoding or objectives.
class Solution {
public:
    Solution() = default;
    Solution(int dim, int max_text, int max_image, int active_text, int active_image);

    int dim() const { return dim_; }
    int capacity(Modality mod) const { return mod == Modality::text ? max_text_ : max_image_; }
    int active(Modality mod) const { return mod == Modality::text ? active_text_ : active_image_; }
    int active_text() const { return active_text_; }
    int active_image() const { return active_image_; }

    std::span<const double> center(Modality mod, int slot) const;
    std::span<double> center_mut(Modality mod, int slot);

    void set_active(Modality mod, int count);

    /// Appends one active center; no-op guard is the caller's job.
    void append_center(Modality mod, std::span<const double> values);

    /// Swap-removes the active center at `slot` and decrements the count.
    void remove_center(Modality mod, int slot);

    bool within_bounds(const Bounds& bounds) const;

    nlohmann::ordered_json to_json() const;
    static Solution from_json(const nlohmann::json& j, int max_text, int max_image);

    bool operator==(const Solution&) const = default;

private:
    std::vector<double>& store(Modality mod) { return mod == Modality::text ? text_ : image_; }
    const std::vector<double>& store(Modality mod) const {
        return mod == Modality::text ? text_ : image_;
    }

    int dim_ = 0;
    int max_text_ = 0;
    int max_image_ = 0;
    int active_text_ = 0;
    int active_image_ = 0;
    std::vector<double> text_;  // max_text_ * dim_, row-major
    std::vector<double> image_; // max_image_ * dim_, row-major
};

/// Nearest-active-center assignment per modality; ties go to the lowest
/// center slot. Empty clusters are legal.
struct DecodedSolution {
    std::vector<int> text_assignment;  // text unit index -> active text slot
    std::vector<int> image_assignment; // image unit index -> active image slot
};

DecodedSolution decode(const Solution& solution, const Topic& topic);

/// Per-modality assignment only.
std::vector<int> decode_modality(const Solution& solution, const Topic& topic, Modality mod);

struct NearestUnits {
    std::vector<int> sentence_ids; // deduplicated, ordered by center slot
    std::vector<int> image_ids;
};

/// The most-similar unit per active center, per modality.
NearestUnits nearest_units(const Solution& solution, const Topic& topic);

/// nearest_units restricted to a sentence candidate set (used when transcript
/// sentences are excluded from the output summary). An empty mask entry makes
/// that unit ineligible.
std::vector<int> nearest_sentences(const Solution& solution, const Topic& topic,
                                   const std::vector<bool>& candidate_mask);

} // namespace mms

#endif
