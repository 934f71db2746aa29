#include "mms/genome.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "mms/error.hpp"

namespace mms {

namespace {

const char* modality_word(Modality mod) { return mod == Modality::text ? "text" : "image"; }

} // namespace

Solution::Solution(int dim, int max_text, int max_image, int active_text, int active_image)
    : dim_(dim), max_text_(max_text), max_image_(max_image), active_text_(active_text),
      active_image_(active_image) {
    if (dim < 1) throw std::invalid_argument("Solution: dim must be >= 1");
    if (max_text < 2 || max_image < 2) {
        throw std::invalid_argument("Solution: capacities must be >= 2");
    }
    if (active_text < 2 || active_text > max_text || active_image < 2 ||
        active_image > max_image) {
        throw std::invalid_argument("Solution: active counts outside [2, capacity]");
    }
    text_.assign(static_cast<size_t>(max_text) * dim, 0.0);
    image_.assign(static_cast<size_t>(max_image) * dim, 0.0);
}

std::span<const double> Solution::center(Modality mod, int slot) const {
    if (slot < 0 || slot >= active(mod)) {
        throw std::invalid_argument("Solution: " + std::string(modality_word(mod)) + " slot " +
                                    std::to_string(slot) + " not active");
    }
    return {store(mod).data() + static_cast<size_t>(slot) * dim_, static_cast<size_t>(dim_)};
}

std::span<double> Solution::center_mut(Modality mod, int slot) {
    if (slot < 0 || slot >= active(mod)) {
        throw std::invalid_argument("Solution: " + std::string(modality_word(mod)) + " slot " +
                                    std::to_string(slot) + " not active");
    }
    return {store(mod).data() + static_cast<size_t>(slot) * dim_, static_cast<size_t>(dim_)};
}

void Solution::set_active(Modality mod, int count) {
    if (count < 2 || count > capacity(mod)) {
        throw std::invalid_argument("Solution: active count " + std::to_string(count) +
                                    " outside [2, " + std::to_string(capacity(mod)) + "]");
    }
    (mod == Modality::text ? active_text_ : active_image_) = count;
}

void Solution::append_center(Modality mod, std::span<const double> values) {
    if (active(mod) >= capacity(mod)) {
        throw std::invalid_argument("Solution: append past capacity");
    }
    if (static_cast<int>(values.size()) != dim_) {
        throw std::invalid_argument("Solution: appended center has wrong dimension");
    }
    int& count = mod == Modality::text ? active_text_ : active_image_;
    std::copy(values.begin(), values.end(),
              store(mod).begin() + static_cast<size_t>(count) * dim_);
    count++;
}

void Solution::remove_center(Modality mod, int slot) {
    int& count = mod == Modality::text ? active_text_ : active_image_;
    if (count <= 2) throw std::invalid_argument("Solution: active floor is 2");
    if (slot < 0 || slot >= count) {
        throw std::invalid_argument("Solution: remove of inactive slot " + std::to_string(slot));
    }
    auto& data = store(mod);
    std::copy(data.begin() + static_cast<size_t>(count - 1) * dim_,
              data.begin() + static_cast<size_t>(count) * dim_,
              data.begin() + static_cast<size_t>(slot) * dim_);
    count--;
}

bool Solution::within_bounds(const Bounds& bounds) const {
    if (bounds.dim() != dim_) {
        throw std::invalid_argument("within_bounds: bounds dimension mismatch");
    }
    for (Modality mod : {Modality::text, Modality::image}) {
        for (int s = 0; s < active(mod); s++) {
            auto row = center(mod, s);
            for (int d = 0; d < dim_; d++) {
                if (row[d] < bounds.lower[d] || row[d] > bounds.upper[d]) return false;
            }
        }
    }
    return true;
}

nlohmann::ordered_json Solution::to_json() const {
    nlohmann::ordered_json j;
    j["dim"] = dim_;
    j["active_text"] = active_text_;
    j["active_image"] = active_image_;
    auto rows = [this](Modality mod) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (int s = 0; s < active(mod); s++) {
            auto row = center(mod, s);
            arr.push_back(std::vector<double>(row.begin(), row.end()));
        }
        return arr;
    };
    j["text_centers"] = rows(Modality::text);
    j["image_centers"] = rows(Modality::image);
    return j;
}

Solution Solution::from_json(const nlohmann::json& j, int max_text, int max_image) {
    try {
        const int dim = j.at("dim").get<int>();
        const int active_text = j.at("active_text").get<int>();
        const int active_image = j.at("active_image").get<int>();
        if (active_text > max_text || active_image > max_image) {
            throw data_error("solution record exceeds configured capacities");
        }
        Solution s(dim, max_text, max_image, active_text, active_image);
        auto fill = [&](Modality mod, const char* key, int count) {
            const auto& arr = j.at(key);
            if (static_cast<int>(arr.size()) != count) {
                throw data_error(std::string("solution record: ") + key + " holds " +
                                 std::to_string(arr.size()) + " rows, expected " +
                                 std::to_string(count));
            }
            for (int r = 0; r < count; r++) {
                const auto row = arr[r].get<std::vector<double>>();
                if (static_cast<int>(row.size()) != dim) {
                    throw data_error(std::string("solution record: ") + key + " row " +
                                     std::to_string(r) + " has wrong dimension");
                }
                std::copy(row.begin(), row.end(), s.center_mut(mod, r).begin());
            }
        };
        fill(Modality::text, "text_centers", active_text);
        fill(Modality::image, "image_centers", active_image);
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw data_error("solution record: " + std::string(e.what()));
    } catch (const std::invalid_argument& e) {
        throw data_error("solution record: " + std::string(e.what()));
    }
}

std::vector<int> decode_modality(const Solution& solution, const Topic& topic, Modality mod) {
    const int n = topic.n_units(mod);
    std::vector<int> assignment(n, 0);
    for (int i = 0; i < n; i++) {
        double best = -2.0;
        int best_slot = 0;
        for (int s = 0; s < solution.active(mod); s++) {
            const double sim = cosine_sim(topic.embedding(mod, i), solution.center(mod, s));
            if (sim > best) {
                best = sim;
                best_slot = s;
            }
        }
        assignment[i] = best_slot;
    }
    return assignment;
}

DecodedSolution decode(const Solution& solution, const Topic& topic) {
    return {decode_modality(solution, topic, Modality::text),
            decode_modality(solution, topic, Modality::image)};
}

namespace {

// Most similar unit per active center, deduplicated, in center order.
std::vector<int> nearest_per_center(const Solution& solution, const Topic& topic, Modality mod,
                                    const std::vector<bool>* candidate_mask) {
    std::vector<int> out;
    std::vector<bool> seen(topic.n_units(mod), false);
    for (int s = 0; s < solution.active(mod); s++) {
        int best_id = -1;
        double best = -2.0;
        for (int i = 0; i < topic.n_units(mod); i++) {
            if (candidate_mask != nullptr && !(*candidate_mask)[i]) continue;
            const double sim = cosine_sim(topic.embedding(mod, i), solution.center(mod, s));
            if (sim > best) {
                best = sim;
                best_id = i;
            }
        }
        if (best_id >= 0 && !seen[best_id]) {
            seen[best_id] = true;
            out.push_back(best_id);
        }
    }
    return out;
}

} // namespace

NearestUnits nearest_units(const Solution& solution, const Topic& topic) {
    return {nearest_per_center(solution, topic, Modality::text, nullptr),
            nearest_per_center(solution, topic, Modality::image, nullptr)};
}

std::vector<int> nearest_sentences(const Solution& solution, const Topic& topic,
                                   const std::vector<bool>& candidate_mask) {
    if (candidate_mask.size() != static_cast<size_t>(topic.n_text())) {
        throw std::invalid_argument("nearest_sentences: mask size mismatch");
    }
    return nearest_per_center(solution, topic, Modality::text, &candidate_mask);
}

} // namespace mms
