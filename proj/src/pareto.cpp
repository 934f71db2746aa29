#include "mms/pareto.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mms {

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    if (a.set_id != b.set_id || a.values.size() != b.values.size()) {
        throw std::invalid_argument("dominates: objective sets do not match");
    }
    bool strictly = false;
    for (size_t m = 0; m < a.values.size(); m++) {
        if (a.values[m] < b.values[m]) return false;
        if (a.values[m] > b.values[m]) strictly = true;
    }
    return strictly;
}

std::vector<std::vector<int>> non_dominated_sort(const std::vector<ObjectiveVector>& vectors) {
    const int n = static_cast<int>(vectors.size());
    if (n == 0) throw std::invalid_argument("non_dominated_sort: empty input");

    std::vector<std::vector<int>> dominated_by(n); // i -> members i dominates
    std::vector<int> domination_count(n, 0);
    for (int i = 0; i < n; i++) {
        for (int j = i + 1; j < n; j++) {
            if (dominates(vectors[i], vectors[j])) {
                dominated_by[i].push_back(j);
                domination_count[j]++;
            } else if (dominates(vectors[j], vectors[i])) {
                dominated_by[j].push_back(i);
                domination_count[i]++;
            }
        }
    }

    std::vector<std::vector<int>> fronts;
    std::vector<int> current;
    for (int i = 0; i < n; i++) {
        if (domination_count[i] == 0) current.push_back(i);
    }
    while (!current.empty()) {
        std::vector<int> next;
        for (int i : current) {
            for (int j : dominated_by[i]) {
                if (--domination_count[j] == 0) next.push_back(j);
            }
        }
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

std::vector<double> crowding_distance(const std::vector<ObjectiveVector>& front) {
    const int n = static_cast<int>(front.size());
    if (n == 0) throw std::invalid_argument("crowding_distance: empty front");
    const int n_obj = static_cast<int>(front[0].values.size());

    std::vector<double> accumulated(n, 0.0);
    std::vector<bool> boundary(n, false);
    std::vector<int> order(n);
    for (int m = 0; m < n_obj; m++) {
        for (int i = 0; i < n; i++) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (front[a].values[m] != front[b].values[m]) {
                return front[a].values[m] < front[b].values[m];
            }
            return a < b;
        });
        boundary[order.front()] = true;
        boundary[order.back()] = true;
        const double range = front[order.back()].values[m] - front[order.front()].values[m];
        if (range <= 0.0) continue;
        for (int p = 1; p + 1 < n; p++) {
            accumulated[order[p]] +=
                (front[order[p + 1]].values[m] - front[order[p - 1]].values[m]) / range;
        }
    }

    std::vector<double> out(n);
    for (int i = 0; i < n; i++) out[i] = boundary[i] ? kCrowdingSentinel : accumulated[i];
    return out;
}

SelectionResult environmental_selection(const std::vector<ObjectiveVector>& pool,
                                        int target_size) {
    const int n = static_cast<int>(pool.size());
    if (target_size < 1 || target_size > n) {
        throw std::invalid_argument("environmental_selection: target " +
                                    std::to_string(target_size) + " with pool of " +
                                    std::to_string(n));
    }

    const auto fronts = non_dominated_sort(pool);
    SelectionResult result;
    result.rank.assign(n, 0);
    result.crowding.assign(n, 0.0);
    for (size_t f = 0; f < fronts.size(); f++) {
        std::vector<ObjectiveVector> members;
        members.reserve(fronts[f].size());
        for (int i : fronts[f]) {
            result.rank[i] = static_cast<int>(f);
            members.push_back(pool[i]);
        }
        const auto dist = crowding_distance(members);
        for (size_t p = 0; p < fronts[f].size(); p++) result.crowding[fronts[f][p]] = dist[p];
    }

    for (const auto& front : fronts) {
        const int remaining = target_size - static_cast<int>(result.selected.size());
        if (remaining == 0) break;
        if (static_cast<int>(front.size()) <= remaining) {
            result.selected.insert(result.selected.end(), front.begin(), front.end());
            continue;
        }
        // Cutoff front: keep the most isolated, ties to the lower index.
        std::vector<int> ordered = front;
        std::sort(ordered.begin(), ordered.end(), [&](int a, int b) {
            if (result.crowding[a] != result.crowding[b]) {
                return result.crowding[a] > result.crowding[b];
            }
            return a < b;
        });
        ordered.resize(remaining);
        result.selected.insert(result.selected.end(), ordered.begin(), ordered.end());
    }
    return result;
}

} // namespace mms
