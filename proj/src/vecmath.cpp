#include "mms/vecmath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mms/corpus.hpp"

namespace mms {

namespace {
constexpr double kNormFloor = 1e-12;
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("dot: dimension mismatch (" + std::to_string(a.size()) +
                                    " vs " + std::to_string(b.size()) + ")");
    }
    double s = 0.0;
    for (size_t i = 0; i < a.size(); i++) s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double cosine_sim(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("cosine_sim: dimension mismatch (" +
                                    std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + ")");
    }
    double aa = 0.0, bb = 0.0, ab = 0.0;
    for (size_t i = 0; i < a.size(); i++) {
        aa += a[i] * a[i];
        bb += b[i] * b[i];
        ab += a[i] * b[i];
    }
    const double na = std::sqrt(aa);
    const double nb = std::sqrt(bb);
    if (na < kNormFloor || nb < kNormFloor) {
        throw std::invalid_argument("cosine_sim: zero-norm vector");
    }
    // Rounding can push the quotient a hair outside [-1, 1]; clamp it back.
    const double c = ab / (na * nb);
    return c < -1.0 ? -1.0 : (c > 1.0 ? 1.0 : c);
}

double cosine_distance(std::span<const double> a, std::span<const double> b) {
    return 1.0 - cosine_sim(a, b);
}

Bounds compute_bounds(const Topic& topic) {
    Bounds b;
    b.lower.assign(topic.dim, std::numeric_limits<double>::infinity());
    b.upper.assign(topic.dim, -std::numeric_limits<double>::infinity());
    auto fold = [&](std::span<const double> row) {
        for (int d = 0; d < topic.dim; d++) {
            b.lower[d] = std::min(b.lower[d], row[d]);
            b.upper[d] = std::max(b.upper[d], row[d]);
        }
    };
    for (const auto& u : topic.text_units) fold(u.embedding);
    for (const auto& u : topic.image_units) fold(u.embedding);
    return b;
}

} // namespace mms
