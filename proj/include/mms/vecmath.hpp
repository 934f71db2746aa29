#ifndef MMS_VECMATH_HPP
#define MMS_VECMATH_HPP

#include <span>
#include <vector>

namespace mms {

struct Topic;

/// Per-dimension lower/upper bounds of the joint embedding space.
/// The same bound pair constrains both text and image cluster centers.
struct Bounds {
    std::vector<double> lower;
    std::vector<double> upper;

    int dim() const { return static_cast<int>(lower.size()); }
};

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

/// Cosine similarity in [-1, 1]. Throws on dimension mismatch or a
/// (near-)zero-norm input; callers never receive a silent 0 for degenerate
/// vectors.
double cosine_sim(std::span<const double> a, std::span<const double> b);

/// 1 - cosine_sim, in [0, 2].
double cosine_distance(std::span<const double> a, std::span<const double> b);

/// Componentwise min/max over the union of the topic's text and image
/// embeddings.
Bounds compute_bounds(const Topic& topic);

} // namespace mms

#endif
