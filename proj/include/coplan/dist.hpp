#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <json.hpp>

namespace coplan {

/// Bounded-support discrete random variable: probability mass over N
/// equispaced atoms v_min + i*delta, i = 0..N-1.
///
/// Instances are immutable values; every operation returns a new
/// distribution. Probability vectors are renormalized on construction
/// (inputs summing to 1 within 1e-6 are accepted) and after every
/// convolution to absorb floating-point drift.
class CategoricalDist {
public:
    CategoricalDist(double v_min, double delta, std::vector<double> probs);

    /// Degenerate distribution: all mass on a single atom.
    static CategoricalDist point_mass(double value, double delta = 1.0);

    double v_min() const { return v_min_; }
    double delta() const { return delta_; }
    std::size_t size() const { return probs_.size(); }
    double atom(std::size_t i) const { return v_min_ + static_cast<double>(i) * delta_; }
    double v_max() const { return atom(probs_.size() - 1); }
    const std::vector<double>& probs() const { return probs_; }

    double expectation() const;

    /// Smallest support atom k with Pr(X > k) <= alpha, alpha in (0, 1].
    double var(double alpha) const;

    /// E[X | X >= VaR_alpha(X)]; equals expectation() when alpha = 1.
    double cvar(double alpha) const;

    bool same_support(const CategoricalDist& o) const;

private:
    double v_min_;
    double delta_;
    std::vector<double> probs_;
};

/// Moves the mass at atom j to atom min(j + atoms, N-1); overflow pools in
/// the top bin. Support is unchanged. Composes exactly:
/// shift_clamped(shift_clamped(d, a), b) == shift_clamped(d, a + b).
CategoricalDist shift_clamped(const CategoricalDist& d, std::size_t atoms);

/// Distribution of the sum of independent draws; support grows to
/// N1 + N2 - 1 atoms. Requires matching delta.
CategoricalDist convolve(const CategoricalDist& a, const CategoricalDist& b);

/// Convolution re-clamped to exactly n_out atoms; excess upper-tail mass
/// pools in the top bin, consistent with shift_clamped.
CategoricalDist convolve_clamped(const CategoricalDist& a, const CategoricalDist& b, std::size_t n_out);

/// Sum_i p_i ln(p_i / q_i) with 0 * ln(0/q) = 0; +infinity when some
/// q_i = 0 < p_i. Requires identical support.
double kl_divergence(const CategoricalDist& p, const CategoricalDist& q);

/// Mean of the worst ceil(alpha * n) samples; the sample analog of cvar()
/// used when aggregating realized trajectory costs.
double empirical_cvar(std::span<const double> samples, double alpha);

}  // namespace coplan

namespace nlohmann {
// Serialized as {"v_min":..., "delta":..., "probs":[...]}.
template <>
struct adl_serializer<coplan::CategoricalDist> {
    static coplan::CategoricalDist from_json(const json& j);
    static void to_json(json& j, const coplan::CategoricalDist& d);
};
}  // namespace nlohmann
