#include "coplan/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace coplan {

namespace {
constexpr double kMassTolerance = 1e-6;      // accepted deviation of input mass from 1
constexpr double kSupportEps = 1e-15;        // below this an atom carries no mass
constexpr double kTailSlack = 1e-12;         // slack in tail-probability comparisons
constexpr double kDeltaMatchTol = 1e-12;     // relative tolerance for matching atom spacing

void check_alpha(double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0) {
        throw std::invalid_argument("alpha must lie in (0, 1]");
    }
}

bool delta_matches(double a, double b) {
    return std::abs(a - b) <= kDeltaMatchTol * std::max(std::abs(a), std::abs(b));
}
}  // namespace

CategoricalDist::CategoricalDist(double v_min, double delta, std::vector<double> probs)
    : v_min_(v_min), delta_(delta), probs_(std::move(probs)) {
    if (!(delta_ > 0.0)) throw std::invalid_argument("atom spacing must be positive");
    if (probs_.empty()) throw std::invalid_argument("probability vector must be nonempty");
    double sum = 0.0;
    for (double p : probs_) {
        if (p < 0.0) throw std::invalid_argument("probability entries must be nonnegative");
        sum += p;
    }
    if (sum <= 0.0) throw std::invalid_argument("probability vector has zero total mass");
    if (std::abs(sum - 1.0) > kMassTolerance) {
        throw std::invalid_argument("probability mass deviates from 1 beyond tolerance");
    }
    for (double& p : probs_) p /= sum;
}

CategoricalDist CategoricalDist::point_mass(double value, double delta) {
    return CategoricalDist(value, delta, {1.0});
}

double CategoricalDist::expectation() const {
    double e = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) e += probs_[i] * atom(i);
    return e;
}

double CategoricalDist::var(double alpha) const {
    check_alpha(alpha);
    // Tail probabilities by descending suffix sum; the VaR is the smallest
    // support atom whose strict upper tail is within alpha.
    const std::size_t n = probs_.size();
    std::vector<double> tail(n + 1, 0.0);  // tail[i] = Pr(X > atom(i-1)) = sum of probs[i..]
    for (std::size_t i = n; i-- > 0;) tail[i] = tail[i + 1] + probs_[i];
    for (std::size_t i = 0; i < n; ++i) {
        if (probs_[i] <= kSupportEps) continue;
        if (tail[i + 1] <= alpha + kTailSlack) return atom(i);
    }
    return v_max();  // unreachable for valid distributions; top atom is always feasible
}

double CategoricalDist::cvar(double alpha) const {
    const double threshold = var(alpha);
    double mass = 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        if (atom(i) >= threshold - kTailSlack * delta_) {
            mass += probs_[i];
            acc += probs_[i] * atom(i);
        }
    }
    return acc / mass;
}

bool CategoricalDist::same_support(const CategoricalDist& o) const {
    return probs_.size() == o.probs_.size() && delta_matches(delta_, o.delta_) &&
           std::abs(v_min_ - o.v_min_) <= kDeltaMatchTol * std::max(1.0, std::abs(v_min_));
}

CategoricalDist shift_clamped(const CategoricalDist& d, std::size_t atoms) {
    const std::size_t n = d.size();
    std::vector<double> out(n, 0.0);
    const auto& p = d.probs();
    // Descending order makes the top-bin accumulation a left fold over
    // consecutive indices, so repeated shifts compose bit-exactly.
    for (std::size_t j = n; j-- > 0;) {
        out[std::min(j + atoms, n - 1)] += p[j];
    }
    return CategoricalDist(d.v_min(), d.delta(), std::move(out));
}

CategoricalDist convolve(const CategoricalDist& a, const CategoricalDist& b) {
    if (!delta_matches(a.delta(), b.delta())) {
        throw std::invalid_argument("convolve requires matching atom spacing");
    }
    const std::size_t n = a.size() + b.size() - 1;
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double pi = a.probs()[i];
        if (pi == 0.0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] += pi * b.probs()[j];
        }
    }
    return CategoricalDist(a.v_min() + b.v_min(), a.delta(), std::move(out));
}

CategoricalDist convolve_clamped(const CategoricalDist& a, const CategoricalDist& b, std::size_t n_out) {
    if (n_out == 0) throw std::invalid_argument("clamped convolution needs at least one atom");
    if (!delta_matches(a.delta(), b.delta())) {
        throw std::invalid_argument("convolve requires matching atom spacing");
    }
    std::vector<double> out(n_out, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double pi = a.probs()[i];
        if (pi == 0.0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[std::min(i + j, n_out - 1)] += pi * b.probs()[j];
        }
    }
    return CategoricalDist(a.v_min() + b.v_min(), a.delta(), std::move(out));
}

double kl_divergence(const CategoricalDist& p, const CategoricalDist& q) {
    if (!p.same_support(q)) throw std::invalid_argument("kl_divergence requires identical support");
    double kl = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double pi = p.probs()[i];
        if (pi <= kSupportEps) continue;
        const double qi = q.probs()[i];
        if (qi <= 0.0) return std::numeric_limits<double>::infinity();
        kl += pi * std::log(pi / qi);
    }
    return std::max(kl, 0.0);
}

double empirical_cvar(std::span<const double> samples, double alpha) {
    check_alpha(alpha);
    if (samples.empty()) throw std::invalid_argument("empirical_cvar needs samples");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const auto k = static_cast<std::size_t>(
        std::ceil(alpha * static_cast<double>(sorted.size()) - kTailSlack));
    const std::size_t count = std::max<std::size_t>(1, k);
    return std::accumulate(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(count), 0.0) /
           static_cast<double>(count);
}

}  // namespace coplan

namespace nlohmann {

coplan::CategoricalDist adl_serializer<coplan::CategoricalDist>::from_json(const json& j) {
    return coplan::CategoricalDist(j.at("v_min").get<double>(), j.at("delta").get<double>(),
                                   j.at("probs").get<std::vector<double>>());
}

void adl_serializer<coplan::CategoricalDist>::to_json(json& j, const coplan::CategoricalDist& d) {
    j = json{{"v_min", d.v_min()}, {"delta", d.delta()}, {"probs", d.probs()}};
}

}  // namespace nlohmann
