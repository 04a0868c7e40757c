#include "antids/kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "antids/errors.hpp"

namespace antids {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string("kernel parameter ") + name + " must be positive");
}

void check_similarity_input(double d) {
    if (!(d >= 0.0 && d <= 1.0)) throw DomainError("feature distance must lie in [0,1], got " + std::to_string(d));
}

}  // namespace

void KernelParams::validate() const {
    require_positive(beta, "beta");
    require_positive(sensory, "sensory");
    require_positive(k1, "k1");
    require_positive(k2, "k2");
    require_positive(theta_items, "theta_items");
    require_positive(steepness, "steepness");
    require_positive(eta, "eta");
    require_positive(alpha, "alpha");
    require_positive(evap, "evap");
    require_positive(direction_falloff, "direction_falloff");
    if (evap >= 1.0) throw ConfigError("kernel parameter evap must be below 1");
    if (steepness <= 1.0) throw ConfigError("kernel parameter steepness must exceed 1");
}

double pheromone_weight(double sigma, const KernelParams& params) {
    if (!(sigma >= 0.0)) throw DomainError("pheromone level must be nonnegative");
    const double base = 1.0 + sigma / (1.0 + params.sensory * sigma);
    // Half-integer exponents (the default 3.5 included) avoid the cost of pow.
    const double twice = 2.0 * params.beta;
    if (twice == std::floor(twice) && twice <= 32.0) {
        const auto whole = static_cast<int>(params.beta);
        double r = 1.0;
        for (int i = 0; i < whole; ++i) r *= base;
        return twice - 2.0 * whole > 0.5 ? r * std::sqrt(base) : r;
    }
    return std::pow(base, params.beta);
}

double direction_weight(int turn_degrees, const KernelParams& params) {
    if (turn_degrees % 45 != 0 || turn_degrees < -180 || turn_degrees > 180) {
        throw DomainError("turn of " + std::to_string(turn_degrees) + " degrees is not a lattice direction");
    }
    return std::exp(-params.direction_falloff * std::abs(turn_degrees) / 90.0);
}

void transition_distribution(std::span<const MoveCandidate> candidates, const KernelParams& params,
                             std::span<double> out) {
    if (candidates.empty()) throw DomainError("transition distribution needs at least one candidate");
    if (out.size() != candidates.size()) throw DomainError("output span does not match candidate count");
    // Only five turn magnitudes exist; their weights are cached per falloff.
    thread_local double cached_falloff = -1.0;
    thread_local std::array<double, 5> turn_weight{};
    if (cached_falloff != params.direction_falloff) {
        for (int k = 0; k < 5; ++k) turn_weight[static_cast<std::size_t>(k)] = direction_weight(45 * k, params);
        cached_falloff = params.direction_falloff;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const int turn = candidates[i].turn_degrees;
        const double w = turn % 45 == 0 && std::abs(turn) <= 180 ? turn_weight[static_cast<std::size_t>(std::abs(turn) / 45)]
                                                                 : direction_weight(turn, params);
        out[i] = pheromone_weight(candidates[i].pheromone, params) * w;
        total += out[i];
    }
    for (double& p : out) p /= total;
}

std::vector<double> transition_distribution(std::span<const MoveCandidate> candidates, const KernelParams& params) {
    std::vector<double> out(candidates.size());
    transition_distribution(candidates, params, out);
    return out;
}

double threshold_response(double s, double theta, double steepness) {
    if (!(theta > 0.0)) throw DomainError("threshold must be positive");
    if (!(s >= 0.0)) throw DomainError("stimulus must be nonnegative");
    if (steepness == 2.0) return s * s / (s * s + theta * theta);
    const double sn = std::pow(s, steepness);
    return sn / (sn + std::pow(theta, steepness));
}

double crowding(int n, const KernelParams& params) {
    if (n < 0) throw DomainError("item count must be nonnegative");
    return threshold_response(static_cast<double>(n), params.theta_items, params.steepness);
}

double normalized_distance(std::span<const double> fa, std::span<const double> fb, double d_max) {
    if (fa.size() != fb.size()) {
        throw DomainError("feature vectors differ in length (" + std::to_string(fa.size()) + " vs " +
                          std::to_string(fb.size()) + ")");
    }
    if (fa.empty()) throw DomainError("feature vectors are empty");
    if (!(d_max > 0.0)) throw DomainError("d_max must be positive");
    double sum = 0.0;
    for (std::size_t i = 0; i < fa.size(); ++i) {
        const double diff = fa[i] - fb[i];
        sum += diff * diff;
    }
    return std::sqrt(sum / static_cast<double>(fa.size())) / d_max;
}

double drop_similarity(double d, const KernelParams& params) {
    check_similarity_input(d);
    const double r = params.k1 / (params.k1 + d);
    return r * r;
}

double pick_similarity(double d, const KernelParams& params) {
    check_similarity_input(d);
    const double r = d / (params.k2 + d);
    return r * r;
}

double pick_probability(int n, double d, const KernelParams& params) {
    return (1.0 - crowding(n, params)) * pick_similarity(d, params);
}

double drop_probability(int n, double d, const KernelParams& params) {
    return crowding(n, params) * drop_similarity(d, params);
}

}  // namespace antids
