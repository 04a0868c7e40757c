#pragma once

// Closed-form response functions driving the colony: pheromone-guided
// movement, item-count and similarity thresholds, and the pick/drop
// probabilities composed from them. Everything here is pure.

#include <span>
#include <vector>

#include "antids/habitat.hpp"

namespace antids {

struct KernelParams {
    double beta = 3.5;               // osmotropotaxic sensitivity
    double sensory = 0.2;            // 1/sensory is the sensory capacity
    double k1 = 0.1;                 // drop similarity scale
    double k2 = 0.3;                 // pick similarity scale
    double theta_items = 5.0;        // item-count threshold
    double steepness = 2.0;          // threshold exponent
    double eta = 0.07;               // base pheromone deposit
    double alpha = 400.0;            // deposit divisor for the neighbor count
    double evap = 0.015;             // evaporation rate per step
    double direction_falloff = 1.0;  // decay of the turn weight per 90 degrees

    // Throws ConfigError naming the first offending field.
    void validate() const;
};

struct MoveCandidate {
    GridCoord target;
    double pheromone = 0.0;
    int turn_degrees = 0;  // multiple of 45 in [-180, 180]
};

// (1 + s / (1 + sensory*s))^beta
double pheromone_weight(double sigma, const KernelParams& params);

// exp(-falloff * |turn| / 90); DomainError for non-lattice angles.
double direction_weight(int turn_degrees, const KernelParams& params);

// Writes the normalized move probabilities into `out` (same length as
// `candidates`); no allocation. Used by the engine's hot loop.
void transition_distribution(std::span<const MoveCandidate> candidates, const KernelParams& params,
                             std::span<double> out);
std::vector<double> transition_distribution(std::span<const MoveCandidate> candidates, const KernelParams& params);

// s^n / (s^n + theta^n)
double threshold_response(double s, double theta, double steepness);

// Threshold response to the neighbor item count.
double crowding(int n, const KernelParams& params);

// (1/d_max) * sqrt(mean squared feature difference)
double normalized_distance(std::span<const double> fa, std::span<const double> fb, double d_max = 1.0);

// (k1 / (k1 + d))^2
double drop_similarity(double d, const KernelParams& params);
// (d / (k2 + d))^2
double pick_similarity(double d, const KernelParams& params);

double pick_probability(int n, double d, const KernelParams& params);
double drop_probability(int n, double d, const KernelParams& params);

}  // namespace antids
