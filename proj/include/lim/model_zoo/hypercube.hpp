#pragma once
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "lim/core/simplex.hpp"
#include "lim/core/space.hpp"
#include "lim/core/target.hpp"
#include "lim/samplers/weights.hpp"

namespace lim {

// {1..m}^d with a filament of d connected edges; coordinates are stored 0-based,
// so value 1 is stored as 0 and m as m-1.
struct HypercubeSpec {
    int m = 10;
    int d = 3;
    double p = 0.0;  // mass off the filament
};

void validate(const HypercubeSpec& s);

// x lies on the filament: a prefix of top values, one free coordinate, zeros after it.
bool on_filament(const Coords& x, int m);
std::size_t filament_size(int m, int d);
// Position of a filament state in the order V1, E1, V2, ..., V_{d+1}.
std::size_t filament_position(const Coords& x, int m);
Coords filament_state(std::size_t pos, int m, int d);
// Filament states of the full space, in filament order.
std::vector<std::size_t> filament_order(const DiscreteSpace& space, int m);

DiscreteTarget hypercube_target(const HypercubeSpec& s, std::size_t cap = 200000);

// Directions whose coordinate slice through x contains a state off the filament.
std::vector<bool> exit_directions(const Coords& x, int m);
SimplexWeights hypercube_weights_at(const HypercubeSpec& s, const Coords& x);
WeightFunction<std::size_t> hypercube_weights(const HypercubeSpec& s);

// Filament-restricted chain (p = 0) in filament order, built without enumerating
// the ambient space: RSGS when informed is false, Algorithm 1 with the
// filament weights otherwise.
Eigen::MatrixXd filament_chain(int d, int m, bool informed);

} // namespace lim
