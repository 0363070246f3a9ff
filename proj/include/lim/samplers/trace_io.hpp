#pragma once
#include <cstddef>
#include <ostream>
#include <string>

#include <Eigen/Core>

#include "lim/core/space.hpp"
#include "lim/samplers/steps.hpp"

namespace lim {

// Shortest decimal form that round-trips: 17 significant digits.
std::string fmt_double(double v);

// Columns: t, state index (or coordinates when a space is given), kernel_index, accepted.
void write_trace_csv(std::ostream& os, const ChainTrace<std::size_t>& tr, const DiscreteSpace* space = nullptr);
void write_trace_csv(std::ostream& os, const ChainTrace<Eigen::VectorXd>& tr);

} // namespace lim
