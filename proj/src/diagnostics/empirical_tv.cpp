#include <cmath>
#include <string>

#include "lim/core/errors.hpp"
#include "lim/diagnostics/diagnostics.hpp"

namespace lim {

double empirical_tv(const std::vector<std::size_t>& samples, const std::vector<double>& pi) {
    if (samples.empty()) throw InvalidArgument("empirical TV needs at least one sample");
    std::vector<double> freq(pi.size(), 0.0);
    for (auto s : samples) {
        if (s >= pi.size()) throw InvalidArgument("sample state " + std::to_string(s) + " out of range");
        freq[s] += 1.0;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < pi.size(); ++i) acc += std::abs(freq[i] / double(samples.size()) - pi[i]);
    return 0.5 * acc;
}

} // namespace lim
