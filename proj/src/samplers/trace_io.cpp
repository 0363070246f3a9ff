#include "lim/samplers/trace_io.hpp"

#include <cstdio>

namespace lim {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

static void header(std::ostream& os, const char* kind, std::uint64_t seed, std::uint64_t stream) {
    os << "# trace v1 " << kind << " seed=" << seed << " stream=" << stream << "\n";
}

void write_trace_csv(std::ostream& os, const ChainTrace<std::size_t>& tr, const DiscreteSpace* space) {
    header(os, "discrete", tr.seed, tr.stream);
    os << "t";
    if (space)
        for (std::size_t i = 0; i < space->dim(); ++i) os << ",x" << i + 1;
    else
        os << ",state";
    os << ",kernel_index,accepted\n";
    for (std::size_t t = 0; t < tr.size(); ++t) {
        os << t;
        if (space) {
            // values printed 1-based like the examples' {1..m}
            for (int c : space->decode(tr.states[t])) os << ',' << c + 1;
        } else {
            os << ',' << tr.states[t];
        }
        os << ',' << tr.kernel_indices[t] << ',' << int(tr.accept_flags[t]) << '\n';
    }
}

void write_trace_csv(std::ostream& os, const ChainTrace<Eigen::VectorXd>& tr) {
    header(os, "continuous", tr.seed, tr.stream);
    os << "t";
    Eigen::Index d = tr.size() ? tr.states[0].size() : 0;
    for (Eigen::Index i = 0; i < d; ++i) os << ",x" << i + 1;
    os << ",kernel_index,accepted\n";
    for (std::size_t t = 0; t < tr.size(); ++t) {
        os << t;
        for (Eigen::Index i = 0; i < d; ++i) os << ',' << fmt_double(tr.states[t][i]);
        os << ',' << tr.kernel_indices[t] << ',' << int(tr.accept_flags[t]) << '\n';
    }
}

} // namespace lim
