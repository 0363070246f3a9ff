#include "lim/core/space.hpp"

#include <limits>

#include "lim/core/errors.hpp"

namespace lim {

DiscreteSpace::DiscreteSpace(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw InvalidArgument("space needs at least one coordinate");
    stride_.resize(dims_.size());
    std::size_t s = 1;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        if (dims_[i] < 1) throw InvalidArgument("coordinate cardinality must be >= 1");
        stride_[i] = s;
        if (s > std::numeric_limits<std::size_t>::max() / std::size_t(dims_[i]))
            throw SpaceTooLarge("state count overflows");
        s *= std::size_t(dims_[i]);
    }
    total_ = s;
}

std::size_t DiscreteSpace::encode(const Coords& x) const {
    if (x.size() != dims_.size()) throw DimensionMismatch("coordinate vector has wrong length");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < 0 || x[i] >= dims_[i]) throw InvalidArgument("coordinate out of range");
        idx += std::size_t(x[i]) * stride_[i];
    }
    return idx;
}

Coords DiscreteSpace::decode(std::size_t idx) const {
    if (idx >= total_) throw InvalidArgument("state index out of range");
    Coords x(dims_.size());
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        x[i] = int(idx % std::size_t(dims_[i]));
        idx /= std::size_t(dims_[i]);
    }
    return x;
}

int DiscreteSpace::coord(std::size_t idx, std::size_t i) const {
    return int((idx / stride_[i]) % std::size_t(dims_[i]));
}

std::size_t DiscreteSpace::with_coord(std::size_t idx, std::size_t i, int v) const {
    int old = coord(idx, i);
    return idx - std::size_t(old) * stride_[i] + std::size_t(v) * stride_[i];
}

} // namespace lim
