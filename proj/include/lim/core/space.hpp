#pragma once
#include <cstddef>
#include <vector>

namespace lim {

using Coords = std::vector<int>;

// Finite product space {0..dims[0]-1} x ... with a mixed-radix codec;
// coordinate 0 is the least significant digit.
class DiscreteSpace {
  public:
    DiscreteSpace() = default;
    explicit DiscreteSpace(std::vector<int> dims);

    std::size_t dim() const { return dims_.size(); }
    int card(std::size_t i) const { return dims_[i]; }
    const std::vector<int>& dims() const { return dims_; }
    std::size_t total_states() const { return total_; }
    std::size_t stride(std::size_t i) const { return stride_[i]; }

    std::size_t encode(const Coords& x) const;
    Coords decode(std::size_t idx) const;
    int coord(std::size_t idx, std::size_t i) const;
    // idx with coordinate i replaced by v
    std::size_t with_coord(std::size_t idx, std::size_t i, int v) const;

  private:
    std::vector<int> dims_;
    std::vector<std::size_t> stride_;
    std::size_t total_ = 0;
};

} // namespace lim
