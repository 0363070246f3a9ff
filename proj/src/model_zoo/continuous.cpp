#include "lim/model_zoo/continuous.hpp"

#include <cmath>
#include <limits>

#include <boost/math/constants/constants.hpp>

namespace lim {

Kernel<Vec> gaussian_rw_kernel(std::string name, Eigen::Index coord, double sigma,
                               std::function<double(const Vec&)> log_target) {
    Kernel<Vec> k;
    k.tag = KernelTag::MetropolisHastings;
    k.name = std::move(name);
    k.mh.log_target = std::move(log_target);
    k.mh.propose = [coord, sigma](const Vec& x, RngStream& rng) {
        Vec y = x;
        y(coord) += sigma * rng.normal();
        return y;
    };
    k.mh.log_q = [coord, sigma](const Vec& a, const Vec& b) {
        for (Eigen::Index i = 0; i < a.size(); ++i)
            if (i != coord && a(i) != b(i)) return -std::numeric_limits<double>::infinity();
        double z = (b(coord) - a(coord)) / sigma;
        return -0.5 * z * z - std::log(sigma) - 0.5 * std::log(2.0 * boost::math::constants::pi<double>());
    };
    return k;
}

} // namespace lim
