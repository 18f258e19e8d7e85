#pragma once

#include <stdexcept>
#include <string>

namespace degstein {

inline constexpr double kDefaultCap = 10.0;

/// Model parameters for the degree-count problem: graph size n, target
/// degree d, connectivity parameter theta with edge probability
/// p = theta/(n-1), and the cap b of the admissible parameter range
/// (0, n-1) intersected with (0, b].
struct ModelParams {
    int n = 0;
    int d = 1;
    double theta = 1.0;
    double b = kDefaultCap;

    double p() const { return theta / (n - 1); }

    void validate() const {
        if (d < 1) throw std::invalid_argument("d must be a positive integer");
        if (n < d + 1)
            throw std::invalid_argument("n must be at least d+1 (got n=" + std::to_string(n) +
                                        ", d=" + std::to_string(d) + ")");
        if (!(b > 0.0)) throw std::invalid_argument("cap b must be positive");
        if (!(theta > 0.0))
            throw std::invalid_argument("theta outside parameter range: requires theta > 0");
        if (!(theta < n - 1))
            throw std::invalid_argument("theta outside parameter range: requires theta < n-1 = " +
                                        std::to_string(n - 1));
        if (!(theta <= b))
            throw std::invalid_argument("theta outside parameter range: requires theta <= b = " +
                                        std::to_string(b));
    }

    static ModelParams checked(int n, int d, double theta, double b = kDefaultCap) {
        ModelParams params{n, d, theta, b};
        params.validate();
        return params;
    }
};

}  // namespace degstein
