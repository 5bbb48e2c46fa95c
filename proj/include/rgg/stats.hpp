#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace rgg {

struct LinearFit {
    double slope = 0;
    double intercept = 0;
    double r2 = 0;
    std::size_t points = 0;
};

// Ordinary or weighted least squares of y on x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y,
                     std::span<const double> w = {});

struct Interval {
    double lo = 0;
    double hi = 0;
};

// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.96);

// Total variation distance between two pmfs over the same support.
double tv_distance(std::span<const double> p, std::span<const double> q);

double median(std::vector<double> values);

struct MeanSe {
    double mean = 0;
    double se = 0;
    std::size_t n = 0;
};
MeanSe mean_se(std::span<const double> values);

}  // namespace rgg
