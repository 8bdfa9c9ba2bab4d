#pragma once

#include "rpmcf/common.hpp"

#include <cstdint>
#include <random>

namespace rpmcf {

// Seeded stream. Substreams are derived by hashing (seed, index) so every
// Monte Carlo trial owns an independent generator regardless of scheduling.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    static Rng substream(std::uint64_t seed, std::uint64_t index);

    double uniform() { return unif_(eng_); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unif_(eng_); }
    double normal() { return norm_(eng_); }
    double normal(double mean, double sd) { return mean + sd * norm_(eng_); }
    // CN(0,1): real and imaginary parts each of variance 1/2.
    cd cnormal() { return {norm_(eng_) * kSqrtHalf, norm_(eng_) * kSqrtHalf}; }
    CVec cnormal_vec(Eigen::Index n);
    CMat cnormal_mat(Eigen::Index rows, Eigen::Index cols);
    std::uint64_t next_u64() { return eng_(); }
    std::mt19937_64& engine() { return eng_; }

private:
    static constexpr double kSqrtHalf = 0.70710678118654752440;
    std::mt19937_64 eng_;
    std::uniform_real_distribution<double> unif_{0.0, 1.0};
    std::normal_distribution<double> norm_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

// Square root S with S·S^H = R. Eigenvalues below zero are clipped.
CMat psd_sqrt(const CMat& r);
RMat psd_sqrt(const RMat& r);

// Draw x ~ CN(0, S·S^H) given a square root S.
CVec sample_cn(const CMat& sqrt_r, Rng& rng);

} // namespace rpmcf
