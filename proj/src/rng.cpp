#include "rpmcf/rng.hpp"

#include <Eigen/Eigenvalues>

namespace rpmcf {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng Rng::substream(std::uint64_t seed, std::uint64_t index)
{
    return Rng(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

CVec Rng::cnormal_vec(Eigen::Index n)
{
    CVec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = cnormal();
    return v;
}

CMat Rng::cnormal_mat(Eigen::Index rows, Eigen::Index cols)
{
    CMat m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = cnormal();
    return m;
}

CMat psd_sqrt(const CMat& r)
{
    if (r.rows() != r.cols()) throw std::invalid_argument("psd_sqrt: matrix not square");
    if (r.size() == 0) return r;
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(r));
    if (es.info() != Eigen::Success) throw numeric_failure("psd_sqrt: eigendecomposition failed");
    RVec ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.asDiagonal();
}

RMat psd_sqrt(const RMat& r)
{
    if (r.rows() != r.cols()) throw std::invalid_argument("psd_sqrt: matrix not square");
    if (r.size() == 0) return r;
    Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (r + r.transpose()));
    if (es.info() != Eigen::Success) throw numeric_failure("psd_sqrt: eigendecomposition failed");
    RVec ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.asDiagonal();
}

CVec sample_cn(const CMat& sqrt_r, Rng& rng)
{
    return sqrt_r * rng.cnormal_vec(sqrt_r.cols());
}

} // namespace rpmcf
