#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace enclosure {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;

// Bad input: configuration, preconditions, geometry.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Linear solver did not reach tolerance.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, std::vector<double> history)
        : std::runtime_error(what), history_(std::move(history)) {}
    const std::vector<double>& residual_history() const { return history_; }

private:
    std::vector<double> history_;
};

// Fixed-order pairwise summation; result does not depend on thread count.
template <class T, class Getter>
T pairwise_sum(std::size_t begin, std::size_t end, const Getter& get) {
    const std::size_t n = end - begin;
    if (n <= 16) {
        T acc{};
        for (std::size_t i = begin; i < end; ++i) acc += get(i);
        return acc;
    }
    const std::size_t mid = begin + n / 2;
    return pairwise_sum<T>(begin, mid, get) + pairwise_sum<T>(mid, end, get);
}

} // namespace enclosure
