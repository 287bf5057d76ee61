#pragma once

// Core scalar/matrix aliases and the error hierarchy shared by the whole
// library.  Everything numeric is built on Eigen dense/sparse types; the
// dense aliases are templated on the scalar so kernels can be instantiated
// for real or complex arithmetic where that makes sense.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace eigsim {

inline constexpr std::string_view kVersion = "0.1.0";

using Index = Eigen::Index;
using cxd = std::complex<double>;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using CMatrix = DenseMatrix<cxd>;
using CVector = DenseVector<cxd>;
using RMatrix = DenseMatrix<double>;
using RVector = DenseVector<double>;

using SparseCMatrix = Eigen::SparseMatrix<cxd>;
using CTriplet = Eigen::Triplet<cxd>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// --- errors -----------------------------------------------------------------
//
// Every failure the library raises carries a short machine-readable kind next
// to the human-readable message; the CLI turns these into structured error
// records on stderr.

class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

struct DimensionError : Error {
    explicit DimensionError(const std::string& w) : Error("dimension", w) {}
};

struct PreconditionError : Error {
    explicit PreconditionError(const std::string& w) : Error("precondition", w) {}
};

struct SingularMatrixError : Error {
    explicit SingularMatrixError(const std::string& w) : Error("unconditioned", w) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& w) : Error("parse", w) {}
};

struct DimensionCapError : Error {
    explicit DimensionCapError(const std::string& w) : Error("dimension_cap", w) {}
};

struct NonUnitaryError : Error {
    explicit NonUnitaryError(const std::string& w) : Error("non_unitary", w) {}
};

struct IoError : Error {
    explicit IoError(const std::string& w) : Error("io", w) {}
};

}  // namespace eigsim
