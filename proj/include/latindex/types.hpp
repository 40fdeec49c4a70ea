#ifndef LATINDEX_TYPES_HPP
#define LATINDEX_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace latindex {

using cxd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using Eigen::VectorXi;
using SparseMat = Eigen::SparseMatrix<cxd>;

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct UnsupportedDimension : Error { using Error::Error; };
struct InvalidDescriptor : Error { using Error::Error; };
struct SpacingTooCoarse : Error { using Error::Error; };
struct RoughField : Error { using Error::Error; };
struct NonUnitaryGauge : Error { using Error::Error; };
struct OddDimension : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct NearZeroMode : Error { using Error::Error; };
struct EndpointKernel : Error { using Error::Error; };
struct MethodMismatch : Error { using Error::Error; };
struct SignUndefined : Error { using Error::Error; };
struct NonIntegerTrace : Error { using Error::Error; };
struct QuadratureTooCoarse : Error { using Error::Error; };
struct GapClosed : Error { using Error::Error; };
struct AmbiguousKernel : Error { using Error::Error; };
struct UnsupportedBackground : Error { using Error::Error; };
struct RoughBackground : Error { using Error::Error; };

}  // namespace latindex

#endif
