// Copyright 2026 The covchan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace covchan {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define COVCHAN_DEFINE_ERROR(Name)              \
  class Name : public Error {                   \
   public:                                      \
    explicit Name(const std::string& what)      \
        : Error(std::string(#Name ": ") + what) {} \
  }

COVCHAN_DEFINE_ERROR(DimensionMismatch);
COVCHAN_DEFINE_ERROR(InvalidArgument);
COVCHAN_DEFINE_ERROR(NotDensityMatrix);
COVCHAN_DEFINE_ERROR(NotCP);
COVCHAN_DEFINE_ERROR(DegenerateSpectrum);
COVCHAN_DEFINE_ERROR(MaskNotPSD);
COVCHAN_DEFINE_ERROR(DiagonalNotUnit);
COVCHAN_DEFINE_ERROR(UnknownSector);
COVCHAN_DEFINE_ERROR(NotPeriodic);
COVCHAN_DEFINE_ERROR(SectorOutOfRange);
COVCHAN_DEFINE_ERROR(QuadratureUnderResolved);
COVCHAN_DEFINE_ERROR(ParseError);

#undef COVCHAN_DEFINE_ERROR

/// Raised when a channel is not time-covariant within the requested
/// tolerance. Carries the measured defect.
class NotCovariant : public Error {
 public:
  NotCovariant(double defect, double tol)
      : Error("NotCovariant: covariance defect " + std::to_string(defect) +
              " exceeds tolerance " + std::to_string(tol)),
        defect_(defect) {}
  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

/// Raised when the N time-translated outputs are not mutually orthogonal.
class NotReliableTiming : public Error {
 public:
  NotReliableTiming(double defect, double tol)
      : Error("NotReliableTiming: orthogonality defect " +
              std::to_string(defect) + " exceeds tolerance " +
              std::to_string(tol)),
        defect_(defect) {}
  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

}  // namespace covchan
