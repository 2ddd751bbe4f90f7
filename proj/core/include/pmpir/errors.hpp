// Copyright 2026 The pmpir Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PMPIR_ERRORS_HPP_
#define PMPIR_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace pmpir {

enum class Errc {
  composite_modulus,
  division_by_zero,
  duplicate_points,
  singular_matrix,
  dim_too_large,
  length_mismatch,
  size_mismatch,
  not_information_set,
  invalid_geometry,
  field_too_small,
  invariant_violation,
  not_enough_shares,
  bad_subset,
  not_enough_helpers,
  helper_overlap,
  bad_file_index,
  constraint_violated,
  missing_responses,
  decode_failure,
  no_nested_sets,
  plan_infeasible,
  corrupt_store,
  header_mismatch,
  malformed_frame,
};

const char* errc_name(Errc code);

// Single exception type carrying a typed code; callers that need to branch
// (e.g. the MSR planner probing information sets) use boolean-returning
// queries instead of catching.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

inline const char* errc_name(Errc code) {
  switch (code) {
    case Errc::composite_modulus: return "CompositeModulus";
    case Errc::division_by_zero: return "DivisionByZero";
    case Errc::duplicate_points: return "DuplicatePoints";
    case Errc::singular_matrix: return "SingularMatrix";
    case Errc::dim_too_large: return "DimTooLarge";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::size_mismatch: return "SizeMismatch";
    case Errc::not_information_set: return "NotInformationSet";
    case Errc::invalid_geometry: return "InvalidGeometry";
    case Errc::field_too_small: return "FieldTooSmall";
    case Errc::invariant_violation: return "InvariantViolation";
    case Errc::not_enough_shares: return "NotEnoughShares";
    case Errc::bad_subset: return "BadSubset";
    case Errc::not_enough_helpers: return "NotEnoughHelpers";
    case Errc::helper_overlap: return "HelperOverlap";
    case Errc::bad_file_index: return "BadFileIndex";
    case Errc::constraint_violated: return "ConstraintViolated";
    case Errc::missing_responses: return "MissingResponses";
    case Errc::decode_failure: return "DecodeFailure";
    case Errc::no_nested_sets: return "NoNestedSets";
    case Errc::plan_infeasible: return "PlanInfeasible";
    case Errc::corrupt_store: return "CorruptStore";
    case Errc::header_mismatch: return "HeaderMismatch";
    case Errc::malformed_frame: return "MalformedFrame";
  }
  return "UnknownError";
}

}  // namespace pmpir

#endif  // PMPIR_ERRORS_HPP_
