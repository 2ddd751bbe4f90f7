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

#ifndef PMPIR_STATS_HPP_
#define PMPIR_STATS_HPP_

#include <cstdint>
#include <vector>

namespace pmpir::stats {

// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);

// Pearson chi-square statistic of `counts` against the uniform distribution.
double chi_square_statistic(const std::vector<std::uint64_t>& counts);

// Upper-tail p-value of a chi-square statistic with `dof` degrees of freedom.
double chi_square_pvalue(double statistic, std::size_t dof);

}  // namespace pmpir::stats

#endif  // PMPIR_STATS_HPP_
