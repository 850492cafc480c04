// Copyright 2026 The gevlearn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GEVLEARN_CSV_HPP_
#define GEVLEARN_CSV_HPP_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace gevlearn {

// 12 significant digits, enough to re-verify 1e-8 tolerances from artifacts.
std::string format_number(double value);
// Same as format_number, but magnitudes below 1e-300 print as 0. Applied to
// probabilities at output time only.
std::string format_probability(double value);

// Writes one comma-separated row terminated by '\n'.
void write_csv_row(std::ostream& out, std::span<const std::string> cells);

// Column names prefix_1, ..., prefix_n.
std::vector<std::string> indexed_columns(const std::string& prefix, std::size_t n);

}  // namespace gevlearn

#endif  // GEVLEARN_CSV_HPP_
