// Copyright 2026 The superres Authors
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


#ifndef SUPERRES_TABULAR_HPP
#define SUPERRES_TABULAR_HPP

#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace superres {

/// Shortest text that reads back to the same double (%.17g); nan and inf spelled out.
std::string format_double(double x);

/// Column-named table of doubles written as CSV with '\n' line ends.
class Table {
   public:
    explicit Table(std::vector<std::string> columns);

    void add_row(std::vector<double> row);
    const std::vector<std::string>& columns() const noexcept { return columns_; }
    const std::vector<std::vector<double>>& rows() const noexcept { return rows_; }
    std::size_t column_index(const std::string& name) const;

    void write_csv(std::ostream& os) const;
    std::string to_csv() const;

   private:
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
};

/// index, index mod m, probability.
Table spectrum_table(const Eigen::VectorXd& spectrum, int m);

}  // namespace superres

#endif
