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

#include "superres/tabular.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "superres/errors.hpp"

namespace superres {

std::string format_double(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {
    if (columns_.empty()) {
        throw InputError("table: at least one column is required");
    }
}

void Table::add_row(std::vector<double> row) {
    if (row.size() != columns_.size()) {
        throw InputError("table: row width does not match the header");
    }
    rows_.push_back(std::move(row));
}

std::size_t Table::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i] == name) {
            return i;
        }
    }
    throw InputError("table: no column named '" + name + "'");
}

void Table::write_csv(std::ostream& os) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        os << (i ? "," : "") << columns_[i];
    }
    os << '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "") << format_double(row[i]);
        }
        os << '\n';
    }
}

std::string Table::to_csv() const {
    std::ostringstream os;
    write_csv(os);
    return os.str();
}

Table spectrum_table(const Eigen::VectorXd& spectrum, int m) {
    if (m < 1) {
        throw InputError("spectrum table: m must be positive");
    }
    Table t({"index", "index_mod_m", "probability"});
    for (Eigen::Index k = 0; k < spectrum.size(); ++k) {
        t.add_row({static_cast<double>(k), static_cast<double>(k % m), spectrum(k)});
    }
    return t;
}

}  // namespace superres
