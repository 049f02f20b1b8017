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

#include "superres/cli/toml_lite.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "superres/errors.hpp"
#include "superres/tabular.hpp"

namespace superres::cli {

namespace {

class LineParser {
   public:
    LineParser(const std::string& line, int number) : s_(line), line_(number) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw InputError("config line " + std::to_string(line_) + ": " + what);
    }

    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) {
            ++pos_;
        }
    }

    bool at_end_or_comment() {
        skip_ws();
        return pos_ >= s_.size() || s_[pos_] == '#';
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::string bare_key() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                                    s_[pos_] == '-')) {
            ++pos_;
        }
        if (pos_ == start) {
            fail("expected a bare key");
        }
        return s_.substr(start, pos_ - start);
    }

    TomlValue value() {
        skip_ws();
        if (pos_ >= s_.size()) {
            fail("missing value");
        }
        if (s_[pos_] == '[') {
            ++pos_;
            TomlArray arr;
            if (consume(']')) {
                return arr;
            }
            while (true) {
                TomlValue v = value();
                if (std::holds_alternative<TomlArray>(v)) {
                    fail("nested arrays are not supported");
                }
                std::visit(
                    [&](auto&& x) {
                        if constexpr (!std::is_same_v<std::decay_t<decltype(x)>, TomlArray>) {
                            arr.emplace_back(x);
                        }
                    },
                    v);
                if (consume(',')) {
                    if (consume(']')) {
                        return arr;
                    }
                    continue;
                }
                if (consume(']')) {
                    return arr;
                }
                fail("expected ',' or ']' in array");
            }
        }
        if (s_[pos_] == '"') {
            return string_value();
        }
        const std::size_t start = pos_;
        while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != '#' && s_[pos_] != ' ' &&
               s_[pos_] != '\t') {
            ++pos_;
        }
        const std::string tok = s_.substr(start, pos_ - start);
        if (tok == "true") {
            return true;
        }
        if (tok == "false") {
            return false;
        }
        return number(tok);
    }

   private:
    std::string string_value() {
        ++pos_;
        std::string out;
        while (pos_ < s_.size() && s_[pos_] != '"') {
            char c = s_[pos_++];
            if (c == '\\') {
                if (pos_ >= s_.size()) {
                    fail("dangling escape");
                }
                const char e = s_[pos_++];
                switch (e) {
                    case 'n': c = '\n'; break;
                    case 't': c = '\t'; break;
                    case '"': c = '"'; break;
                    case '\\': c = '\\'; break;
                    default: fail(std::string("unsupported escape \\") + e);
                }
            }
            out.push_back(c);
        }
        if (pos_ >= s_.size()) {
            fail("unterminated string");
        }
        ++pos_;
        return out;
    }

    TomlValue number(std::string tok) {
        if (tok.empty()) {
            fail("missing value");
        }
        std::string clean;
        for (const char c : tok) {
            if (c != '_') {
                clean.push_back(c);
            }
        }
        if (clean == "inf" || clean == "+inf") {
            return HUGE_VAL;
        }
        if (clean == "-inf") {
            return -HUGE_VAL;
        }
        if (clean == "nan" || clean == "+nan" || clean == "-nan") {
            return std::nan("");
        }
        const bool is_float = clean.find_first_of(".eE") != std::string::npos;
        const char* first = clean.data() + (clean[0] == '+' ? 1 : 0);
        const char* last = clean.data() + clean.size();
        if (is_float) {
            double d = 0.0;
            const auto r = std::from_chars(first, last, d);
            if (r.ec != std::errc() || r.ptr != last) {
                fail("cannot parse '" + tok + "' as a number");
            }
            return d;
        }
        std::int64_t i = 0;
        const auto r = std::from_chars(first, last, i);
        if (r.ec != std::errc() || r.ptr != last) {
            fail("cannot parse '" + tok + "' as a value");
        }
        return i;
    }

    const std::string& s_;
    int line_;
    std::size_t pos_ = 0;
};

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out.push_back(c);
        }
    }
    return out + "\"";
}

std::string format_scalar(const TomlScalar& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, bool>) {
                return x ? "true" : "false";
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                return std::to_string(x);
            } else if constexpr (std::is_same_v<T, double>) {
                std::string s = format_double(x);
                if (s.find_first_of(".eEn") == std::string::npos) {
                    s += ".0";
                }
                return s;
            } else {
                return quote(x);
            }
        },
        v);
}

void write_table(std::ostringstream& os, const TomlTable& t) {
    for (const auto& [k, v] : t) {
        os << k << " = " << format_toml_value(v) << '\n';
    }
}

}  // namespace

TomlDoc parse_toml(const std::string& text) {
    TomlDoc doc;
    TomlTable* current = &doc.root;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        LineParser p(line, number);
        if (p.at_end_or_comment()) {
            continue;
        }
        if (p.consume('[')) {
            const std::string name = p.bare_key();
            if (!p.consume(']')) {
                p.fail("expected ']' after table name");
            }
            if (!p.at_end_or_comment()) {
                p.fail("trailing characters after table header");
            }
            if (doc.tables.count(name) != 0) {
                p.fail("table [" + name + "] defined twice");
            }
            current = &doc.tables[name];
            continue;
        }
        const std::string key = p.bare_key();
        if (!p.consume('=')) {
            p.fail("expected '=' after key '" + key + "'");
        }
        TomlValue v = p.value();
        if (!p.at_end_or_comment()) {
            p.fail("trailing characters after value of '" + key + "'");
        }
        if (!current->emplace(key, std::move(v)).second) {
            p.fail("duplicate key '" + key + "'");
        }
    }
    return doc;
}

std::string format_toml_value(const TomlValue& v) {
    if (const auto* arr = std::get_if<TomlArray>(&v)) {
        std::string out = "[";
        for (std::size_t i = 0; i < arr->size(); ++i) {
            out += (i ? ", " : "") + format_scalar((*arr)[i]);
        }
        return out + "]";
    }
    return std::visit(
        [](const auto& x) -> std::string {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, TomlArray>) {
                return {};
            } else {
                return format_scalar(TomlScalar(x));
            }
        },
        v);
}

std::string serialize_toml(const TomlDoc& doc) {
    std::ostringstream os;
    write_table(os, doc.root);
    for (const auto& [name, t] : doc.tables) {
        os << '\n' << '[' << name << "]\n";
        write_table(os, t);
    }
    return os.str();
}

std::string toml_type_name(const TomlValue& v) {
    static const char* names[] = {"boolean", "integer", "float", "string", "array"};
    return names[v.index()];
}

}  // namespace superres::cli
