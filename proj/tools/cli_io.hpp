// Copyright 2026 The noon-forge Authors
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

#pragma once

// File output for the command-line tool. Data files hold data only; the run
// manifest (parameters, engine, seed, version, wall time) goes next to them as
// <file>.manifest.json so that reruns produce byte-identical data.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "noon/numerics.hpp"

namespace noon::cli {

using json = nlohmann::ordered_json;

/// Accepts plain numbers and multiples of pi: "0.3", "pi/2", "-pi/2", "3pi/4", "pi".
inline double parse_angle(std::string s) {
    std::erase(s, ' ');
    const auto p = s.find("pi");
    if (p == std::string::npos) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception &) {
            throw InvalidInput("bad angle '" + s + "'");
        }
        if (used != s.size()) throw InvalidInput("bad angle '" + s + "'");
        return v;
    }
    std::string head = s.substr(0, p);
    std::string tail = s.substr(p + 2);
    double factor = 1;
    if (head == "-") {
        factor = -1;
    } else if (!head.empty() && head != "+") {
        if (head.back() == '*') head.pop_back();
        factor = parse_angle(head);
    }
    double div = 1;
    if (!tail.empty()) {
        if (tail.front() != '/') throw InvalidInput("bad angle '" + s + "'");
        div = parse_angle(tail.substr(1));
        if (div == 0) throw InvalidInput("bad angle '" + s + "'");
    }
    return factor * num::rm::pi<double>() / div;
}

/// "p/q" as an exact rational, otherwise nullopt.
inline std::optional<num::ExactRational> parse_fraction(const std::string &s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return std::nullopt;
    try {
        num::ExactRational r(s, 10);
        r.canonicalize();
        return r;
    } catch (const std::exception &) {
        throw InvalidInput("bad fraction '" + s + "'");
    }
}

/// Writes through a temporary file in the same directory, then renames.
inline void write_atomic(const std::filesystem::path &path, const std::string &content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Minimal CSV table: header row plus numeric or string cells.
class CsvTable {
   public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add(std::vector<std::string> row) {
        if (row.size() != header_.size()) throw std::logic_error("csv row width mismatch");
        rows_.push_back(std::move(row));
    }

    std::string str() const {
        std::ostringstream os;
        auto line = [&](const std::vector<std::string> &r) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
            os << '\n';
        };
        line(header_);
        for (const auto &r : rows_) line(r);
        return os.str();
    }

    std::size_t size() const { return rows_.size(); }

   private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

struct RunManifest {
    std::string subcommand;
    json parameters = json::object();
    std::string engine;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> outputs;
    double wall_seconds = 0;

    json to_json() const {
        json j;
        j["tool"] = "noon-forge";
        j["version"] = NOON_FORGE_VERSION;
        j["subcommand"] = subcommand;
        j["parameters"] = parameters;
        if (!engine.empty()) j["engine"] = engine;
        if (seed) j["seed"] = *seed;
        j["outputs"] = outputs;
        j["wall_seconds"] = wall_seconds;
        return j;
    }
};

inline std::filesystem::path manifest_path(const std::filesystem::path &data) {
    auto p = data;
    p += ".manifest.json";
    return p;
}

/// Writes one data file and its adjacent manifest.
inline void emit(const std::filesystem::path &path, const std::string &content, RunManifest manifest,
                 std::chrono::steady_clock::time_point started) {
    write_atomic(path, content);
    manifest.outputs = {path.string()};
    manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    write_atomic(manifest_path(path), manifest.to_json().dump(2) + "\n");
}

/// Companion gnuplot script plotting column y against column x of a CSV.
inline std::string gnuplot_script(const std::string &csv, const std::string &x, const std::string &y,
                                  const std::string &title) {
    std::ostringstream os;
    os << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set title '" << title << "'\n"
       << "set xlabel '" << x << "'\n"
       << "set ylabel '" << y << "'\n"
       << "plot '" << csv << "' using '" << x << "':'" << y << "' with linespoints\n";
    return os.str();
}

inline bool ends_with(const std::string &s, const std::string &suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace noon::cli
