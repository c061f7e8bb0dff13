#pragma once

// Config-file and orbit-file parsing plus small formatting helpers shared by
// the command-line tool and the tests.
//
// Map config schema (one "key value..." pair per line, '#' starts a comment):
//   kind circle|toral|sft
//   k    <degree>            (circle only)
//   row  <entries...>        (toral: two rows of two; sft: square 0/1 rows)
//
// Orbit files hold one point per line: a single rational for circle maps,
// two whitespace-separated rationals for toral maps. Rationals are "a/b",
// plain integers, or finite decimals.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "zetadyn/matrix.hpp"

namespace zetadyn {

inline Rat parse_rat(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rat q(s, 10);
        q.canonicalize();
        return q;
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        std::size_t frac = s.size() - dot - 1;
        if (digits.empty() || digits == "-" || digits == "+")
            throw std::invalid_argument("bad decimal literal: " + s);
        Int num(digits, 10);
        Int den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
        Rat q(num, den);
        q.canonicalize();
        return q;
    }
    return Rat(Int(s, 10));
}

struct MapConfig {
    std::string kind;  // "circle" | "toral" | "sft"
    int k = 0;         // circle degree
    std::vector<std::vector<Int>> rows;

    IntMatrix matrix() const {
        const int n = static_cast<int>(rows.size());
        IntMatrix m(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m.at(i, j) = rows[i][j];
        return m;
    }
};

inline MapConfig parse_map_config(std::istream& in) {
    MapConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        if (key == "kind") {
            if (!(ls >> cfg.kind)) throw std::invalid_argument("line " + std::to_string(lineno) +
                                                               ": kind needs a value");
        } else if (key == "k") {
            if (!(ls >> cfg.k)) throw std::invalid_argument("line " + std::to_string(lineno) +
                                                            ": k needs an integer");
        } else if (key == "row") {
            std::vector<Int> row;
            std::string tok;
            while (ls >> tok) row.emplace_back(tok, 10);
            if (row.empty()) throw std::invalid_argument("line " + std::to_string(lineno) +
                                                         ": row needs entries");
            cfg.rows.push_back(std::move(row));
        } else {
            throw std::invalid_argument("line " + std::to_string(lineno) + ": unknown key '" +
                                        key + "'");
        }
    }
    if (cfg.kind == "circle") {
        if (cfg.k < 2) throw std::invalid_argument("circle config needs k >= 2");
        if (!cfg.rows.empty()) throw std::invalid_argument("circle config takes no rows");
    } else if (cfg.kind == "toral") {
        if (cfg.rows.size() != 2 || cfg.rows[0].size() != 2 || cfg.rows[1].size() != 2)
            throw std::invalid_argument("toral config needs exactly two rows of two entries");
    } else if (cfg.kind == "sft") {
        const std::size_t n = cfg.rows.size();
        if (n == 0) throw std::invalid_argument("sft config needs transition rows");
        for (const auto& row : cfg.rows) {
            if (row.size() != n)
                throw std::invalid_argument("sft transition matrix must be square");
            for (const Int& v : row)
                if (v != 0 && v != 1)
                    throw std::invalid_argument("sft transition entries must be 0 or 1");
        }
    } else {
        throw std::invalid_argument("kind must be circle, toral, or sft");
    }
    return cfg;
}

inline MapConfig load_map_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open map config: " + path);
    return parse_map_config(in);
}

// one point per line; width rationals per point (1 = circle, 2 = toral)
inline std::vector<std::vector<Rat>> load_orbit(const std::string& path, std::size_t width) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open orbit file: " + path);
    std::vector<std::vector<Rat>> pts;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        for (char& ch : line)
            if (ch == ',') ch = ' ';
        std::istringstream ls(line);
        std::vector<Rat> pt;
        std::string tok;
        while (ls >> tok) pt.push_back(parse_rat(tok));
        if (pt.empty()) continue;
        if (pt.size() != width)
            throw std::invalid_argument("orbit line " + std::to_string(lineno) + " has " +
                                        std::to_string(pt.size()) + " coordinates, expected " +
                                        std::to_string(width));
        pts.push_back(std::move(pt));
    }
    if (pts.size() < 2) throw std::invalid_argument("orbit file needs at least two points");
    return pts;
}

// fixed-format double for byte-identical output across runs
inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf);
}

inline std::string rat_str(const Rat& q) { return q.get_str(); }

}  // namespace zetadyn
