#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lepage/parser.hpp"
#include "lepage/variational.hpp"

namespace lepage {

// Flat key-value description of one ODE system:
//
//   dim = 2
//   coords = x, y
//   eps = "x'' + y'", "y'' - x'"
//   chart.shear = "x, y + x^3" | "x, y - x^3"
//
// '#' starts a comment; keys may appear in any order; exactly one system per
// file. Optional keys: degree (rational override), seed, trials, tol.
struct SystemFile {
    int dim = 0;
    std::vector<std::string> coords;
    std::vector<std::string> eps_strings;
    // chart name -> (forward component strings, inverse component strings)
    std::map<std::string, std::pair<std::vector<std::string>, std::vector<std::string>>> charts;
    std::optional<Rational> degree;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<double> tol;

    JetSpace space() const { return JetSpace(coords, 3); }

    SourceForm source_form() const {
        JetSpace sp = space();
        std::vector<Expr> eps;
        for (const auto& s : eps_strings) eps.push_back(parse(s, sp));
        return SourceForm(sp, std::move(eps));
    }

    PointTransform chart(const std::string& name) const {
        auto it = charts.find(name);
        if (it == charts.end()) throw ValidationError("no chart named '" + name + "'");
        JetSpace sp = space();
        PointTransform t{sp, {}, {}};
        for (const auto& s : it->second.first) t.forward.push_back(parse(s, sp));
        for (const auto& s : it->second.second) t.inverse.push_back(parse(s, sp));
        t.validate();
        return t;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// split on commas that are outside double quotes
inline std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (char ch : s) {
        if (ch == '"') quoted = !quoted;
        if (ch == ',' && !quoted) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
    return out;
}

inline std::string unquote(const std::string& s, int line_no) {
    std::string t = trim(s);
    if (t.size() >= 2 && t.front() == '"' && t.back() == '"')
        return t.substr(1, t.size() - 2);
    throw ValidationError("line " + std::to_string(line_no) +
                          ": expected a double-quoted expression, got '" + t + "'");
}

}  // namespace detail

inline SystemFile parse_system_text(const std::string& text) {
    SystemFile sf;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool saw_dim = false, saw_coords = false, saw_eps = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("line " + std::to_string(line_no) + ": expected key = value");
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        if (key == "dim") {
            sf.dim = std::stoi(value);
            saw_dim = true;
        } else if (key == "coords") {
            sf.coords = detail::split_commas(value);
            saw_coords = true;
        } else if (key == "eps") {
            for (const auto& piece : detail::split_commas(value))
                sf.eps_strings.push_back(detail::unquote(piece, line_no));
            saw_eps = true;
        } else if (key.rfind("chart.", 0) == 0) {
            std::string name = key.substr(6);
            auto bar = value.find('|');
            if (bar == std::string::npos)
                throw ValidationError("line " + std::to_string(line_no) +
                                      ": chart needs \"forward\" | \"inverse\"");
            std::string fwd = detail::unquote(value.substr(0, bar), line_no);
            std::string inv = detail::unquote(value.substr(bar + 1), line_no);
            sf.charts[name] = {detail::split_commas(fwd), detail::split_commas(inv)};
        } else if (key == "degree") {
            auto slash = value.find('/');
            if (slash == std::string::npos)
                sf.degree = Rational(std::stoll(value));
            else
                sf.degree = Rational(std::stoll(value.substr(0, slash)),
                                     std::stoll(value.substr(slash + 1)));
        } else if (key == "seed") {
            sf.seed = std::stoull(value);
        } else if (key == "trials") {
            sf.trials = std::stoi(value);
        } else if (key == "tol") {
            sf.tol = std::stod(value);
        } else {
            throw ValidationError("line " + std::to_string(line_no) + ": unknown key '" + key +
                                  "'");
        }
    }
    if (!saw_dim || !saw_coords || !saw_eps)
        throw ValidationError("system file needs dim, coords, and eps entries");
    if (static_cast<int>(sf.coords.size()) != sf.dim)
        throw ValidationError("coords count does not match dim");
    if (static_cast<int>(sf.eps_strings.size()) != sf.dim)
        throw ValidationError("eps count does not match dim");
    for (const auto& [name, maps] : sf.charts)
        if (static_cast<int>(maps.first.size()) != sf.dim ||
            static_cast<int>(maps.second.size()) != sf.dim)
            throw ValidationError("chart '" + name + "' arity does not match dim");
    return sf;
}

inline SystemFile load_system_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open system file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_system_text(buf.str());
}

}  // namespace lepage
