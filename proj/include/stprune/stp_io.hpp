// Copyright 2026 The stprune Authors.
// Licensed under the Apache License, Version 2.0 (see LICENSE).

#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "stprune/instance.hpp"

namespace stprune {

/// Parse failure with 1-based line/column location.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line, int column = 1)
        : Error("line " + std::to_string(line) + ":" + std::to_string(column) +
                ": " + msg),
          line_(line),
          column_(column)
    {
    }

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

namespace detail {

inline std::string upper(std::string_view s)
{
    std::string out(s);
    for (char& c : out)
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

struct StpLine {
    int number = 0;             // 1-based
    std::vector<std::string> tokens;
    std::vector<int> columns;   // 1-based start column per token
};

inline std::vector<StpLine> tokenize_stp(std::string_view text)
{
    std::vector<StpLine> lines;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        ++line_no;
        std::string_view line = text.substr(start, end - start);
        StpLine out;
        out.number = line_no;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() &&
                   std::isspace(static_cast<unsigned char>(line[i])))
                ++i;
            if (i >= line.size())
                break;
            std::size_t tok_start = i;
            while (i < line.size() &&
                   !std::isspace(static_cast<unsigned char>(line[i])))
                ++i;
            out.tokens.emplace_back(line.substr(tok_start, i - tok_start));
            out.columns.push_back(static_cast<int>(tok_start) + 1);
        }
        if (!out.tokens.empty())
            lines.push_back(std::move(out));
        if (end == text.size())
            break;
        start = end + 1;
    }
    return lines;
}

inline int parse_node_id(const StpLine& line, std::size_t tok, int node_count,
                         const char* what)
{
    const std::string& s = line.tokens[tok];
    int col = line.columns[tok];
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError(std::string("expected ") + what + " id, got '" + s + "'",
                         line.number, col);
    long long v = 0;
    for (char c : s) {
        v = v * 10 + (c - '0');
        if (v > 1'000'000'000LL)
            break;
    }
    if (v < 1 || v > node_count)
        throw ParseError(std::string(what) + " id " + s + " out of range [1," +
                             std::to_string(node_count) + "]",
                         line.number, col);
    return static_cast<int>(v) - 1;  // to internal 0-based
}

inline long long parse_count(const StpLine& line, std::size_t tok,
                             const char* what)
{
    const std::string& s = line.tokens[tok];
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError(std::string("expected ") + what + " count, got '" + s +
                             "'",
                         line.number, line.columns[tok]);
    long long v = 0;
    for (char c : s) {
        v = v * 10 + (c - '0');
        if (v > 2'000'000'000LL)
            throw ParseError(std::string(what) + " count too large", line.number,
                             line.columns[tok]);
    }
    return v;
}

}  // namespace detail

/** Parse the SteinLib STP text format (line oriented, case-insensitive
 * keywords). Recognized sections are Graph and Terminals; anything else
 * (Comment, Coordinates, ...) is skipped so the full SteinLib corpus loads.
 *
 * Errors carry the offending line/column: bad syntax, node ids out of range,
 * duplicate edges, a missing Terminals section, or declared counts that
 * disagree with the body.
 */
inline SteinerInstance parse_instance(std::string_view text,
                                      std::string name = "")
{
    using detail::StpLine;
    const std::vector<StpLine> lines = detail::tokenize_stp(text);

    int node_count = -1;
    long long declared_edges = -1;
    long long declared_terminals = -1;
    std::vector<Edge> edges;
    std::unordered_set<std::int64_t> edge_keys;
    std::vector<int> terminals;
    bool saw_graph = false;
    bool saw_terminals = false;

    std::size_t i = 0;
    // Optional magic header: "33D32945 STP File, STP Format Version 1.0".
    if (i < lines.size() && lines[i].tokens[0] == "33D32945")
        ++i;

    while (i < lines.size()) {
        const StpLine& line = lines[i];
        const std::string kw = detail::upper(line.tokens[0]);
        if (kw == "EOF")
            break;
        if (kw != "SECTION")
            throw ParseError("expected SECTION or EOF, got '" + line.tokens[0] +
                                 "'",
                             line.number, line.columns[0]);
        if (line.tokens.size() < 2)
            throw ParseError("SECTION requires a name", line.number);
        const std::string section = detail::upper(line.tokens[1]);
        ++i;

        if (section == "GRAPH") {
            saw_graph = true;
            bool ended = false;
            while (i < lines.size()) {
                const StpLine& l = lines[i];
                const std::string k = detail::upper(l.tokens[0]);
                if (k == "END") {
                    ended = true;
                    ++i;
                    break;
                }
                if (k == "NODES") {
                    if (l.tokens.size() != 2)
                        throw ParseError("Nodes expects one count", l.number);
                    node_count =
                        static_cast<int>(detail::parse_count(l, 1, "node"));
                    if (node_count <= 0)
                        throw ParseError("node count must be positive", l.number);
                } else if (k == "EDGES") {
                    if (l.tokens.size() != 2)
                        throw ParseError("Edges expects one count", l.number);
                    declared_edges = detail::parse_count(l, 1, "edge");
                } else if (k == "E") {
                    if (node_count < 0)
                        throw ParseError("E line before Nodes declaration",
                                         l.number);
                    if (l.tokens.size() != 4)
                        throw ParseError("E expects 'E <u> <v> <w>'", l.number);
                    Edge e;
                    e.u = detail::parse_node_id(l, 1, node_count, "node");
                    e.v = detail::parse_node_id(l, 2, node_count, "node");
                    auto w = Weight::parse(l.tokens[3]);
                    if (!w)
                        throw ParseError("bad edge weight '" + l.tokens[3] + "'",
                                         l.number, l.columns[3]);
                    if (*w < Weight{})
                        throw ParseError("negative edge weight", l.number,
                                         l.columns[3]);
                    e.weight = *w;
                    if (e.u == e.v)
                        throw ParseError("self-loop not allowed", l.number,
                                         l.columns[1]);
                    const auto [lo, hi] = std::minmax(e.u, e.v);
                    const std::int64_t key =
                        static_cast<std::int64_t>(lo) * node_count + hi;
                    if (!edge_keys.insert(key).second)
                        throw ParseError("duplicate edge", l.number,
                                         l.columns[1]);
                    edges.push_back(e);
                } else {
                    throw ParseError("unexpected token '" + l.tokens[0] +
                                         "' in Graph section",
                                     l.number, l.columns[0]);
                }
                ++i;
            }
            if (!ended)
                throw ParseError("Graph section not closed by END",
                                 lines.back().number);
            if (node_count < 0)
                throw ParseError("Graph section missing Nodes declaration",
                                 lines.back().number);
            if (declared_edges >= 0 &&
                declared_edges != static_cast<long long>(edges.size()))
                throw ParseError(
                    "declared Edges " + std::to_string(declared_edges) +
                        " disagrees with " + std::to_string(edges.size()) +
                        " E lines",
                    lines[i - 1].number);
        } else if (section == "TERMINALS") {
            saw_terminals = true;
            if (node_count < 0)
                throw ParseError("Terminals section before Graph section",
                                 line.number);
            bool ended = false;
            while (i < lines.size()) {
                const StpLine& l = lines[i];
                const std::string k = detail::upper(l.tokens[0]);
                if (k == "END") {
                    ended = true;
                    ++i;
                    break;
                }
                if (k == "TERMINALS") {
                    if (l.tokens.size() != 2)
                        throw ParseError("Terminals expects one count", l.number);
                    declared_terminals = detail::parse_count(l, 1, "terminal");
                } else if (k == "T") {
                    if (l.tokens.size() != 2)
                        throw ParseError("T expects 'T <v>'", l.number);
                    terminals.push_back(
                        detail::parse_node_id(l, 1, node_count, "terminal"));
                } else {
                    throw ParseError("unexpected token '" + l.tokens[0] +
                                         "' in Terminals section",
                                     l.number, l.columns[0]);
                }
                ++i;
            }
            if (!ended)
                throw ParseError("Terminals section not closed by END",
                                 lines.back().number);
            if (declared_terminals >= 0 &&
                declared_terminals != static_cast<long long>(terminals.size()))
                throw ParseError(
                    "declared Terminals " + std::to_string(declared_terminals) +
                        " disagrees with " + std::to_string(terminals.size()) +
                        " T lines",
                    lines[i - 1].number);
        } else {
            // Unknown section: skip until its END.
            bool ended = false;
            while (i < lines.size()) {
                if (detail::upper(lines[i].tokens[0]) == "END") {
                    ended = true;
                    ++i;
                    break;
                }
                ++i;
            }
            if (!ended)
                throw ParseError("section '" + line.tokens[1] +
                                     "' not closed by END",
                                 lines.back().number);
        }
    }

    const int err_line = lines.empty() ? 1 : lines.back().number;
    if (!saw_graph)
        throw ParseError("missing Graph section", err_line);
    if (!saw_terminals)
        throw ParseError("missing Terminals section", err_line);

    try {
        return SteinerInstance(std::move(name), node_count, std::move(edges),
                               std::move(terminals));
    } catch (const Error& e) {
        throw ParseError(e.what(), err_line);
    }
}

/// Serialize to canonical STP text; parse(serialize(i)) == i.
inline std::string serialize_instance(const SteinerInstance& inst)
{
    std::ostringstream out;
    out << "33D32945 STP File, STP Format Version 1.0\n\n";
    out << "SECTION Graph\n";
    out << "Nodes " << inst.node_count() << "\n";
    out << "Edges " << inst.edge_count() << "\n";
    for (const Edge& e : inst.edges())
        out << "E " << (e.u + 1) << " " << (e.v + 1) << " " << e.weight.str()
            << "\n";
    out << "END\n\n";
    out << "SECTION Terminals\n";
    out << "Terminals " << inst.terminals().size() << "\n";
    for (int t : inst.terminals())
        out << "T " << (t + 1) << "\n";
    out << "END\n\nEOF\n";
    return out.str();
}

}  // namespace stprune
