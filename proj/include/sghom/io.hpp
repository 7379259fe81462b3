#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sghom/graph.hpp"
#include "sghom/homotopy.hpp"

namespace sghom {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Writes via a temp file in the same directory, then renames into place.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path dir = path.parent_path();
    if (!dir.empty()) std::filesystem::create_directories(dir);
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Graph text format: "p <vertex_count>", one "e <u> <v>" line per adjacency
// pair with u <= v (loops as "e v v"), optional "l <v> <label>" lines.
inline std::string format_graph(const Graph& g) {
    std::ostringstream out;
    out << "p " << g.vertex_count() << "\n";
    for (std::size_t u = 0; u < g.vertex_count(); ++u) {
        const Bitset& nb = g.neighbours(u);
        for (std::size_t v = nb.find_first(); v != Bitset::npos; v = nb.find_next(v))
            if (v >= u) out << "e " << u << " " << v << "\n";
    }
    if (g.has_labels())
        for (std::size_t v = 0; v < g.vertex_count(); ++v)
            out << "l " << v << " " << g.label(v) << "\n";
    return out.str();
}

inline Graph parse_graph(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    bool have_p = false;
    Graph g;
    std::vector<std::string> labels;
    bool have_labels = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "p") {
            std::size_t n = 0;
            if (have_p || !(ls >> n)) throw ParseError("graph line " + std::to_string(lineno) + ": bad p line");
            g = Graph(n);
            labels.assign(n, "");
            have_p = true;
        } else if (tag == "e") {
            std::size_t u = 0, v = 0;
            if (!have_p || !(ls >> u >> v) || u >= g.vertex_count() || v >= g.vertex_count())
                throw ParseError("graph line " + std::to_string(lineno) + ": bad e line");
            g.add_edge(u, v);
        } else if (tag == "l") {
            std::size_t v = 0;
            if (!have_p || !(ls >> v) || v >= g.vertex_count())
                throw ParseError("graph line " + std::to_string(lineno) + ": bad l line");
            std::string rest;
            std::getline(ls, rest);
            if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
            labels[v] = rest;
            have_labels = true;
        } else {
            throw ParseError("graph line " + std::to_string(lineno) + ": unknown tag '" + tag + "'");
        }
    }
    if (!have_p) throw ParseError("graph file has no p line");
    if (have_labels) g.set_labels(std::move(labels));
    return g;
}

// Mapping format: a single line of space-separated integers.
inline std::string format_mapping(const VertexMap& f) {
    std::ostringstream out;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i) out << " ";
        out << f[i];
    }
    out << "\n";
    return out.str();
}

inline VertexMap parse_mapping(const std::string& text) {
    std::istringstream in(text);
    VertexMap f;
    int v = 0;
    while (in >> v) f.push_back(v);
    if (!in.eof()) throw ParseError("mapping: trailing non-integer data");
    if (f.empty()) throw ParseError("mapping: empty");
    return f;
}

// HomPath format: "hompath <n> <k> <kind> <palette> <length>" then one line
// of space-separated values per entry, vertices in enumeration order.
// kind: sg | ssg (target K_palette) or homg (target = a witness graph).
struct HomPathFile {
    int n = 0;
    int k = 0;
    std::string kind;  // sg | ssg | homg
    HomPath path;
};

inline std::string format_hompath(const HomPathFile& f) {
    std::ostringstream out;
    out << "hompath " << f.n << " " << f.k << " " << f.kind << " " << f.path.palette << " "
        << f.path.entries.size() << "\n";
    for (const auto& entry : f.path.entries) out << format_mapping(entry);
    return out.str();
}

inline HomPathFile parse_hompath(const std::string& text) {
    std::istringstream in(text);
    std::string magic;
    HomPathFile f;
    std::size_t length = 0;
    if (!(in >> magic >> f.n >> f.k >> f.kind >> f.path.palette >> length) || magic != "hompath")
        throw ParseError("hompath: bad header");
    if (f.kind != "sg" && f.kind != "ssg" && f.kind != "homg")
        throw ParseError("hompath: unknown kind '" + f.kind + "'");
    if (f.path.palette < 1) throw ParseError("hompath: bad palette");
    std::string rest_of_header;
    std::getline(in, rest_of_header);
    std::string line;
    std::size_t expected_width = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        VertexMap entry;
        int v = 0;
        while (ls >> v) entry.push_back(v);
        if (!ls.eof()) throw ParseError("hompath: non-integer entry data");
        if (expected_width == 0) expected_width = entry.size();
        if (entry.empty() || entry.size() != expected_width)
            throw ParseError("hompath: ragged entry width");
        f.path.entries.push_back(std::move(entry));
    }
    if (f.path.entries.size() != length) throw ParseError("hompath: entry count does not match header");
    return f;
}

}  // namespace sghom
