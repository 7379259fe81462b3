// Command-line surface: construct graphs, synthesize and check certificate
// paths, build/verify witness bundles, run the brute-force oracles.
//
// Exit codes: 0 success/valid, 1 invalid certificate, 2 input error,
// 3 hypothesis violation.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sghom/graph.hpp"
#include "sghom/homotopy.hpp"
#include "sghom/io.hpp"
#include "sghom/kneser.hpp"
#include "sghom/oracles.hpp"
#include "sghom/witness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitInput = 2;
constexpr int kExitHypothesis = 3;

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty())
        std::cout << content;
    else
        sghom::atomic_write(out_path, content);
}

struct GraphSpec {
    std::string family;
    int a = 0;
    int b = 0;
};

GraphSpec parse_graph_spec(const std::string& text) {
    auto open = text.find('(');
    auto close = text.find(')');
    if (open == std::string::npos || close != text.size() - 1 || close <= open + 1)
        throw std::invalid_argument("cannot parse graph spec '" + text + "'");
    GraphSpec spec;
    spec.family = text.substr(0, open);
    std::string args = text.substr(open + 1, close - open - 1);
    auto comma = args.find(',');
    try {
        if (comma == std::string::npos) {
            spec.a = std::stoi(args);
        } else {
            spec.a = std::stoi(args.substr(0, comma));
            spec.b = std::stoi(args.substr(comma + 1));
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse graph spec '" + text + "'");
    }
    if (spec.family != "SG" && spec.family != "SSG" && spec.family != "KG" && spec.family != "K" &&
        spec.family != "C")
        throw std::invalid_argument("unknown graph family '" + spec.family + "'");
    if ((spec.family == "K" || spec.family == "C") && comma != std::string::npos)
        throw std::invalid_argument(spec.family + " takes a single parameter");
    if ((spec.family == "SG" || spec.family == "SSG" || spec.family == "KG") &&
        comma == std::string::npos)
        throw std::invalid_argument(spec.family + " takes two parameters");
    return spec;
}

sghom::Graph build_graph(const GraphSpec& spec) {
    using namespace sghom;
    if (spec.family == "K") return make_complete(spec.a);
    if (spec.family == "C") return make_cycle(spec.a);
    SetKind kind = spec.family == "SG"    ? SetKind::Stable
                   : spec.family == "SSG" ? SetKind::SemiStable
                                          : SetKind::Kneser;
    return make_kneser_graph({spec.a, spec.b}, kind).graph;
}

// Accepted path targets: tau, rho, a dihedral name t<a>/r<a>, a palette
// cycle "(0 1 2)", or an explicit image list "1,2,0".
struct PathTarget {
    std::optional<sghom::DihedralElement> dihedral;
    std::optional<sghom::Permutation> even_perm;
};

PathTarget parse_target(const std::string& text, int k, int m) {
    using namespace sghom;
    PathTarget t;
    if (text == "tau") {
        t.dihedral = DihedralElement{1, false};
        return t;
    }
    if (text == "rho") {
        t.dihedral = DihedralElement{0, true};
        return t;
    }
    if (auto d = parse_dihedral_name(text, m)) {
        t.dihedral = *d;
        return t;
    }
    int palette = k + 2;
    if (!text.empty() && text.front() == '(' && text.back() == ')') {
        std::istringstream in(text.substr(1, text.size() - 2));
        std::vector<int> cycle;
        int v = 0;
        while (in >> v) cycle.push_back(v);
        if (!in.eof() || cycle.size() < 2) throw std::invalid_argument("cannot parse cycle target");
        Permutation pi = identity_permutation(palette);
        for (std::size_t i = 0; i < cycle.size(); ++i) {
            int from = cycle[i], to = cycle[(i + 1) % cycle.size()];
            if (from < 0 || from >= palette || pi[static_cast<std::size_t>(from)] != from)
                throw std::invalid_argument("bad cycle target for palette " + std::to_string(palette));
            pi[static_cast<std::size_t>(from)] = to;
        }
        if (!is_permutation(pi)) throw std::invalid_argument("cycle target is not a permutation");
        t.even_perm = pi;
        return t;
    }
    if (text.find(',') != std::string::npos) {
        Permutation pi;
        std::istringstream in(text);
        std::string item;
        while (std::getline(in, item, ',')) pi.push_back(std::stoi(item));
        if (static_cast<int>(pi.size()) != palette || !is_permutation(pi))
            throw std::invalid_argument("image-list target must be a permutation of 0.." +
                                        std::to_string(palette - 1));
        t.even_perm = pi;
        return t;
    }
    throw std::invalid_argument("cannot parse target '" + text + "'");
}

int run_path(int n, int k, const std::string& target_text, const std::string& kind,
             const std::string& out_path) {
    using namespace sghom;
    KneserParams params{n, k};
    params.validate();
    PathTarget target = parse_target(target_text, k, params.m());

    HomPath path;
    std::string file_kind = kind;
    if (target.dihedral) {
        if (kind != "sg")
            throw std::invalid_argument("dihedral targets produce stable-graph paths only");
        KneserGraph sg = make_kneser_graph(params, SetKind::Stable);
        path = path_to_automorphism(sg, *target.dihedral);
        PathVerdict v = validate_path(sg.graph, path);
        if (!v.ok) {
            std::cerr << "internal validation failed: " << v.message() << "\n";
            return kExitInvalid;
        }
    } else {
        HomPath ssg_path = path_for_even(n, k, *target.even_perm);
        path = kind == "ssg" ? ssg_path : restrict_to_stable(n, k, ssg_path);
        KneserGraph g = make_kneser_graph(params, kind == "ssg" ? SetKind::SemiStable : SetKind::Stable);
        PathVerdict v = validate_path(g.graph, path);
        if (!v.ok) {
            std::cerr << "internal validation failed: " << v.message() << "\n";
            return kExitInvalid;
        }
    }
    emit(format_hompath({n, k, file_kind, path}), out_path);
    return kExitOk;
}

int run_check(const std::string& graph_file, const std::string& path_file,
              const std::string& target_file) {
    using namespace sghom;
    Graph source = parse_graph(read_file(graph_file));
    HomPathFile f = parse_hompath(read_file(path_file));

    Graph target;
    if (!target_file.empty()) {
        target = parse_graph(read_file(target_file));
    } else if (f.kind == "homg") {
        std::cerr << "this certificate targets a witness graph; pass --target or use witness verify\n";
        return kExitInput;
    } else {
        target = make_complete(f.path.palette);
    }
    for (const auto& entry : f.path.entries)
        if (entry.size() != source.vertex_count()) {
            std::cerr << "entry width " << entry.size() << " does not match the graph ("
                      << source.vertex_count() << " vertices)\n";
            return kExitInput;
        }
    PathVerdict v = validate_path(source, target, f.path.entries);
    if (!v.ok) {
        std::cerr << v.message() << "\n";
        return v.failure == PathVerdict::Failure::BadEntry ? kExitInput : kExitInvalid;
    }
    std::cout << "valid: " << f.path.entries.size() << " entries\n";
    return kExitOk;
}

int run_witness_build(int n, int k, const std::string& out_dir) {
    using namespace sghom;
    if (out_dir.empty()) throw std::invalid_argument("witness build needs --out DIR");
    KneserParams params{n, k};
    params.validate();
    if (n < 2 || k % 4 != 3)
        throw HypothesisError("witness construction needs n >= 2 and k = 3 (mod 4); k = " +
                              std::to_string(k));
    KneserGraph sg = make_kneser_graph(params, SetKind::Stable);
    std::vector<WitnessTwist> twists;
    for (const DihedralElement& d : all_dihedral_elements(params))
        twists.push_back({dihedral_name(d), dihedral_vertex_permutation(sg, d),
                          path_to_automorphism(sg, d)});
    WitnessBundle bundle =
        build_witness(sg.graph, params.palette(), canonical_colouring(sg), twists);
    VerifyReport report = verify_bundle(bundle);
    if (!report.ok) {
        std::cerr << "bundle self-verification failed: " << report.failure << "\n";
        return kExitInvalid;
    }
    save_bundle(bundle, out_dir, n, k);
    std::cout << "witness bundle written to " << out_dir << ": |V(X)| = "
              << bundle.X.graph.vertex_count() << ", |V(G)| = " << bundle.G.vertex_count()
              << ", branch length " << bundle.X.branch_length << ", " << bundle.certs.size()
              << " certificates\n";
    return kExitOk;
}

int run_witness_verify(const std::string& dir) {
    sghom::VerifyReport report = sghom::verify_bundle_dir(dir);
    for (const std::string& note : report.notes) std::cout << note << "\n";
    if (!report.ok) {
        std::cerr << "bundle verification failed: " << report.failure << "\n";
        return kExitInvalid;
    }
    std::cout << "bundle valid\n";
    return kExitOk;
}

int run_witness_certify(const std::string& dir, const std::string& map_file,
                        const std::string& out_path) {
    using namespace sghom;
    LoadedBundle loaded = load_bundle(dir);
    VertexMap g = parse_mapping(read_file(map_file));
    HomPath cert = certify_connectivity(loaded.bundle, g);
    emit(format_hompath({loaded.n, loaded.k, "homg", cert}), out_path);
    return kExitOk;
}

int run_oracle(const std::string& task, const std::string& graph_file, int palette,
               const std::string& move_name, const std::string& start_file, std::size_t budget,
               bool force) {
    using namespace sghom;
    Graph g = parse_graph(read_file(graph_file));
    if (task == "chromatic") {
        std::cout << "chromatic " << chromatic_number_exact(g, force) << "\n";
        return kExitOk;
    }
    if (task == "automorphisms") {
        auto autos = automorphisms_exact(g, force);
        std::cout << "automorphisms " << autos.size() << "\n";
        for (const auto& a : autos) std::cout << format_mapping(a);
        return kExitOk;
    }
    if (task == "flip-components") {
        if (palette <= 0) throw std::invalid_argument("flip-components needs --palette");
        FlipMove move = move_name == "exp-adjacent" ? FlipMove::ExpAdjacent : FlipMove::SingleFlip;
        if (move_name != "exp-adjacent" && move_name != "single-flip")
            throw std::invalid_argument("--move must be single-flip or exp-adjacent");
        if (!start_file.empty()) {
            VertexMap start = parse_mapping(read_file(start_file));
            FlipReport report = flip_component(g, palette, start, move, budget);
            std::cout << "component " << report.visited.size() << " truncated "
                      << (report.truncated ? 1 : 0) << "\n";
        } else {
            CensusReport census = flip_component_census(g, palette, move, budget);
            std::cout << "components";
            for (std::size_t s : census.component_sizes) std::cout << " " << s;
            std::cout << "\ntotal " << census.total << " truncated " << (census.truncated ? 1 : 0)
                      << "\n";
        }
        return kExitOk;
    }
    if (task == "mixtures") {
        if (palette <= 0) throw std::invalid_argument("mixtures needs --palette");
        auto colourings = enumerate_proper_colourings(g, palette, budget);
        Graph pal = make_complete(palette);
        std::size_t pairs = 0, adjacent = 0, disagreements = 0;
        for (std::size_t a = 0; a < colourings.size(); ++a)
            for (std::size_t b = a; b < colourings.size(); ++b) {
                ++pairs;
                bool local = mixtures_all_homomorphisms(g, pal, colourings[a], colourings[b]);
                bool brute =
                    all_mixtures_homomorphisms_bruteforce(g, pal, colourings[a], colourings[b]);
                if (local) ++adjacent;
                if (local != brute) ++disagreements;
            }
        std::cout << "colourings " << colourings.size() << " pairs " << pairs << " exp-adjacent "
                  << adjacent << " disagreements " << disagreements << "\n";
        return disagreements == 0 ? kExitOk : kExitInvalid;
    }
    throw std::invalid_argument("unknown oracle task '" + task + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stable Kneser graph colouring-path and witness-graph toolkit"};
    app.require_subcommand(1);

    std::string out_path, graph_spec;
    auto* cmd_graph = app.add_subcommand("graph", "emit a graph in the text format");
    cmd_graph->add_option("spec", graph_spec, "SG(n,k) | SSG(n,k) | KG(n,k) | K(r) | C(r)")
        ->required();
    cmd_graph->add_option("--out", out_path, "output file (default stdout)");

    int n = 0, k = 0;
    std::string target_text, path_kind = "sg";
    auto* cmd_path = app.add_subcommand("path", "synthesize a colouring-path certificate");
    cmd_path->add_option("--n", n)->required();
    cmd_path->add_option("--k", k)->required();
    cmd_path->add_option("--target", target_text,
                         "tau | rho | t<a> | r<a> | (cycle) | image,list")
        ->required();
    cmd_path->add_option("--kind", path_kind, "sg (default) or ssg for even-permutation targets");
    cmd_path->add_option("--out", out_path, "output file (default stdout)");

    std::string graph_file, path_file, target_file;
    auto* cmd_check = app.add_subcommand("check", "validate a certificate against a graph");
    cmd_check->add_option("graph", graph_file)->required();
    cmd_check->add_option("path", path_file)->required();
    cmd_check->add_option("--target", target_file, "target graph (default: complete palette)");

    auto* cmd_witness = app.add_subcommand("witness", "witness-graph bundles");
    cmd_witness->require_subcommand(1);
    std::string witness_dir, map_file;
    auto* wb = cmd_witness->add_subcommand("build", "build a bundle for SG(n,k)");
    wb->add_option("--n", n)->required();
    wb->add_option("--k", k)->required();
    wb->add_option("--out", out_path, "bundle directory")->required();
    auto* wv = cmd_witness->add_subcommand("verify", "re-check a bundle directory");
    wv->add_option("dir", witness_dir)->required();
    auto* wc = cmd_witness->add_subcommand("certify", "certify g ~> j for a mapping file");
    wc->add_option("dir", witness_dir)->required();
    wc->add_option("--map", map_file, "mapping file for g: T -> G")->required();
    wc->add_option("--out", out_path, "output file (default stdout)");

    std::string oracle_task, move_name = "single-flip", start_file;
    int palette = 0;
    std::size_t budget = 1'000'000;
    bool force = false;
    auto* cmd_oracle = app.add_subcommand("oracle", "brute-force cross-checks");
    cmd_oracle->add_option("task", oracle_task, "chromatic | automorphisms | flip-components | mixtures")
        ->required();
    cmd_oracle->add_option("graph", graph_file)->required();
    cmd_oracle->add_option("--palette", palette);
    cmd_oracle->add_option("--move", move_name, "single-flip (default) or exp-adjacent");
    cmd_oracle->add_option("--start", start_file, "start colouring (mapping file)");
    cmd_oracle->add_option("--budget", budget);
    cmd_oracle->add_flag("--force", force, "override the search guard");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (cmd_graph->parsed()) {
            emit(sghom::format_graph(build_graph(parse_graph_spec(graph_spec))), out_path);
            return kExitOk;
        }
        if (cmd_path->parsed()) {
            if (path_kind != "sg" && path_kind != "ssg")
                throw std::invalid_argument("--kind must be sg or ssg");
            return run_path(n, k, target_text, path_kind, out_path);
        }
        if (cmd_check->parsed()) return run_check(graph_file, path_file, target_file);
        if (cmd_witness->parsed()) {
            if (wb->parsed()) return run_witness_build(n, k, out_path);
            if (wv->parsed()) return run_witness_verify(witness_dir);
            if (wc->parsed()) return run_witness_certify(witness_dir, map_file, out_path);
        }
        if (cmd_oracle->parsed())
            return run_oracle(oracle_task, graph_file, palette, move_name, start_file, budget, force);
    } catch (const sghom::HypothesisError& e) {
        std::cerr << "hypothesis violation: " << e.what() << "\n";
        return kExitHypothesis;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
