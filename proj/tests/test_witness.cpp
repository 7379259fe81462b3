#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "sghom/witness.hpp"

using namespace sghom;

namespace {

struct Fixture {
    KneserGraph sg;
    WitnessBundle bundle;
};

// Built once: the bundle for SG_{2,3} with all 14 dihedral twists.
const Fixture& fixture() {
    static const Fixture f = [] {
        Fixture out;
        out.sg = make_kneser_graph({2, 3}, SetKind::Stable);
        std::vector<WitnessTwist> twists;
        for (const DihedralElement& d : all_dihedral_elements(out.sg.params))
            twists.push_back({dihedral_name(d), dihedral_vertex_permutation(out.sg, d),
                              path_to_automorphism(out.sg, d)});
        out.bundle = build_witness(out.sg.graph, 5, canonical_colouring(out.sg), twists);
        return out;
    }();
    return f;
}

std::filesystem::path fresh_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("sghom_witness_" + tag);
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("witness bundle construction for SG_{2,3}") {
    const WitnessBundle& b = fixture().bundle;

    SECTION("vertex counts follow the star layout") {
        CHECK(b.X.branches == 14);
        CHECK(b.X.branch_length >= 16);
        CHECK(b.X.graph.vertex_count() ==
              1 + 14 * static_cast<std::size_t>(b.X.branch_length));
        CHECK(b.G.vertex_count() == b.X.graph.vertex_count() * 14 - 14 * 14);
    }
    SECTION("all invariants re-verify") {
        VerifyReport r = verify_bundle(b);
        INFO(r.failure);
        CHECK(r.ok);
    }
    SECTION("fbar is proper and j is an injective homomorphism") {
        Graph pal = make_complete(5);
        CHECK(is_homomorphism(b.G, pal, b.fbar));
        CHECK(is_homomorphism(b.T, b.G, b.j));
        std::set<int> image(b.j.begin(), b.j.end());
        CHECK(image.size() == b.j.size());
    }
    SECTION("fbar restricted along j is the base colouring") {
        CHECK(compose(b.fbar, b.j) == b.base);
    }
    SECTION("currying the assembled map at the hub recovers the base colouring") {
        auto family = curry(b.X.graph, b.T, make_complete(b.palette), b.big_f);
        CHECK(family[StarGraph::hub] == b.base);
        // and at each terminal, the twisted endpoint
        for (std::size_t br = 0; br < b.X.branches; ++br)
            CHECK(family[b.X.terminal(br)] == compose(b.base, b.gammas[br]));
    }
    SECTION("the bouquet quotient has the expected shape") {
        std::vector<int> cls(b.X.graph.vertex_count(), -1);
        cls[StarGraph::hub] = 0;
        for (std::size_t br = 0; br < b.X.branches; ++br) cls[b.X.terminal(br)] = 0;
        int next = 1;
        for (std::size_t v = 0; v < cls.size(); ++v)
            if (cls[v] < 0) cls[v] = next++;
        auto [bouquet, proj] = quotient(b.X.graph, VertexPartition::from_class_map(cls));
        CHECK(bouquet.vertex_count() ==
              1 + b.X.branches * (static_cast<std::size_t>(b.X.branch_length) - 1));
        CHECK(bouquet.degree(0) == 2 * b.X.branches + 1);  // wedge, loop included
        CHECK(is_homomorphism(b.X.graph, bouquet, proj));
    }
}

TEST_CASE("j-gamma certificates") {
    const Fixture& f = fixture();
    const WitnessBundle& b = f.bundle;

    SECTION("identity gives the constant path") {
        REQUIRE(b.gamma_names[0] == "t0");
        CHECK(b.certs[0].entries == std::vector<VertexMap>{b.j});
    }
    SECTION("every certificate validates with the right endpoints") {
        for (std::size_t a = 0; a < b.certs.size(); ++a) {
            INFO(b.gamma_names[a]);
            CHECK(validate_path(b.T, b.G, b.certs[a].entries).ok);
            CHECK(b.certs[a].front() == b.j);
            CHECK(b.certs[a].back() == compose(b.j, b.gammas[a]));
            if (a != 0)
                CHECK(b.certs[a].entries.size() ==
                      static_cast<std::size_t>(b.X.branch_length) + 1);
        }
    }
}

TEST_CASE("connectivity certificates") {
    const Fixture& f = fixture();
    const WitnessBundle& b = f.bundle;

    SECTION("g = j collapses to the constant certificate") {
        HomPath path = certify_connectivity(b, b.j);
        CHECK(path.entries == std::vector<VertexMap>{b.j});
    }
    SECTION("g = j o gamma for every gamma") {
        for (std::size_t a = 0; a < b.gammas.size(); ++a) {
            VertexMap g = compose(b.j, b.gammas[a]);
            HomPath path = certify_connectivity(b, g);
            INFO(b.gamma_names[a]);
            CHECK(validate_path(b.T, b.G, path.entries).ok);
            CHECK(path.front() == g);
            CHECK(path.back() == b.j);
        }
    }
    SECTION("tree-valued first coordinates") {
        for (std::size_t br : {std::size_t{0}, std::size_t{5}, std::size_t{13}}) {
            for (int pos : {1, 7, b.X.branch_length}) {
                VertexMap g = witness_point_map(b, b.X.vertex(br, pos), b.gammas[br]);
                HomPath path = certify_connectivity(b, g);
                INFO("branch " << br << " pos " << pos);
                CHECK(validate_path(b.T, b.G, path.entries).ok);
                CHECK(path.front() == g);
                CHECK(path.back() == b.j);
            }
        }
    }
    SECTION("a non-constant first coordinate") {
        // Map into the looped edge between two adjacent branch vertices,
        // picking the side by colour parity.
        const std::size_t tn = b.T.vertex_count();
        VertexMap g(tn);
        for (std::size_t t = 0; t < tn; ++t) {
            std::size_t x = b.X.vertex(3, 4 + (b.base[t] % 2));
            g[t] = b.q[x * tn + t];
        }
        REQUIRE(is_homomorphism(b.T, b.G, g));
        HomPath path = certify_connectivity(b, g);
        CHECK(validate_path(b.T, b.G, path.entries).ok);
        CHECK(path.back() == b.j);
    }
    SECTION("non-homomorphisms are rejected") {
        VertexMap bad(b.T.vertex_count(), b.j[0]);
        CHECK_THROWS_AS(certify_connectivity(b, bad), std::invalid_argument);
    }
}

TEST_CASE("bundle verification catches corruption") {
    const Fixture& f = fixture();

    SECTION("corrupted certificate entry is located") {
        WitnessBundle mutated = f.bundle;
        mutated.certs[3].entries[5][2] = (mutated.certs[3].entries[5][2] + 1) %
                                         static_cast<int>(mutated.G.vertex_count());
        VerifyReport r = verify_bundle(mutated);
        CHECK_FALSE(r.ok);
        CHECK(r.failure.find("certificate " + mutated.gamma_names[3]) != std::string::npos);
    }
    SECTION("missing identification is reported") {
        WitnessBundle mutated = f.bundle;
        const std::size_t tn = mutated.T.vertex_count();
        std::size_t idx = mutated.X.terminal(2) * tn + 4;
        mutated.q[idx] = (mutated.q[idx] + 1) % static_cast<int>(mutated.G.vertex_count());
        VerifyReport r = verify_bundle(mutated);
        CHECK_FALSE(r.ok);
        CHECK(r.failure.find("identif") != std::string::npos);
    }
    SECTION("wrong fbar value is caught") {
        WitnessBundle mutated = f.bundle;
        mutated.fbar[7] = (mutated.fbar[7] + 1) % mutated.palette;
        CHECK_FALSE(verify_bundle(mutated).ok);
    }
}

TEST_CASE("bundle build rejects bad twist families") {
    KneserGraph sg = make_kneser_graph({2, 3}, SetKind::Stable);
    VertexMap c = canonical_colouring(sg);
    std::vector<WitnessTwist> twists;
    for (const DihedralElement& d : all_dihedral_elements(sg.params))
        twists.push_back({dihedral_name(d), dihedral_vertex_permutation(sg, d),
                          path_to_automorphism(sg, d)});

    SECTION("missing automorphism") {
        auto partial = twists;
        partial.pop_back();
        CHECK_THROWS_AS(build_witness(sg.graph, 5, c, partial), std::invalid_argument);
    }
    SECTION("invalid twist path") {
        auto broken = twists;
        broken[2].path.entries[1][0] = (broken[2].path.entries[1][0] + 1) % 5;
        CHECK_THROWS_AS(build_witness(sg.graph, 5, c, broken), std::invalid_argument);
    }
    SECTION("endpoint mismatch") {
        auto broken = twists;
        std::swap(broken[1].gamma, broken[2].gamma);
        CHECK_THROWS_AS(build_witness(sg.graph, 5, c, broken), std::invalid_argument);
    }
    SECTION("non-automorphism gamma") {
        auto broken = twists;
        broken[1].gamma[0] = broken[1].gamma[1];
        CHECK_THROWS_AS(build_witness(sg.graph, 5, c, broken), std::invalid_argument);
    }
}

TEST_CASE("bundle serialization round-trip") {
    const Fixture& f = fixture();
    auto dir = fresh_dir("roundtrip");

    save_bundle(f.bundle, dir, 2, 3);
    SECTION("the directory re-verifies") {
        VerifyReport r = verify_bundle_dir(dir);
        INFO(r.failure);
        CHECK(r.ok);
    }
    SECTION("loading reproduces the structure maps") {
        LoadedBundle loaded = load_bundle(dir);
        CHECK(loaded.n == 2);
        CHECK(loaded.k == 3);
        CHECK(loaded.bundle.q == f.bundle.q);
        CHECK(loaded.bundle.j == f.bundle.j);
        CHECK(loaded.bundle.fbar == f.bundle.fbar);
        CHECK(loaded.bundle.G == f.bundle.G);
        CHECK(loaded.bundle.base == f.bundle.base);
        CHECK(loaded.bundle.certs.size() == f.bundle.certs.size());
    }
    SECTION("a loaded bundle can certify") {
        LoadedBundle loaded = load_bundle(dir);
        VertexMap g = compose(loaded.bundle.j, loaded.bundle.gammas[5]);
        HomPath path = certify_connectivity(loaded.bundle, g);
        CHECK(validate_path(loaded.bundle.T, loaded.bundle.G, path.entries).ok);
    }
    std::filesystem::remove_all(dir);
}
