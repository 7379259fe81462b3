#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "sghom/homotopy.hpp"
#include "sghom/kneser.hpp"

using namespace sghom;

namespace {

// The six-row walk on SG_{2,1}, lex vertex order {0,2},{0,3},{1,3},{1,4},{2,4}.
const std::vector<VertexMap> kTableRows = {
    {0, 0, 1, 1, 2}, {0, 0, 1, 2, 2}, {0, 1, 1, 2, 2},
    {0, 1, 1, 2, 0}, {0, 1, 2, 2, 0}, {1, 1, 2, 2, 0},
};

std::vector<Permutation> alternating_group(int size) {
    Permutation p = identity_permutation(size);
    std::vector<Permutation> out;
    do {
        if (sign(p) == 1) out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

}  // namespace

TEST_CASE("permutation sign") {
    CHECK(sign(identity_permutation(4)) == 1);
    CHECK(sign(palette_rotation(5)) == 1);    // tau_bar for k = 3, a 5-cycle
    CHECK(sign(palette_reflection(3)) == 1);  // rho_bar for k = 3: (0 3)(1 2)
    CHECK(sign(Permutation{1, 0, 2}) == -1);

    SECTION("closed forms for tau_bar and rho_bar") {
        for (int k = 1; k <= 20; ++k) {
            int expect_tau = (k + 1) % 2 == 0 ? 1 : -1;
            int expect_rho = (k * (k + 1) / 2) % 2 == 0 ? 1 : -1;
            CHECK(sign(palette_rotation(k + 2)) == expect_tau);
            CHECK(sign(palette_reflection(k)) == expect_rho);
        }
    }
}

TEST_CASE("decomposition into consecutive 3-cycles") {
    CHECK(decompose_even(identity_permutation(5)).empty());
    CHECK(decompose_even(Permutation{1, 2, 0}) == std::vector<int>{0});

    SECTION("round-trip over the alternating groups A_5 and A_6") {
        for (int size : {5, 6}) {
            for (const Permutation& pi : alternating_group(size)) {
                std::vector<int> windows = decompose_even(pi);
                CHECK(compose_3cycles(windows, size) == pi);
                CHECK(static_cast<int>(windows.size()) <= size * size / 4 + 2 * size);
            }
        }
    }
    SECTION("odd permutations are refused with their sign") {
        CHECK_THROWS_AS(decompose_even(Permutation{1, 0, 2}), HypothesisError);
    }
    SECTION("small palettes are refused") {
        CHECK_THROWS_AS(decompose_even(Permutation{0, 1}), std::invalid_argument);
    }
}

TEST_CASE("paths for consecutive 3-cycles") {
    SECTION("(2,1,0) reproduces the six-row walk on the stable graph") {
        HomPath path = path_for_3cycle(2, 1, 0);
        KneserGraph ssg = make_kneser_graph({2, 1}, SetKind::SemiStable);
        PathVerdict v = validate_path(ssg.graph, path);
        CHECK(v.ok);
        HomPath stable = restrict_to_stable(2, 1, path);
        REQUIRE(stable.entries.size() == 6);
        CHECK(stable.entries == kTableRows);
    }
    SECTION("(2,2,1) fixes every colour below the window") {
        HomPath path = path_for_3cycle(2, 2, 1);
        KneserGraph ssg = make_kneser_graph({2, 2}, SetKind::SemiStable);
        CHECK(validate_path(ssg.graph, path).ok);
        VertexMap c = canonical_colouring(ssg);
        for (const auto& entry : path.entries)
            for (std::size_t s = 0; s < c.size(); ++s)
                if (c[s] < 1) CHECK(entry[s] == c[s]);
    }
    SECTION("(2,3,0) validates with the stated endpoints") {
        HomPath path = path_for_3cycle(2, 3, 0);
        KneserGraph ssg = make_kneser_graph({2, 3}, SetKind::SemiStable);
        CHECK(validate_path(ssg.graph, path).ok);
        VertexMap c = canonical_colouring(ssg);
        CHECK(path.front() == c);
        CHECK(path.back() == compose(consecutive_3cycle(0, 5), c));
    }
    SECTION("sweep of small parameters") {
        for (int n = 2; n <= 3; ++n)
            for (int k = 1; k <= 4; ++k)
                for (int i = 0; i < k; ++i) {
                    HomPath path = path_for_3cycle(n, k, i);
                    KneserGraph ssg = make_kneser_graph({n, k}, SetKind::SemiStable);
                    INFO("n=" << n << " k=" << k << " i=" << i);
                    CHECK(validate_path(ssg.graph, path).ok);
                    VertexMap c = canonical_colouring(ssg);
                    CHECK(path.front() == c);
                    CHECK(path.back() == compose(consecutive_3cycle(i, k + 2), c));
                }
    }
    SECTION("parameter validation") {
        CHECK_THROWS_AS(path_for_3cycle(1, 1, 0), std::invalid_argument);
        CHECK_THROWS_AS(path_for_3cycle(2, 1, 1), std::invalid_argument);
        CHECK_THROWS_AS(path_for_3cycle(2, 0, 0), std::invalid_argument);
    }
}

TEST_CASE("paths for even palette permutations") {
    SECTION("identity gives the one-entry path") {
        HomPath path = path_for_even(2, 3, identity_permutation(5));
        KneserGraph ssg = make_kneser_graph({2, 3}, SetKind::SemiStable);
        CHECK(path.entries == std::vector<VertexMap>{canonical_colouring(ssg)});
    }
    SECTION("square of a 3-cycle") {
        Permutation pi = compose(consecutive_3cycle(0, 5), consecutive_3cycle(0, 5));
        HomPath path = path_for_even(2, 3, pi);
        KneserGraph ssg = make_kneser_graph({2, 3}, SetKind::SemiStable);
        CHECK(validate_path(ssg.graph, path).ok);
        CHECK(path.back() == compose(pi, canonical_colouring(ssg)));
    }
    SECTION("the full palette rotation") {
        HomPath path = path_for_even(2, 3, palette_rotation(5));
        KneserGraph ssg = make_kneser_graph({2, 3}, SetKind::SemiStable);
        CHECK(validate_path(ssg.graph, path).ok);
        CHECK(path.back() == compose(palette_rotation(5), canonical_colouring(ssg)));
    }
    SECTION("odd permutations are refused") {
        CHECK_THROWS_AS(path_for_even(2, 2, Permutation{1, 0, 2, 3}), HypothesisError);
    }
    SECTION("post-composition invariance") {
        HomPath path = path_for_even(2, 3, palette_rotation(5));
        KneserGraph ssg = make_kneser_graph({2, 3}, SetKind::SemiStable);
        std::mt19937 rng(7);
        Permutation sigma = identity_permutation(5);
        std::shuffle(sigma.begin(), sigma.end(), rng);
        CHECK(validate_path(ssg.graph, postcompose(sigma, path)).ok);
    }
}

TEST_CASE("single-step twist certificates") {
    for (auto [n, k] : std::vector<std::pair<int, int>>{{2, 1}, {2, 3}, {3, 3}}) {
        KneserGraph sg = make_kneser_graph({n, k}, SetKind::Stable);
        Graph pal = make_complete(k + 2);
        INFO("n=" << n << " k=" << k);

        HomPath tau = step_tau(sg);
        CHECK(is_homomorphism(sg.graph, pal, tau.entries[0]));
        CHECK(is_homomorphism(sg.graph, pal, tau.entries[1]));
        CHECK(exp_adjacent(sg.graph, pal, tau.entries[0], tau.entries[1]));

        HomPath rho = step_rho(sg);
        CHECK(is_homomorphism(sg.graph, pal, rho.entries[0]));
        CHECK(is_homomorphism(sg.graph, pal, rho.entries[1]));
        CHECK(exp_adjacent(sg.graph, pal, rho.entries[0], rho.entries[1]));

        // endpoints are c o tau and tau_bar o c
        VertexMap c = canonical_colouring(sg);
        CHECK(tau.entries[0] == compose(c, dihedral_vertex_permutation(sg, {1, false})));
        CHECK(tau.entries[1] == compose(palette_rotation(k + 2), c));
        CHECK(rho.entries[0] == compose(c, dihedral_vertex_permutation(sg, {0, true})));
        CHECK(rho.entries[1] == compose(palette_reflection(k), c));
    }
}

TEST_CASE("paths to automorphisms") {
    KneserGraph sg = make_kneser_graph({2, 3}, SetKind::Stable);
    VertexMap c = canonical_colouring(sg);

    SECTION("identity twist is the one-entry path") {
        HomPath path = path_to_automorphism(sg, {0, false});
        CHECK(path.entries == std::vector<VertexMap>{c});
    }
    SECTION("single rotation") {
        HomPath path = path_to_automorphism(sg, {1, false});
        CHECK(validate_path(sg.graph, path).ok);
        CHECK(path.front() == c);
        CHECK(path.back() == compose(c, dihedral_vertex_permutation(sg, {1, false})));
    }
    SECTION("all fourteen dihedral elements") {
        for (const DihedralElement& d : all_dihedral_elements(sg.params)) {
            HomPath path = path_to_automorphism(sg, d);
            INFO(dihedral_name(d));
            CHECK(validate_path(sg.graph, path).ok);
            CHECK(path.front() == c);
            CHECK(path.back() == compose(c, dihedral_vertex_permutation(sg, d)));
        }
    }
    SECTION("k not 3 mod 4 is refused with the sign values") {
        KneserGraph sg21 = make_kneser_graph({2, 1}, SetKind::Stable);
        try {
            path_to_automorphism(sg21, {1, false});
            FAIL("expected a hypothesis violation");
        } catch (const HypothesisError& e) {
            std::string msg = e.what();
            CHECK(msg.find("sign") != std::string::npos);
            CHECK(msg.find("-1") != std::string::npos);
        }
    }
    SECTION("precomposition invariance") {
        HomPath path = path_to_automorphism(sg, {3, true});
        VertexMap alpha = dihedral_vertex_permutation(sg, {2, false});
        CHECK(validate_path(sg.graph, precompose(path, alpha)).ok);
    }
}

TEST_CASE("path validation") {
    KneserGraph sg = make_kneser_graph({2, 1}, SetKind::Stable);

    SECTION("the table walk is valid") {
        CHECK(validate_path(sg.graph, HomPath{3, kTableRows}).ok);
    }
    SECTION("swapping interior rows breaks a junction") {
        auto rows = kTableRows;
        std::swap(rows[1], rows[2]);
        PathVerdict v = validate_path(sg.graph, HomPath{3, rows});
        CHECK_FALSE(v.ok);
        CHECK(v.failure == PathVerdict::Failure::JunctionNotExpAdjacent);
        CHECK(v.index == 0);
    }
    SECTION("a single proper colouring is a valid path") {
        CHECK(validate_path(sg.graph, HomPath{3, {kTableRows[0]}}).ok);
    }
    SECTION("improper entries are located") {
        auto rows = kTableRows;
        rows[2][0] = rows[2][2];  // {0,2} and {1,3} are adjacent
        PathVerdict v = validate_path(sg.graph, HomPath{3, rows});
        CHECK_FALSE(v.ok);
        CHECK(v.failure == PathVerdict::Failure::EntryNotHomomorphism);
        CHECK(v.index == 2);
    }
    SECTION("out-of-palette entries are bad mappings") {
        auto rows = kTableRows;
        rows[3][4] = 7;
        PathVerdict v = validate_path(sg.graph, HomPath{3, rows});
        CHECK_FALSE(v.ok);
        CHECK(v.failure == PathVerdict::Failure::BadEntry);
        CHECK(v.index == 3);
    }
}

TEST_CASE("flip expansion") {
    KneserGraph sg = make_kneser_graph({2, 1}, SetKind::Stable);

    SECTION("the table walk is already single-flip") {
        HomPath out = expand_to_flips(sg.graph, HomPath{3, kTableRows});
        CHECK(out.entries == kTableRows);
    }
    SECTION("a junction differing at three vertices becomes three flips") {
        Graph edgeless(3);
        HomPath two{2, {{0, 0, 0}, {1, 1, 1}}};
        HomPath out = expand_to_flips(edgeless, two);
        CHECK(out.entries.size() == 4);
        CHECK(validate_path(edgeless, out).ok);
    }
    SECTION("expanding an automorphism path keeps it valid") {
        KneserGraph sg23 = make_kneser_graph({2, 3}, SetKind::Stable);
        HomPath path = path_to_automorphism(sg23, {0, true});
        HomPath out = expand_to_flips(sg23.graph, path);
        CHECK(validate_path(sg23.graph, out).ok);
        CHECK(out.front() == path.front());
        CHECK(out.back() == path.back());
        for (std::size_t i = 0; i + 1 < out.entries.size(); ++i) {
            std::size_t diff = 0;
            for (std::size_t v = 0; v < out.entries[i].size(); ++v)
                if (out.entries[i][v] != out.entries[i + 1][v]) ++diff;
            CHECK(diff == 1);
        }
    }
    SECTION("invalid paths are rejected") {
        auto rows = kTableRows;
        std::swap(rows[1], rows[2]);
        CHECK_THROWS_AS(expand_to_flips(sg.graph, HomPath{3, rows}), std::invalid_argument);
    }
}

TEST_CASE("restriction to the stable graph") {
    // A valid semi-stable path restricts to a valid stable path.
    for (int k = 1; k <= 3; ++k) {
        Permutation pi = compose(consecutive_3cycle(0, k + 2), consecutive_3cycle(0, k + 2));
        HomPath path = path_for_even(2, k, pi);
        HomPath stable = restrict_to_stable(2, k, path);
        KneserGraph sg = make_kneser_graph({2, k}, SetKind::Stable);
        INFO("k=" << k);
        CHECK(validate_path(sg.graph, stable).ok);
        CHECK(stable.front() == canonical_colouring(sg));
    }
}
