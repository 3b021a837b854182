#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>
#include <vector>

#include "folcc/cech_de_rham.hpp"
#include "folcc/chart_category.hpp"
#include "folcc/errors.hpp"
#include "folcc/model_io.hpp"
#include "support/simplicial_oracle.hpp"

using namespace folcc;
using Catch::Matchers::ContainsSubstring;

namespace {

std::string model_path(const std::string& name) {
    return std::string(FOLCC_MODELS_DIR) + "/" + name;
}

ChartCategory single_object(const SimplicialComplex& c) {
    ChartCategory cat;
    cat.add_object({"U", c});
    std::map<std::string, std::string> vm;
    for (const auto& v : c.vertices()) vm[v] = v;
    cat.add_morphism({"idU", "U", "U", vm});
    cat.set_composition("idU", "idU", "idU");
    return cat;
}

TotalCochain random_total(const CechDeRham& engine, int n, std::mt19937_64& gen) {
    TotalCochain x{n, {}};
    for (int p = 0; p <= n; ++p) {
        BigradedCochain part = random_bigraded(engine, p, n - p, gen);
        if (!part.is_zero()) x.parts.emplace(p, std::move(part));
    }
    return x;
}

} // namespace

TEST_CASE("validation reports missing identities") {
    ChartCategory cat;
    cat.add_object({"A", SimplicialComplex({"a"}, {{"a"}})});
    CHECK_THROWS_MATCHES(cat.validate(), model_error,
                         Catch::Matchers::MessageMatches(
                             ContainsSubstring("missing identity for object 'A'")));
}

TEST_CASE("validation reports open compositions") {
    ChartCategory cat = load_category(model_path("two_object_arrow.json"));
    ChartCategory broken;
    broken.add_object({"A", SimplicialComplex({"a"}, {{"a"}})});
    broken.add_object({"B", SimplicialComplex({"b"}, {{"b"}})});
    broken.add_morphism({"idA", "A", "A", {{"a", "a"}}});
    broken.add_morphism({"idB", "B", "B", {{"b", "b"}}});
    broken.add_morphism({"f", "A", "B", {{"a", "b"}}});
    broken.set_composition("idA", "idA", "idA");
    broken.set_composition("idB", "idB", "idB");
    broken.set_composition("f", "idB", "f");
    CHECK_THROWS_MATCHES(
        broken.validate(), model_error,
        Catch::Matchers::MessageMatches(ContainsSubstring("open composition ('idA','f')")));
}

TEST_CASE("validation reports non-simplicial maps") {
    ChartCategory cat;
    cat.add_object({"E", SimplicialComplex({"x", "y"}, {{"x", "y"}})});
    cat.add_object({"D", SimplicialComplex({"u", "v"}, {{"u"}, {"v"}})});
    cat.add_morphism({"g", "E", "D", {{"x", "u"}, {"y", "v"}}});
    CHECK_THROWS_MATCHES(cat.validate(), model_error,
                         Catch::Matchers::MessageMatches(ContainsSubstring("non-simplicial map 'g'")));
}

TEST_CASE("validation reports vertex map gaps") {
    ChartCategory cat;
    cat.add_object({"E", SimplicialComplex({"x", "y"}, {{"x", "y"}})});
    cat.add_morphism({"h", "E", "E", {{"x", "x"}}});
    CHECK_THROWS_MATCHES(
        cat.validate(), model_error,
        Catch::Matchers::MessageMatches(ContainsSubstring("morphism 'h' misses vertex 'y'")));
}

TEST_CASE("validation reports inconsistent composition entries") {
    ChartCategory cat;
    cat.add_object({"U", SimplicialComplex({"u1", "u2"}, {{"u1"}, {"u2"}})});
    cat.add_morphism({"idU", "U", "U", {{"u1", "u1"}, {"u2", "u2"}}});
    cat.add_morphism({"s", "U", "U", {{"u1", "u2"}, {"u2", "u1"}}});
    cat.set_composition("idU", "idU", "idU");
    cat.set_composition("idU", "s", "s");
    cat.set_composition("s", "idU", "s");
    cat.set_composition("s", "s", "s");
    CHECK_THROWS_MATCHES(cat.validate(), model_error,
                         Catch::Matchers::MessageMatches(
                             ContainsSubstring("composition table inconsistent at ('s','s')")));
}

TEST_CASE("validation reports associativity failures") {
    ChartCategory cat;
    cat.add_object({"P", SimplicialComplex({"p"}, {{"p"}})});
    for (const char* m : {"e", "x", "y", "z"})
        cat.add_morphism({m, "P", "P", {{"p", "p"}}});
    auto table = [&](const char* a, const char* b, const char* r) {
        cat.set_composition(a, b, r);
    };
    for (const char* m : {"e", "x", "y", "z"}) {
        table("e", m, m);
        if (std::string(m) != "e") table(m, "e", m);
    }
    table("x", "x", "y");
    table("x", "y", "z");
    table("x", "z", "e");
    table("y", "x", "e");
    table("y", "y", "z");
    table("y", "z", "x");
    table("z", "x", "z");
    table("z", "y", "x");
    table("z", "z", "y");
    CHECK_THROWS_MATCHES(
        cat.validate(), model_error,
        Catch::Matchers::MessageMatches(ContainsSubstring("composition not associative")));
}

TEST_CASE("a morphism that is not neutral is not an identity") {
    ChartCategory cat;
    cat.add_object({"P", SimplicialComplex({"p"}, {{"p"}})});
    cat.add_morphism({"e1", "P", "P", {{"p", "p"}}});
    cat.add_morphism({"e2", "P", "P", {{"p", "p"}}});
    for (const char* a : {"e1", "e2"})
        for (const char* b : {"e1", "e2"}) cat.set_composition(a, b, "e1");
    CHECK_THROWS_MATCHES(cat.validate(), model_error,
                         Catch::Matchers::MessageMatches(
                             ContainsSubstring("missing identity for object 'P'")));
}

TEST_CASE("identity detection is behavioral on the group model") {
    ChartCategory z2 = load_category(model_path("z2_group.json"));
    CHECK(z2.identity_of("G") == "e");
}

TEST_CASE("strings include identities and count correctly") {
    ChartCategory arrow = load_category(model_path("two_object_arrow.json"));
    CHECK(arrow.strings(0, 1000).size() == 2);
    CHECK(arrow.strings(1, 1000).size() == 3);
    CHECK(arrow.strings(2, 1000).size() == 4);
    CHECK(arrow.strings(3, 1000).size() == 5);

    ChartCategory z2 = load_category(model_path("z2_group.json"));
    CHECK(z2.strings(3, 1000).size() == 8);
}

TEST_CASE("string cap raises a guard error") {
    ChartCategory z2 = load_category(model_path("z2_group.json"));
    CechDeRham engine(z2, 5);
    CHECK_THROWS_MATCHES(
        engine.strings(3), guard_error,
        Catch::Matchers::MessageMatches(ContainsSubstring("raise FOLCC_MAX_STRINGS")));
}

TEST_CASE("identity strings contribute nothing to delta of constants") {
    CechDeRham engine(load_category(model_path("point.json")));
    BigradedCochain w{0, 0, {{{"U"}, {Rational(3)}}}};
    CHECK(engine.horizontal_delta(w).is_zero());
}

TEST_CASE("delta on the arrow model is the difference along f") {
    CechDeRham engine(load_category(model_path("two_object_arrow.json")));
    BigradedCochain w{0, 0, {{{"A"}, {Rational(2)}}, {{"B"}, {Rational(5)}}}};
    BigradedCochain dw = engine.horizontal_delta(w);
    CHECK(engine.value_of(dw, {"f"}) == Vec{Rational(3)});
    CHECK(is_zero_vec(engine.value_of(dw, {"idA"})));
    CHECK(is_zero_vec(engine.value_of(dw, {"idB"})));
}

TEST_CASE("both differentials square to zero on random cochains") {
    std::mt19937_64 gen(20260823);
    for (const char* name : {"point.json", "circle_one_chart.json", "circle_pushout.json",
                             "two_object_arrow.json", "z2_group.json"}) {
        CechDeRham engine(load_category(model_path(name)));
        int checked = 0;
        for (int trial = 0; trial < 12; ++trial)
            for (int p = 0; p <= 3; ++p)
                for (int q = 0; p + q <= 3; ++q) {
                    BigradedCochain w = random_bigraded(engine, p, q, gen);
                    CHECK(engine.horizontal_delta(engine.horizontal_delta(w)).is_zero());
                    ++checked;
                }
        CHECK(checked >= 100);
        for (int trial = 0; trial < 12; ++trial)
            for (int n = 0; n <= 3; ++n) {
                TotalCochain x = random_total(engine, n, gen);
                CHECK(engine.apply_D(engine.apply_D(x)).is_zero());
            }
        for (int n = 0; n <= 2; ++n)
            CHECK((engine.D_matrix(n + 1) * engine.D_matrix(n)).is_zero());
    }
}

TEST_CASE("point model has point cohomology") {
    CechDeRham engine(load_category(model_path("point.json")));
    TotalCohomologyResult r = engine.total_cohomology(2);
    CHECK(r.betti == std::vector<int>{1, 0, 0});
    REQUIRE(r.reps[0].size() == 1);
}

TEST_CASE("one-chart circle model matches its simplicial cohomology") {
    ChartCategory cat = load_category(model_path("circle_one_chart.json"));
    CechDeRham engine(cat);
    TotalCohomologyResult r = engine.total_cohomology(2);
    CHECK(r.betti == std::vector<int>{1, 1, 0});
    CHECK(r.betti == simplicial_betti(cat.object("S").complex, 2));
}

TEST_CASE("pushout circle model has circle cohomology") {
    CechDeRham engine(load_category(model_path("circle_pushout.json")));
    TotalCohomologyResult r = engine.total_cohomology(2);
    CHECK(r.betti == std::vector<int>{1, 1, 0});
    CHECK(r.betti == testsupport::oracle_betti({{0, 1}, {1, 2}, {2, 3}, {0, 3}}, 2));
}

TEST_CASE("group model over the rationals is acyclic in positive degrees") {
    CechDeRham engine(load_category(model_path("z2_group.json")));
    CHECK(engine.total_cohomology(3).betti == std::vector<int>{1, 0, 0, 0});
}

TEST_CASE("j map lands in D-closed cochains and finds the circle class") {
    ChartCategory cat = load_category(model_path("circle_one_chart.json"));
    CechDeRham engine(cat);
    BigradedCochain jw = j_map(engine, {{"S", {1, 0, 0}}}, 1);
    TotalCochain x{1, {{0, jw}}};
    CHECK(engine.apply_D(x).is_zero());
    TotalCohomologyResult coh = engine.total_cohomology(2);
    Vec coords = class_coordinates(engine, coh, x);
    REQUIRE(coords.size() == 1);
    CHECK(coords[0] != 0);
}

TEST_CASE("j map of a constant family is the unit class") {
    CechDeRham engine(load_category(model_path("circle_pushout.json")));
    std::map<std::string, Vec> family{{"U", {1}}, {"V", {1}}, {"W0", {1}}, {"W1", {1}}};
    BigradedCochain jw = j_map(engine, family, 0);
    TotalCochain x{0, {{0, jw}}};
    CHECK(engine.apply_D(x).is_zero());
    Vec coords = class_coordinates(engine, engine.total_cohomology(1), x);
    REQUIRE(coords.size() == 1);
    CHECK(coords[0] != 0);
}

TEST_CASE("j map rejects incompatible families naming the morphism") {
    CechDeRham engine(load_category(model_path("circle_pushout.json")));
    std::map<std::string, Vec> family{{"U", {1}}, {"V", {0}}, {"W0", {1}}, {"W1", {1}}};
    CHECK_THROWS_MATCHES(
        j_map(engine, family, 0), usage_error,
        Catch::Matchers::MessageMatches(ContainsSubstring("morphism 'f0v'")));
    CHECK_THROWS_AS(j_map(engine, {{"U", {1}}}, 0), usage_error);
}

TEST_CASE("class coordinates reject non-closed cochains") {
    ChartCategory cat = single_object(SimplicialComplex({"a", "b"}, {{"a", "b"}}));
    CechDeRham engine(cat);
    TotalCohomologyResult coh = engine.total_cohomology(1);
    TotalCochain x{0, {{0, BigradedCochain{0, 0, {{{"U"}, {Rational(1), Rational(0)}}}}}}};
    CHECK_THROWS_AS(class_coordinates(engine, coh, x), error);
}

TEST_CASE("model loader reports schema problems") {
    CHECK_THROWS_AS(load_category(model_path("no_such_file.json")), usage_error);
    CHECK_THROWS_AS(category_from_json(nlohmann::json::parse("[1,2]")), model_error);
    CHECK_THROWS_MATCHES(
        category_from_json(nlohmann::json::parse(R"({"objects": [{"id": "A"}]})")), model_error,
        Catch::Matchers::MessageMatches(ContainsSubstring("missing field")));
    CHECK_THROWS_AS(
        category_from_json(nlohmann::json::parse(
            R"({"objects": [],
                "morphisms": [{"id": "f", "source": "A", "target": "B", "vertex_map": {}}],
                "composition": []})")),
        model_error);
}
