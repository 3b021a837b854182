#include <catch2/catch_amalgamated.hpp>

#include "folcc/jet_forms.hpp"

using namespace folcc;

namespace {

RationalFunction cst(const std::vector<std::string>& fv, const Rational& v) {
    return RationalFunction::constant(fv, v);
}

GfElement mono(const GfAlgebra& a, std::vector<int> y, std::vector<int> c, Rational k = 1) {
    (void)a;
    return GfElement{{GfMonomial{std::move(y), std::move(c)}, k}};
}

bool same_substitution(const Substitution& s, const Substitution& t) {
    return s.coords == t.coords && s.params == t.params && s.images == t.images;
}

} // namespace

TEST_CASE("truncated series arithmetic") {
    std::vector<std::string> fv{"s"};
    RationalFunction s = RationalFunction::variable(fv, "s");
    TruncatedSeries a = TruncatedSeries::from_coeffs(
        fv, {cst(fv, 1), s, cst(fv, 1), cst(fv, 0)});

    TruncatedSeries prod = a * a.inverse();
    CHECK(prod.coeff(0) == cst(fv, 1));
    for (int k = 1; k <= 3; ++k) CHECK(prod.coeff(k).is_zero());

    TruncatedSeries da = a.derivative();
    CHECK(da.order() == 2);
    CHECK(da.coeff(0) == s);
    CHECK(da.coeff(1) == cst(fv, 2));
    CHECK(da.coeff(2).is_zero());

    TruncatedSeries p = TruncatedSeries::from_coeffs(
        fv, {cst(fv, 0), cst(fv, 1), cst(fv, 1), cst(fv, 0), cst(fv, 0)});
    TruncatedSeries q = TruncatedSeries::from_coeffs(
        fv, {cst(fv, 0), cst(fv, 2), cst(fv, 0), cst(fv, 0), cst(fv, 0)});
    TruncatedSeries comp = p.compose(q);
    CHECK(comp.coeff(1) == cst(fv, 2));
    CHECK(comp.coeff(2) == cst(fv, 4));
    CHECK(comp.coeff(3).is_zero());

    TruncatedSeries z(2, fv);
    CHECK(z.is_zero());
    CHECK_THROWS_AS(z.inverse(), error);
    CHECK_THROWS_AS(z.truncated(3), error);
    CHECK(a.truncated(1).order() == 1);
}

TEST_CASE("vector field bracket produces the closed-form structure constants") {
    std::vector<std::string> fv{"s"};
    const int order = 7;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j <= 4; ++j) {
            TruncatedVectorField br = bracket(TruncatedVectorField::basis(order, fv, i),
                                              TruncatedVectorField::basis(order, fv, j));
            int k = i + j - 1;
            for (int m = 0; m <= br.p.order(); ++m) {
                if (m == k) {
                    Rational expect = Rational(j - i) / (factorial(i) * factorial(j));
                    CHECK(br.p.coeff(m) == cst(fv, expect));
                } else {
                    CHECK(br.p.coeff(m).is_zero());
                }
            }
        }
}

TEST_CASE("tautological components at low order") {
    JetSpace js(2);
    auto theta = tautological_components(js);
    REQUIRE(theta.size() == 2);
    CHECK(theta[0].str() == "1/x1 * dx0");
    CHECK(theta[1].str() == "-x2/x1^2 * dx0 + 1/x1 * dx1");

    ExteriorForm expect = js.zero_form(1);
    expect += js.dx(0) * (-(js.x(2) / (js.x(1) * js.x(1))));
    expect += js.dx(1) * js.x(1).inverse();
    CHECK(theta[1] == expect);

    ExteriorForm dtheta1 = exterior_derivative(theta[1]);
    CHECK(dtheta1.str() == "-2*x2/x1^3 * dx0^dx1 + 1/x1^2 * dx0^dx2");
    CHECK(exterior_derivative(dtheta1).is_zero());
}

TEST_CASE("the degree-three class realizes as the frozen volume form") {
    GfAlgebra wo(GfVariant::wo, 1);
    GfElement y1c1 = mono(wo, {1}, {1});

    JetSpace js3(3);
    ExteriorForm gv = realize_class(wo, y1c1, js3);
    CHECK(gv.str() == "-1/x1^3 * dx0^dx1^dx2");
    CHECK(exterior_derivative(gv).is_zero());

    JetSpace js2(2);
    ExteriorForm gv2 = realize_class(wo, y1c1, js2);
    CHECK(gv2.str() == "-1/x1^3 * dx0^dx1^dx2");
    auto theta = tautological_components(js2);
    CHECK(gv2 == wedge(theta[1], exterior_derivative(theta[1])));

    RationalFunction coef = gv2.coefficient({0, 1, 2});
    CHECK(coef == -(js2.x(1) * js2.x(1) * js2.x(1)).inverse());

    GfAlgebra w(GfVariant::w, 1);
    CHECK(realize_class(w, mono(w, {1}, {1}), js2) == gv2);
}

TEST_CASE("realization is a chain map in low degrees") {
    GfAlgebra w(GfVariant::w, 1);
    JetSpace js(2);
    auto theta = tautological_components(js);

    GfElement y1 = mono(w, {1}, {0});
    GfElement c1 = mono(w, {0}, {1});
    CHECK(realize_class(w, y1, js) == theta[1]);
    CHECK(realize_class(w, c1, js) == exterior_derivative(theta[1]));
    CHECK(exterior_derivative(realize_class(w, y1, js)) ==
          realize_class(w, w.differential(y1), js));
    CHECK(exterior_derivative(realize_class(w, c1, js)).is_zero());

    GfElement unit = mono(w, {0}, {0}, Rational(5, 2));
    ExteriorForm f = realize_class(w, unit, js);
    CHECK(f.degree() == 0);
    CHECK(f.str() == "5/2");

    CHECK(realize_class(w, GfElement{}, js).is_zero());
    GfElement twice = mono(w, {1}, {1}, 2);
    CHECK(realize_class(w, twice, js) == realize_class(w, mono(w, {1}, {1}), js) * Rational(2));
}

TEST_CASE("maurer cartan structure at order five") {
    JetSpace js(5);
    auto theta = tautological_components(js);
    REQUIRE(theta.size() == 5);

    CHECK(exterior_derivative(theta[0]) == wedge(theta[0], theta[1]));

    std::vector<std::string> fv{"s"};
    for (int k = 0; k <= 3; ++k) {
        ExteriorForm rhs = js.zero_form(2);
        for (int i = 0; i < 5; ++i)
            for (int j = i + 1; j < 5; ++j) {
                if (i + j != k + 1) continue;
                TruncatedVectorField br = bracket(TruncatedVectorField::basis(7, fv, i),
                                                  TruncatedVectorField::basis(7, fv, j));
                Rational ckij = br.p.coeff(k).constant_value() * factorial(k);
                rhs += wedge(theta[static_cast<std::size_t>(i)],
                             theta[static_cast<std::size_t>(j)]) *
                       ckij;
            }
        CHECK(exterior_derivative(theta[static_cast<std::size_t>(k)]) == rhs);
    }
}

TEST_CASE("prolongation of a quadratic map has the expected jet images") {
    JetSpace js(2, {"a"});
    auto fv = js.field_vars();
    RationalFunction a = js.var("a");
    TruncatedSeries h =
        TruncatedSeries::from_coeffs(fv, {cst(fv, 0), cst(fv, 1), a});

    Substitution s = prolong(js, h);
    RationalFunction x0 = js.x(0), x1 = js.x(1), x2 = js.x(2);
    CHECK(s.images.at("x0") == x0 + a * x0 * x0);
    CHECK(s.images.at("x1") == x1 + a * x0 * x1 * cst(fv, 2));
    CHECK(s.images.at("x2") == x2 + a * (x1 * x1 + x0 * x2) * cst(fv, 2));
}

TEST_CASE("prolongation is functorial") {
    JetSpace js(2, {"a", "b"});
    auto fv = js.field_vars();
    RationalFunction a = js.var("a"), b = js.var("b");
    auto pad = [&](std::vector<RationalFunction> cs) {
        while (cs.size() < 5) cs.push_back(cst(fv, 0));
        return TruncatedSeries::from_coeffs(fv, std::move(cs));
    };
    TruncatedSeries h1 = pad({cst(fv, 0), cst(fv, 1), a});
    TruncatedSeries h2 = pad({cst(fv, 0), cst(fv, 1), b});

    Substitution lhs = prolong(js, h2.compose(h1));
    Substitution rhs = compose(prolong(js, h2), prolong(js, h1));
    CHECK(same_substitution(lhs, rhs));

    TruncatedSeries id = pad({cst(fv, 0), cst(fv, 1)});
    CHECK(same_substitution(prolong(js, id), Substitution::identity(js.coords(), js.params)));
}

TEST_CASE("scaling and reflection are jet actions of reparametrizations") {
    JetSpace js(3, {"lam"});
    auto fv = js.field_vars();
    RationalFunction lam = js.var("lam");

    Substitution sc = scaling(js, "lam");
    CHECK(sc.images.at("x0") == js.x(0));
    CHECK(sc.images.at("x2") == js.x(2) * lam * lam);

    TruncatedSeries phi = TruncatedSeries::from_coeffs(
        fv, {cst(fv, 0), lam, cst(fv, 0), cst(fv, 0)});
    CHECK(same_substitution(sc, precompose(js, phi)));

    TruncatedSeries neg = TruncatedSeries::from_coeffs(
        fv, {cst(fv, 0), cst(fv, -1), cst(fv, 0), cst(fv, 0)});
    CHECK(same_substitution(reflection(js), precompose(js, neg)));

    TruncatedSeries shifted = TruncatedSeries::from_coeffs(
        fv, {cst(fv, 1), lam, cst(fv, 0), cst(fv, 0)});
    CHECK_THROWS_AS(precompose(js, shifted), usage_error);
    TruncatedSeries degenerate = TruncatedSeries::from_coeffs(
        fv, {cst(fv, 0), cst(fv, 0), cst(fv, 1), cst(fv, 0)});
    CHECK_THROWS_AS(precompose(js, degenerate), usage_error);
    CHECK_THROWS_AS(precompose(js, TruncatedSeries(2, fv)), usage_error);
    CHECK_THROWS_AS(scaling(js, "mu"), usage_error);
}

TEST_CASE("volume form invariance under the standard families") {
    JetSpace js(3, {"a", "b", "lam"});
    auto fv = js.field_vars();
    GfAlgebra w(GfVariant::w, 1);
    ExteriorForm gv = realize_class(w, mono(w, {1}, {1}), js);

    TruncatedSeries cubic = TruncatedSeries::from_coeffs(
        fv, {cst(fv, 0), cst(fv, 1), js.var("a"), js.var("b")});
    std::vector<std::pair<std::string, Substitution>> families{
        {"cubic", prolong(js, cubic)},
        {"scaling", scaling(js, "lam")},
        {"reflection", reflection(js)},
    };

    InvarianceReport rep = check_invariance(gv, families);
    CHECK(rep.all_invariant);
    for (const auto& item : rep.items) {
        CHECK(item.invariant);
        CHECK(item.residual.is_zero());
    }

    InvarianceReport neg = check_invariance(js.dx(0), families);
    CHECK_FALSE(neg.all_invariant);
    REQUIRE(neg.items.size() == 3);
    CHECK(neg.items[0].label == "cubic");
    CHECK_FALSE(neg.items[0].invariant);
    ExteriorForm expected = js.zero_form(1);
    expected += js.dx(0) * (js.var("a") * js.x(0) * cst(fv, 2) +
                            js.var("b") * js.x(0) * js.x(0) * cst(fv, 3));
    CHECK(neg.items[0].residual == expected);
    CHECK(neg.items[1].invariant);
    CHECK(neg.items[2].invariant);
}

TEST_CASE("quotient-line curvature matches the first characteristic form") {
    JetSpace js(2, {"lam"});
    GfAlgebra w(GfVariant::w, 1);
    ExteriorForm q = chern_form_quotient(js);
    CHECK(q == -realize_class(w, mono(w, {0}, {1}), js));
    CHECK(exterior_derivative(q).is_zero());

    InvarianceReport rep = check_invariance(
        q, {{"scaling", scaling(js, "lam")}, {"reflection", reflection(js)}});
    CHECK(rep.all_invariant);
}

TEST_CASE("matrix path agrees with the series path for one variable") {
    JetSpaceN jn(1);
    JetSpace js(2);
    auto theta_series = tautological_components(js);

    FormMatrix theta = connection_form(jn);
    REQUIRE(theta.size() == 1);
    CHECK(theta[0][0] == theta_series[1]);
    CHECK(trace_form(theta) == theta_series[1]);

    FormMatrix R = curvature(jn, theta);
    CHECK(R[0][0] == exterior_derivative(theta_series[1]));
    auto ei = elementary_invariants(jn, R);
    REQUIRE(ei.size() == 1);
    CHECK(ei[0] == R[0][0]);

    GfAlgebra w(GfVariant::w, 1);
    CHECK(realize_class_matrix(w, mono(w, {1}, {1}), jn) ==
          realize_class(w, mono(w, {1}, {1}), js));
}

TEST_CASE("two-variable curvature invariants are closed and chain-consistent") {
    JetSpaceN jn(2);
    FormMatrix theta = connection_form(jn);
    FormMatrix R = curvature(jn, theta);
    auto ei = elementary_invariants(jn, R);
    REQUIRE(ei.size() == 2);

    CHECK(exterior_derivative(ei[0]).is_zero());
    CHECK(exterior_derivative(ei[1]).is_zero());
    CHECK(ei[0] == exterior_derivative(trace_form(theta)));

    GfAlgebra w(GfVariant::w, 2);
    CHECK(realize_class_matrix(w, mono(w, {0, 0}, {1, 0}), jn) == ei[0]);
    CHECK(realize_class_matrix(w, mono(w, {0, 0}, {0, 1}), jn) == ei[1]);
    CHECK(realize_class_matrix(w, mono(w, {1, 0}, {0, 0}), jn) == trace_form(theta));
    CHECK(realize_class_matrix(w, mono(w, {1, 0}, {1, 0}), jn) ==
          wedge(trace_form(theta), ei[0]));
    CHECK(realize_class_matrix(w, mono(w, {0, 0}, {2, 0}), jn) == wedge(ei[0], ei[0]));
}

TEST_CASE("two-variable invariance under linear jet actions") {
    JetSpaceN jn(2, linear_param_names(2, "A"));
    FormMatrix theta = connection_form(jn);
    auto ei = elementary_invariants(jn, curvature(jn, theta));

    Substitution post = postcomposition(jn, symbolic_matrix(jn, "A"));
    CHECK(pullback(trace_form(theta), post) == trace_form(theta));
    CHECK(pullback(ei[0], post) == ei[0]);
    CHECK(pullback(ei[1], post) == ei[1]);

    JetSpaceN jb(2, linear_param_names(2, "B"));
    FormMatrix thetab = connection_form(jb);
    auto eib = elementary_invariants(jb, curvature(jb, thetab));
    Substitution pre = precomposition_linear(jb, symbolic_matrix(jb, "B"));
    CHECK(pullback(trace_form(thetab), pre) == trace_form(thetab));
    CHECK(pullback(eib[0], pre) == eib[0]);
    CHECK(pullback(eib[1], pre) == eib[1]);
}

TEST_CASE("two-variable invariance under a quadratic prolongation") {
    JetSpaceN jn(2);
    auto fv = jn.field_vars();
    auto c = [&](Rational v) { return cst(fv, v); };
    RfMatrix A{{c(1), c(2)}, {c(3), c(5)}};
    std::vector<RfMatrix> H{
        {{c(1), c(0)}, {c(0), c(0)}},
        {{c(0), c(0)}, {c(0), c(0)}},
    };
    Substitution post = postcomposition(jn, A, H);

    FormMatrix theta = connection_form(jn);
    auto ei = elementary_invariants(jn, curvature(jn, theta));
    CHECK(pullback(ei[0], post) == ei[0]);
    CHECK(pullback(ei[1], post) == ei[1]);

    ExteriorForm tr = trace_form(theta);
    CHECK(pullback(tr, post) == tr);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            CHECK(pullback(theta[a][b], post) == theta[a][b]);
}

TEST_CASE("realization guards") {
    GfAlgebra w2(GfVariant::w, 2);
    JetSpaceN jn2(2);
    CHECK_THROWS_AS(realize_class_matrix(w2, mono(w2, {0, 1}, {0, 0}), jn2), guard_error);
    CHECK_THROWS_AS(realize_class_matrix(w2, mono(w2, {0, 0}, {1, 0}), JetSpaceN(1)),
                    usage_error);

    JetSpace js1(1);
    GfAlgebra w1(GfVariant::w, 1);
    CHECK_THROWS_AS(realize_class(w1, mono(w1, {1}, {0}), js1), guard_error);
    CHECK_THROWS_AS(realize_class(w2, mono(w2, {0, 0}, {1, 0}), JetSpace(2)), usage_error);
    CHECK_THROWS_AS(chern_form_quotient(js1), guard_error);

    GfElement mixed = mono(w1, {0}, {0});
    mixed[GfMonomial{{0}, {1}}] = 1;
    CHECK_THROWS_AS(realize_class(w1, mixed, JetSpace(2)), usage_error);

    JetSpace js2(2, {"a"});
    auto fv = js2.field_vars();
    TruncatedSeries bad = TruncatedSeries::from_coeffs(
        fv, {cst(fv, 0), cst(fv, 0), js2.var("a")});
    CHECK_THROWS_AS(prolong(js2, bad), usage_error);
    TruncatedSeries leaky = TruncatedSeries::from_coeffs(
        fv, {cst(fv, 0), js2.x(0), cst(fv, 0)});
    CHECK_THROWS_AS(prolong(js2, leaky), usage_error);
}
