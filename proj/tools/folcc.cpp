#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "folcc/cech_de_rham.hpp"
#include "folcc/class_expr.hpp"
#include "folcc/errors.hpp"
#include "folcc/fibered_cover.hpp"
#include "folcc/gelfand_fuchs.hpp"
#include "folcc/jet_forms.hpp"
#include "folcc/model_io.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kDefaultNCap = 4;

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << v;
    return out.str();
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return hex64(fnv1a(buf.str()));
}

std::string basename_of(const std::string& path) {
    return std::filesystem::path(path).filename().string();
}

std::string display_variant(folcc::GfVariant v) {
    switch (v) {
        case folcc::GfVariant::w: return "W";
        case folcc::GfVariant::wo: return "WO";
        case folcc::GfVariant::wgl: return "WGL";
    }
    return "?";
}

void check_n_cap(int n, bool allow_large) {
    if (n > kDefaultNCap && !allow_large)
        throw folcc::guard_error("n = " + std::to_string(n) + " exceeds the default cap " +
                                 std::to_string(kDefaultNCap) +
                                 "; pass --allow-large-n to proceed");
}

// ------------------------------------------------------------------- gf ----

std::string run_gf(const std::string& variant, int n, int max_degree, const std::string& format,
                   bool allow_large, nlohmann::json& inputs) {
    folcc::GfVariant v = folcc::parse_variant(variant);
    check_n_cap(n, allow_large);
    folcc::GfAlgebra a(v, n);
    folcc::GfCohomology h = folcc::cohomology(a);
    int lim = max_degree >= 0 ? std::min(max_degree, a.top_degree()) : a.top_degree();

    inputs = {{"variant", display_variant(v)}, {"n", n}, {"max_degree", max_degree}};

    if (format == "json") {
        nlohmann::json out{{"variant", display_variant(v)}, {"n", n}};
        nlohmann::json betti = nlohmann::json::array();
        nlohmann::json reps = nlohmann::json::array();
        for (int q = 0; q <= lim; ++q) {
            betti.push_back(h.betti[static_cast<std::size_t>(q)]);
            nlohmann::json row = nlohmann::json::array();
            for (const auto& r : h.reps[static_cast<std::size_t>(q)]) row.push_back(a.str(r));
            reps.push_back(row);
        }
        out["betti"] = betti;
        out["representatives"] = reps;
        return out.dump(2) + "\n";
    }

    std::ostringstream out;
    out << "variant " << display_variant(v) << ", n = " << n << "\n";
    out << "degree  betti  representatives\n";
    for (int q = 0; q <= lim; ++q) {
        out << q << "       " << h.betti[static_cast<std::size_t>(q)];
        std::string sep = "      ";
        for (const auto& r : h.reps[static_cast<std::size_t>(q)]) {
            out << sep << a.str(r);
            sep = "; ";
        }
        out << "\n";
    }
    return out.str();
}

// -------------------------------------------------------------- compare ----

folcc::GfElement kernel_element(const folcc::GfAlgebra& src, const folcc::GfCohomology& h, int q,
                                const folcc::Vec& coords) {
    folcc::GfElement acc;
    for (std::size_t j = 0; j < coords.size(); ++j) {
        if (coords[j] == 0) continue;
        for (const auto& [m, c] : h.reps[static_cast<std::size_t>(q)][j]) acc[m] += coords[j] * c;
    }
    return src.reduce(acc);
}

std::string run_compare(int n, int degree, const std::string& format, bool allow_large,
                        nlohmann::json& inputs) {
    check_n_cap(n, allow_large);
    folcc::GfAlgebra wgl(folcc::GfVariant::wgl, n);
    folcc::GfAlgebra wo(folcc::GfVariant::wo, n);
    folcc::GfAlgebra w(folcc::GfVariant::w, n);
    inputs = {{"n", n}, {"degree", degree}};

    struct MapReport {
        std::string name;
        const folcc::GfAlgebra* src;
        folcc::GfCohomology src_h;
        std::vector<folcc::SparseMatrix> mats;
    };
    std::vector<MapReport> maps;
    maps.push_back({"WGL->WO", &wgl, folcc::cohomology(wgl), folcc::induced_map(wgl, wo)});
    maps.push_back({"WGL->W", &wgl, folcc::cohomology(wgl), folcc::induced_map(wgl, w)});
    maps.push_back({"WO->W", &wo, folcc::cohomology(wo), folcc::induced_map(wo, w)});

    folcc::GfCohomology hw = folcc::cohomology(w);
    folcc::GfCohomology hwo = maps[2].src_h;

    bool wo_w_iso = true;
    for (int q = 0; q <= std::max(wo.top_degree(), w.top_degree()); ++q) {
        int swo = q <= wo.top_degree() ? hwo.betti[static_cast<std::size_t>(q)] : 0;
        int sw = q <= w.top_degree() ? hw.betti[static_cast<std::size_t>(q)] : 0;
        int rank = 0;
        if (q < static_cast<int>(maps[2].mats.size()))
            rank = folcc::rank_kernel_image(maps[2].mats[static_cast<std::size_t>(q)]).rank;
        wo_w_iso = wo_w_iso && swo == sw && rank == sw;
    }

    std::vector<std::string> wgl_dying;
    nlohmann::json jmaps = nlohmann::json::array();
    std::ostringstream out;
    out << "induced maps, n = " << n << "\n";
    for (const auto& m : maps) {
        nlohmann::json jdeg = nlohmann::json::array();
        out << "\nmap " << m.name << "\n";
        for (int q = 0; q < static_cast<int>(m.mats.size()); ++q) {
            const folcc::SparseMatrix& mat = m.mats[static_cast<std::size_t>(q)];
            if (mat.cols() == 0) continue;
            folcc::RankKernelImage rki = folcc::rank_kernel_image(mat);
            std::vector<std::string> kernel;
            for (const auto& kvec : rki.kernel) {
                folcc::GfElement e = kernel_element(*m.src, m.src_h, q, kvec);
                kernel.push_back(m.src->str(e));
                if (m.name == "WGL->W" && q > 0) wgl_dying.push_back(m.src->str(e));
            }
            if (degree >= 0 && q != degree) continue;
            out << "  degree " << q << ": source " << mat.cols() << ", target " << mat.rows()
                << ", rank " << rki.rank;
            if (!kernel.empty()) {
                out << ", kernel {";
                for (std::size_t i = 0; i < kernel.size(); ++i)
                    out << (i ? ", " : "") << kernel[i];
                out << "}";
            }
            out << "\n";
            jdeg.push_back({{"degree", q},
                            {"source", mat.cols()},
                            {"target", mat.rows()},
                            {"rank", rki.rank},
                            {"kernel", kernel}});
        }
        jmaps.push_back({{"name", m.name}, {"degrees", jdeg}});
    }
    out << "\nWO->W is an isomorphism in every degree: " << (wo_w_iso ? "yes" : "no") << "\n";
    out << "classes from WGL vanishing in W: ";
    if (wgl_dying.empty())
        out << "none";
    else
        for (std::size_t i = 0; i < wgl_dying.size(); ++i) out << (i ? ", " : "") << wgl_dying[i];
    out << "\n";

    if (format == "json") {
        nlohmann::json j{{"n", n},
                         {"maps", jmaps},
                         {"wo_w_isomorphism", wo_w_iso},
                         {"wgl_classes_vanishing_in_w", wgl_dying}};
        return j.dump(2) + "\n";
    }
    return out.str();
}

// -------------------------------------------------- realize / invariance ----

folcc::ExteriorForm realize_any(const std::string& expr, int n, int K,
                                const std::vector<std::string>& params) {
    folcc::GfAlgebra w(folcc::GfVariant::w, n);
    folcc::GfElement e = folcc::parse_class_expr(expr, w);
    if (n == 1) return folcc::realize_class(w, e, folcc::JetSpace(K, params));
    if (n == 2) {
        if (K != 2)
            throw folcc::guard_error("the matrix jet model realizes classes at K = 2 only");
        return folcc::realize_class_matrix(w, e, folcc::JetSpaceN(n, params));
    }
    throw folcc::guard_error("realization covers n = 1 and n = 2");
}

std::string run_realize(const std::string& expr, int n, int K, const std::string& format,
                        nlohmann::json& inputs) {
    if (K > 8) throw folcc::guard_error("truncation order K = " + std::to_string(K) +
                                        " exceeds the symbolic budget (K <= 8)");
    inputs = {{"class", expr}, {"n", n}, {"K", K}};
    folcc::ExteriorForm f = realize_any(expr, n, K, {});
    bool closed = folcc::exterior_derivative(f).is_zero();

    if (format == "json") {
        nlohmann::json out{
            {"class", expr}, {"n", n}, {"K", K}, {"form", f.str()}, {"closed", closed}};
        return out.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "class " << expr << ", n = " << n << ", K = " << K << "\n";
    out << "form: " << f.str() << "\n";
    out << "closed: " << (closed ? "yes" : "no") << "\n";
    return out.str();
}

folcc::ExteriorForm form_literal(const folcc::JetSpace& js, const std::string& lit) {
    if (lit.rfind("dx", 0) == 0) {
        try {
            std::size_t used = 0;
            int k = std::stoi(lit.substr(2), &used);
            if (used == lit.size() - 2 && k >= 0 && k <= js.K) return js.dx(k);
        } catch (const std::exception&) {
        }
    }
    throw folcc::usage_error("unsupported form literal '" + lit + "' (expected dx<k>)");
}

std::string run_invariance(const std::string& expr, const std::string& literal, int n, int K,
                           const std::string& format, nlohmann::json& inputs) {
    if (expr.empty() == literal.empty())
        throw folcc::usage_error("give exactly one of --class and --form");
    inputs = {{"class", expr}, {"form", literal}, {"n", n}, {"K", K}};

    folcc::InvarianceReport rep;
    std::string subject;
    if (n == 1) {
        if (K < 3)
            throw folcc::usage_error("the cubic family needs K >= 3");
        if (K > 8)
            throw folcc::guard_error("truncation order K = " + std::to_string(K) +
                                     " exceeds the symbolic budget (K <= 8)");
        folcc::JetSpace js(K, {"a", "b", "lam"});
        auto fv = js.field_vars();
        folcc::ExteriorForm f = expr.empty()
                                    ? form_literal(js, literal)
                                    : folcc::realize_class(folcc::GfAlgebra(folcc::GfVariant::w, 1),
                                                           folcc::parse_class_expr(
                                                               expr, folcc::GfAlgebra(
                                                                         folcc::GfVariant::w, 1)),
                                                           js);
        subject = f.str();
        std::vector<folcc::RationalFunction> coeffs{
            folcc::RationalFunction::constant(fv, 0), folcc::RationalFunction::constant(fv, 1),
            js.var("a"), js.var("b")};
        for (int k = 4; k <= K; ++k) coeffs.push_back(folcc::RationalFunction::constant(fv, 0));
        folcc::TruncatedSeries cubic = folcc::TruncatedSeries::from_coeffs(fv, coeffs);
        rep = folcc::check_invariance(f, {{"cubic", folcc::prolong(js, cubic)},
                                          {"scaling", folcc::scaling(js, "lam")},
                                          {"reflection", folcc::reflection(js)}});
    } else if (n == 2) {
        if (!literal.empty())
            throw folcc::usage_error("form literals are supported at n = 1 only");
        if (K != 2)
            throw folcc::guard_error("the matrix jet model realizes classes at K = 2 only");
        subject = realize_any(expr, n, K, {}).str();

        folcc::JetSpaceN ja(n, folcc::linear_param_names(n, "A"));
        folcc::ExteriorForm fa = realize_any(expr, n, K, ja.params);
        folcc::InvarianceReport ra = folcc::check_invariance(
            fa, {{"linear", folcc::postcomposition(ja, folcc::symbolic_matrix(ja, "A"))}});

        folcc::JetSpaceN jb(n, folcc::linear_param_names(n, "B"));
        folcc::ExteriorForm fb = realize_any(expr, n, K, jb.params);
        folcc::InvarianceReport rb = folcc::check_invariance(
            fb, {{"fiber", folcc::precomposition_linear(jb, folcc::symbolic_matrix(jb, "B"))}});

        folcc::JetSpaceN jq(n);
        auto fv = jq.field_vars();
        auto c = [&](folcc::Rational v) { return folcc::RationalFunction::constant(fv, v); };
        folcc::RfMatrix A{{c(1), c(2)}, {c(3), c(5)}};
        std::vector<folcc::RfMatrix> H{{{c(1), c(0)}, {c(0), c(0)}},
                                       {{c(0), c(0)}, {c(0), c(0)}}};
        folcc::ExteriorForm fq = realize_any(expr, n, K, {});
        folcc::InvarianceReport rq = folcc::check_invariance(
            fq, {{"quadratic", folcc::postcomposition(jq, A, H)}});

        for (auto* r : {&ra, &rb, &rq}) {
            for (auto& item : r->items) rep.items.push_back(std::move(item));
            rep.all_invariant = rep.all_invariant && r->all_invariant;
        }
    } else {
        throw folcc::guard_error("invariance families cover n = 1 and n = 2");
    }

    if (format == "json") {
        nlohmann::json items = nlohmann::json::array();
        for (const auto& item : rep.items)
            items.push_back({{"family", item.label},
                             {"invariant", item.invariant},
                             {"residual", item.invariant ? "0" : item.residual.str()}});
        nlohmann::json out{{"class", expr},
                           {"form", expr.empty() ? literal : subject},
                           {"n", n},
                           {"K", K},
                           {"families", items},
                           {"all_invariant", rep.all_invariant}};
        return out.dump(2) + "\n";
    }
    std::ostringstream out;
    out << (expr.empty() ? "form " + literal : "class " + expr) << ", n = " << n << ", K = " << K
        << "\n";
    out << "subject: " << subject << "\n";
    for (const auto& item : rep.items) {
        out << item.label << ": " << (item.invariant ? "invariant" : "NOT invariant");
        if (!item.invariant) out << ", residual " << item.residual.str();
        out << "\n";
    }
    out << "all invariant: " << (rep.all_invariant ? "yes" : "no") << "\n";
    return out.str();
}

// ------------------------------------------------- cdr / verify-homotopy ----

nlohmann::json cochain_json(const folcc::TotalCochain& x) {
    nlohmann::json parts = nlohmann::json::array();
    for (const auto& [p, part] : x.parts) {
        nlohmann::json values = nlohmann::json::array();
        for (const auto& [key, val] : part.values) {
            nlohmann::json cochain = nlohmann::json::array();
            for (const auto& r : val) cochain.push_back(folcc::to_string(r));
            values.push_back({{"string", key}, {"cochain", cochain}});
        }
        parts.push_back({{"p", part.p}, {"q", part.q}, {"values", values}});
    }
    return {{"degree", x.degree}, {"parts", parts}};
}

std::string run_cdr(const std::string& model, int max_degree, const std::string& format,
                    nlohmann::json& inputs) {
    folcc::ChartCategory cat = folcc::load_category(model);
    inputs = {{"model", basename_of(model)},
              {"model_digest", file_digest(model)},
              {"max_degree", max_degree}};
    folcc::CechDeRham engine(cat);
    folcc::TotalCohomologyResult r = engine.total_cohomology(max_degree);

    if (format == "json") {
        nlohmann::json reps = nlohmann::json::array();
        for (const auto& level : r.reps) {
            nlohmann::json row = nlohmann::json::array();
            for (const auto& x : level) row.push_back(cochain_json(x));
            reps.push_back(row);
        }
        nlohmann::json out{{"model", basename_of(model)},
                           {"max_degree", max_degree},
                           {"betti", r.betti},
                           {"representatives", reps}};
        return out.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "model " << basename_of(model) << ", max degree " << max_degree << "\n";
    out << "betti:";
    for (int b : r.betti) out << " " << b;
    out << "\n";
    for (std::size_t q = 0; q < r.betti.size(); ++q)
        out << "degree " << q << ": " << r.betti[q]
            << (r.betti[q] == 1 ? " class" : " classes") << "\n";
    return out.str();
}

std::string run_verify(const std::string& model, std::uint64_t seed, int trials, int max_degree,
                       const std::string& format, nlohmann::json& inputs) {
    folcc::FiberedModel fm = folcc::load_fibered(model);
    inputs = {{"model", basename_of(model)},
              {"model_digest", file_digest(model)},
              {"seed", seed},
              {"trials", trials},
              {"max_degree", max_degree}};
    folcc::HomotopyVerifier v(fm.base, fm.fiber, fm.sub_objects);
    folcc::HomotopyReport rep = v.verify_identities(seed, trials, max_degree);
    folcc::HomotopyVerifier::InducedMaps maps = v.induced_on_cohomology(max_degree);

    if (format == "json") {
        nlohmann::json entries = nlohmann::json::array();
        for (const auto& e : rep.entries)
            entries.push_back({{"k", e.k},
                               {"q", e.q},
                               {"lambda_mu", e.lambda_mu_ok},
                               {"homotopy", e.homotopy_ok},
                               {"k2_cross", e.k2_cross_ok}});
        nlohmann::json out{{"model", basename_of(model)},
                           {"seed", seed},
                           {"trials", trials},
                           {"max_degree", max_degree},
                           {"entries", entries},
                           {"all_ok", rep.all_ok},
                           {"cohomology_mutually_inverse", maps.mutually_inverse}};
        return out.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "model " << basename_of(model) << ", seed " << seed << ", trials " << trials
        << ", max degree " << max_degree << "\n";
    out << "k  q  lambda_mu  homotopy  k2_cross\n";
    for (const auto& e : rep.entries)
        out << e.k << "  " << e.q << "  " << (e.lambda_mu_ok ? "ok" : "FAIL") << "         "
            << (e.homotopy_ok ? "ok" : "FAIL") << "        "
            << (e.k == 2 ? (e.k2_cross_ok ? "ok" : "FAIL") : "-") << "\n";
    out << "all identities hold: " << (rep.all_ok ? "yes" : "no") << "\n";
    out << "induced maps mutually inverse on cohomology: "
        << (maps.mutually_inverse ? "yes" : "no") << "\n";
    return out.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact characteristic-class calculators on finite models"};
    app.set_version_flag("--version", std::string("folcc ") + kVersion);
    app.require_subcommand(1);

    std::string format = "table";
    std::string output;
    bool manifest = false;
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"table", "json"}))
        ->capture_default_str();
    app.add_option("--output", output, "write the report to a file instead of stdout");
    app.add_flag("--manifest", manifest, "print a run manifest to stderr");

    std::string variant = "w";
    int n = 1;
    int max_degree = -1;
    bool allow_large = false;
    CLI::App* gf = app.add_subcommand("gf", "graded cohomology of a finite model")->fallthrough();
    gf->add_option("--variant", variant, "w, wo, or wgl")->required();
    gf->add_option("--n", n, "transverse dimension")->required();
    gf->add_option("--max-degree", max_degree, "highest degree to print");
    gf->add_flag("--allow-large-n", allow_large, "lift the default n cap");

    int cmp_n = 1;
    int cmp_degree = -1;
    bool cmp_allow_large = false;
    CLI::App* cmp = app.add_subcommand("compare", "induced maps WGL -> WO -> W with kernels")->fallthrough();
    cmp->add_option("--n", cmp_n, "transverse dimension")->required();
    cmp->add_option("--degree", cmp_degree, "restrict the report to one degree");
    cmp->add_flag("--allow-large-n", cmp_allow_large, "lift the default n cap");

    std::string expr;
    int re_n = 1;
    int re_k = 3;
    CLI::App* re = app.add_subcommand("realize", "realize a class as a jet-coordinate form")->fallthrough();
    re->add_option("--class", expr, "class expression, e.g. \"y1*c1\"")->required();
    re->add_option("--n", re_n, "transverse dimension")->required();
    re->add_option("--K", re_k, "jet truncation order")->required();

    std::string inv_expr;
    std::string inv_form;
    int inv_n = 1;
    int inv_k = 3;
    CLI::App* inv = app.add_subcommand("invariance", "check a form against reparametrizations")->fallthrough();
    inv->add_option("--class", inv_expr, "class expression to realize and test");
    inv->add_option("--form", inv_form, "literal form, e.g. dx0");
    inv->add_option("--n", inv_n, "transverse dimension")->required();
    inv->add_option("--K", inv_k, "jet truncation order");

    std::string model;
    int cdr_degree = 2;
    CLI::App* cdr = app.add_subcommand("cdr", "total cohomology of a chart-category model")->fallthrough();
    cdr->add_option("--model", model, "model file")->required();
    cdr->add_option("--max-degree", cdr_degree, "highest total degree");

    std::string vh_model;
    std::uint64_t seed = 0;
    int trials = 100;
    int vh_degree = 3;
    CLI::App* vh = app.add_subcommand("verify-homotopy",
                                      "check the restriction/evaluation identities on a fibered model")->fallthrough();
    vh->add_option("--model", vh_model, "fibered model file")->required();
    vh->add_option("--seed", seed, "random seed")->required();
    vh->add_option("--trials", trials, "random cochains per bidegree");
    vh->add_option("--max-degree", vh_degree, "highest total degree");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        auto t0 = std::chrono::steady_clock::now();
        std::string rendered;
        std::string command;
        nlohmann::json inputs;
        std::uint64_t used_seed = 0;
        if (*gf) {
            command = "gf";
            rendered = run_gf(variant, n, max_degree, format, allow_large, inputs);
        } else if (*cmp) {
            command = "compare";
            rendered = run_compare(cmp_n, cmp_degree, format, cmp_allow_large, inputs);
        } else if (*re) {
            command = "realize";
            rendered = run_realize(expr, re_n, re_k, format, inputs);
        } else if (*inv) {
            command = "invariance";
            rendered = run_invariance(inv_expr, inv_form, inv_n, inv_k, format, inputs);
        } else if (*cdr) {
            command = "cdr";
            rendered = run_cdr(model, cdr_degree, format, inputs);
        } else {
            command = "verify-homotopy";
            used_seed = seed;
            rendered = run_verify(vh_model, seed, trials, vh_degree, format, inputs);
        }
        auto t1 = std::chrono::steady_clock::now();

        if (output.empty()) {
            std::cout << rendered;
        } else {
            std::ofstream f(output, std::ios::binary);
            if (!f) throw folcc::usage_error("cannot write output file '" + output + "'");
            f << rendered;
        }
        if (manifest) {
            nlohmann::json man{
                {"version", kVersion},
                {"command", command},
                {"inputs", inputs},
                {"seed", used_seed},
                {"elapsed_ms",
                 std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()},
                {"result_digest", hex64(fnv1a(rendered))}};
            std::cerr << man.dump(2) << "\n";
        }
        return 0;
    } catch (const folcc::usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const folcc::guard_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const folcc::model_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
