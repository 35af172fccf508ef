// parhodge: exact engine for tame parahoric connections, p-curvature, and the
// local correspondence with Higgs fields on the Frobenius twist.
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "parhodge/io.hpp"
#include "parhodge/nahc.hpp"
#include "parhodge/selftest.hpp"

using namespace parhodge;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int EXIT_VIOLATION = 1;
constexpr int EXIT_PARSE = 2;

void write_out(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        fail(errc::parse_error, "cannot write '" + out_path + "'");
    out << text;
}

Problem load(const std::string& path, std::int64_t precision_override) {
    Problem p = parse_problem_file(path);
    if (precision_override > 0 && precision_override < p.precision) {
        p.precision = precision_override;
        p.matrix = p.matrix.truncated(precision_override);
    }
    return p;
}

ordered_json series_json(const LaurentSeries& s) {
    ordered_json e;
    e["val"] = s.val();
    e["prec"] = s.prec();
    ordered_json coeffs = ordered_json::array();
    for (std::int64_t x = s.val(); x < s.prec(); ++x)
        coeffs.push_back(s.coeff_at(x).coords());
    e["coeffs"] = std::move(coeffs);
    return e;
}

ordered_json matrix_json(const MatSeries& m) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < m.n(); ++i) {
        ordered_json row = ordered_json::array();
        for (std::size_t j = 0; j < m.n(); ++j)
            row.push_back(series_json(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return e.code() == errc::parse_error ? EXIT_PARSE : EXIT_VIOLATION;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_VIOLATION;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact local correspondence engine for tame connections in positive characteristic"};
    app.require_subcommand(1);

    std::string in_path, out_path;
    std::int64_t precision = 0;
    std::uint32_t max_ext = default_max_extension_degree();
    std::uint64_t seed = 0;
    int cases = 100;

    auto add_common = [&](CLI::App* cmd, bool needs_input = true) {
        if (needs_input)
            cmd->add_option("input", in_path, "problem file (JSON)")->required();
        cmd->add_option("--out", out_path, "write the result here instead of stdout");
        cmd->add_option("--precision", precision, "truncate the input to this working precision");
        cmd->add_option("--max-extension-degree", max_ext,
                        "cap on the absolute splitting-field degree");
    };

    auto* c_norm = app.add_subcommand("normalize", "gauge a connection into standard form");
    add_common(c_norm);
    auto* c_pcurv = app.add_subcommand("pcurv", "compute the p-curvature");
    add_common(c_pcurv);
    auto* c_inv = app.add_subcommand("invariants", "characteristic-polynomial invariants");
    add_common(c_inv);
    auto* c_nahc = app.add_subcommand("nahc", "connection to Higgs field on the twist");
    add_common(c_nahc);
    auto* c_nahcinv = app.add_subcommand("nahc-inv", "Higgs field back to a connection");
    add_common(c_nahcinv);
    auto* c_pcheck = app.add_subcommand("parahoric-check", "parahoric group membership");
    add_common(c_pcheck);
    auto* c_lift = app.add_subcommand("lift", "lift through the tame cover w^d = z");
    add_common(c_lift);
    auto* c_desc = app.add_subcommand("descend", "descend an equivariant object");
    add_common(c_desc);
    auto* c_flat = app.add_subcommand("classify-flat", "zero p-curvature classification");
    add_common(c_flat);
    auto* c_self = app.add_subcommand("selftest", "run the property suites");
    c_self->add_option("--seed", seed, "PRNG seed");
    c_self->add_option("--cases", cases, "cases per suite");
    c_self->add_option("--out", out_path, "write the report here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    DecomposeOptions opts;
    opts.max_abs_degree = max_ext;

    if (c_self->parsed())
        return run_guarded([&] {
            std::ostringstream report;
            bool ok = run_selftest(seed, cases, report);
            write_out(report.str(), out_path);
            return ok ? 0 : EXIT_VIOLATION;
        });

    if (c_norm->parsed())
        return run_guarded([&] {
            Problem p = load(in_path, precision);
            if (p.kind != ObjectKind::connection)
                fail(errc::invalid_argument, "normalize expects a connection");
            StandardFormResult r = standard_form(TameConnection::make(p.matrix), opts);
            NormalFormCertificate c{digest_of(p), r.B.A, r.g, r.decomposition.tau,
                                    r.decomposition.ctx};
            write_out(emit_normal_form_certificate(c), out_path);
            return 0;
        });

    if (c_pcurv->parsed())
        return run_guarded([&] {
            Problem p = load(in_path, precision);
            if (p.kind != ObjectKind::connection)
                fail(errc::invalid_argument, "pcurv expects a connection");
            MatSeries psi = p_curvature(TameConnection::make(p.matrix)).psi;
            ordered_json j;
            j["psi"] = matrix_json(psi);
            j["zero"] = psi.is_zero();
            j["horizontal"] = is_horizontal(psi, p.matrix);
            write_out(j.dump(2) + "\n", out_path);
            return 0;
        });

    if (c_inv->parsed())
        return run_guarded([&] {
            Problem p = load(in_path, precision);
            MatSeries m = p.matrix;
            if (p.kind == ObjectKind::connection)
                m = p_curvature(TameConnection::make(p.matrix)).psi;
            else if (p.kind != ObjectKind::higgs)
                fail(errc::invalid_argument, "invariants expects a connection or a Higgs field");
            HitchinInvariants inv = hitchin_invariants(m);
            ordered_json j;
            ordered_json cs = ordered_json::array();
            bool lattice = true;
            for (const auto& c : inv.coefficients) {
                cs.push_back(series_json(c));
                lattice = lattice && c.supported_on_lattice(p.ctx->p);
            }
            j["coefficients"] = std::move(cs);
            if (p.kind == ObjectKind::connection)
                j["twist_supported"] = lattice;
            write_out(j.dump(2) + "\n", out_path);
            return 0;
        });

    if (c_nahc->parsed())
        return run_guarded([&] {
            Problem p = load(in_path, precision);
            if (p.kind != ObjectKind::connection)
                fail(errc::invalid_argument, "nahc expects a connection");
            NahcResult r = p.theta ? parahoric_nahc(p.matrix, *p.theta, opts)
                                   : locsys_to_higgs_tau(TameConnection::make(p.matrix), opts);
            if (!replay_certificate(p.matrix, r))
                fail(errc::internal, "certificate replay failed");
            Certificate c{"nahc", digest_of(p), std::move(r)};
            write_out(emit_certificate(c), out_path);
            return 0;
        });

    if (c_nahcinv->parsed())
        return run_guarded([&] {
            Certificate c = parse_certificate_file(in_path);
            // plain certificates invert through the Higgs-side formula; the
            // parahoric ones fold their step list backwards
            MatSeries A = c.result.theta.is_zero()
                              ? higgs_tau_to_locsys(c.result.tau, c.result.phi, opts).A
                              : invert_certificate(c.result);
            Problem out;
            out.ctx = A.ctx();
            out.n = A.n();
            out.precision = A.min_prec();
            if (!c.result.theta.is_zero())
                out.theta = c.result.theta;
            out.kind = ObjectKind::connection;
            out.matrix = A;
            write_out(emit_problem(out), out_path);
            return 0;
        });

    if (c_pcheck->parsed())
        return run_guarded([&] {
            Problem p = load(in_path, precision);
            if (!p.theta)
                fail(errc::invalid_argument, "parahoric-check needs a theta block");
            GroupMembershipReport r = parahoric_group_check(p.matrix, *p.theta);
            ordered_json j;
            j["member"] = r.member;
            j["levi_invertible"] = r.levi_invertible;
            ordered_json v = ordered_json::array();
            for (const auto& x : r.violations) {
                ordered_json e;
                e["i"] = x.i + 1;
                e["j"] = x.j + 1;
                e["val"] = x.val;
                e["bound"] = x.bound;
                v.push_back(std::move(e));
            }
            j["violations"] = std::move(v);
            write_out(j.dump(2) + "\n", out_path);
            return r.member ? 0 : EXIT_VIOLATION;
        });

    if (c_lift->parsed() || c_desc->parsed())
        return run_guarded([&] {
            Problem p = load(in_path, precision);
            if (!p.theta)
                fail(errc::invalid_argument, "lift/descend need a theta block");
            CoverCtx cov = make_cover(*p.theta, p.ctx);
            MatSeries out_m = c_lift->parsed()
                                  ? (p.kind == ObjectKind::higgs ? lift_higgs(p.matrix, cov)
                                                                 : lift_connection(p.matrix, cov))
                                  : (p.kind == ObjectKind::higgs
                                         ? descend_higgs(p.matrix, cov)
                                         : descend_connection(p.matrix, cov));
            Problem out;
            out.ctx = out_m.ctx();
            out.n = out_m.n();
            out.precision = out_m.min_prec();
            out.theta = p.theta;
            out.kind = p.kind;
            out.matrix = out_m;
            write_out(emit_problem(out), out_path);
            return 0;
        });

    if (c_flat->parsed())
        return run_guarded([&] {
            Problem p = load(in_path, precision);
            if (p.kind != ObjectKind::connection)
                fail(errc::invalid_argument, "classify-flat expects a connection");
            FlatClassification f = pcurv_zero_classify(TameConnection::make(p.matrix), opts);
            ordered_json j;
            j["flat"] = f.flat;
            if (f.flat) {
                ordered_json tau = ordered_json::array();
                for (std::size_t i = 0; i < f.tau.rows(); ++i)
                    tau.push_back(f.tau.at(i, i).coords());
                j["tau"] = std::move(tau);
                j["gauge"] = matrix_json(f.g.mat());
            } else {
                j["psi"] = matrix_json(f.psi);
            }
            write_out(j.dump(2) + "\n", out_path);
            return 0;
        });

    return 0;
}
