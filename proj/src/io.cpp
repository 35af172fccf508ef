#include "parhodge/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace parhodge {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json field_to_json(const FieldCtxPtr& ctx) {
    ordered_json f;
    f["p"] = ctx->p;
    f["m"] = ctx->m;
    f["modulus"] = ctx->modulus;
    return f;
}

FieldCtxPtr field_from_json(const ordered_json& f) {
    if (!f.contains("p") || !f.contains("m") || !f.contains("modulus"))
        fail(errc::parse_error, "field block needs p, m and modulus");
    return FieldCtx::make(f["p"].get<std::uint32_t>(), f["m"].get<std::uint32_t>(),
                          f["modulus"].get<std::vector<std::uint32_t>>());
}

ordered_json series_to_json(const LaurentSeries& s) {
    ordered_json e;
    e["val"] = s.val();
    e["prec"] = s.prec();
    ordered_json coeffs = ordered_json::array();
    for (std::int64_t x = s.val(); x < s.prec(); ++x)
        coeffs.push_back(s.coeff_at(x).coords());
    e["coeffs"] = std::move(coeffs);
    return e;
}

LaurentSeries series_from_json(const ordered_json& e, const FieldCtxPtr& ctx,
                               std::int64_t default_prec) {
    std::int64_t val = e.contains("val") ? e["val"].get<std::int64_t>() : 0;
    std::int64_t prec = e.contains("prec") ? e["prec"].get<std::int64_t>() : default_prec;
    std::vector<FieldElement> coeffs;
    if (e.contains("coeffs"))
        for (const auto& c : e["coeffs"]) {
            auto v = c.get<std::vector<std::uint32_t>>();
            if (v.size() != ctx->m)
                fail(errc::parse_error, "coefficient has wrong coordinate count");
            coeffs.emplace_back(ctx, std::move(v));
        }
    if (val + static_cast<std::int64_t>(coeffs.size()) > prec)
        fail(errc::parse_error, "more coefficients than the precision window holds");
    return LaurentSeries::from_coeffs(ctx, val, coeffs, prec);
}

ordered_json matrix_to_json(const MatSeries& m) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < m.n(); ++i) {
        ordered_json row = ordered_json::array();
        for (std::size_t j = 0; j < m.n(); ++j)
            row.push_back(series_to_json(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

MatSeries matrix_from_json(const ordered_json& rows, const FieldCtxPtr& ctx, std::size_t n,
                           std::int64_t default_prec) {
    if (!rows.is_array() || rows.size() != n)
        fail(errc::parse_error, "matrix needs n rows");
    std::vector<LaurentSeries> entries;
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != n)
            fail(errc::parse_error, "matrix needs n columns per row");
        for (const auto& e : row)
            entries.push_back(series_from_json(e, ctx, default_prec));
    }
    return MatSeries(ctx, n, std::move(entries));
}

ordered_json weight_to_json(const TameWeight& w) {
    ordered_json a = ordered_json::array();
    for (const auto& e : w.entries)
        a.push_back(e.str());
    return a;
}

TameWeight weight_from_json(const ordered_json& a) {
    std::vector<Rational> entries;
    for (const auto& e : a)
        entries.push_back(Rational::parse(e.get<std::string>()));
    return TameWeight::of(std::move(entries));
}

ordered_json const_to_json(const ConstMat& c) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < c.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (std::size_t j = 0; j < c.cols(); ++j)
            row.push_back(c.at(i, j).coords());
        rows.push_back(std::move(row));
    }
    return rows;
}

ConstMat const_from_json(const ordered_json& rows, const FieldCtxPtr& ctx) {
    std::size_t n = rows.size();
    ConstMat c(ctx, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            c.set(i, j, FieldElement(ctx, rows[i][j].get<std::vector<std::uint32_t>>()));
    return c;
}

ordered_json parse_text(const std::string& text) {
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded())
        fail(errc::parse_error, "input is not valid JSON");
    return j;
}

ObjectKind kind_from_string(const std::string& s) {
    if (s == "connection")
        return ObjectKind::connection;
    if (s == "higgs")
        return ObjectKind::higgs;
    if (s == "gauge")
        return ObjectKind::gauge;
    fail(errc::parse_error, "unknown object kind '" + s + "'");
}

const char* kind_to_string(ObjectKind k) {
    switch (k) {
    case ObjectKind::connection: return "connection";
    case ObjectKind::higgs: return "higgs";
    case ObjectKind::gauge: return "gauge";
    }
    return "?";
}

} // namespace

Problem parse_problem(const std::string& text) {
    ordered_json j = parse_text(text);
    try {
        Problem p;
        p.ctx = field_from_json(j.at("field"));
        p.n = j.at("n").get<std::size_t>();
        if (p.n < 1 || p.n > 8)
            fail(errc::parse_error, "rank out of range (1..8)");
        p.precision = j.at("precision").get<std::int64_t>();
        if (p.precision < 1 || p.precision > 4096)
            fail(errc::parse_error, "precision out of range");
        if (j.contains("theta")) {
            TameWeight w = weight_from_json(j["theta"]);
            if (w.n() != p.n)
                fail(errc::parse_error, "theta length does not match the rank");
            if (!w.is_tame(p.ctx->p))
                fail(errc::parse_error, "theta denominator is not coprime to p");
            p.theta = std::move(w);
        }
        p.kind = kind_from_string(j.at("kind").get<std::string>());
        p.matrix = matrix_from_json(j.at("matrix"), p.ctx, p.n, p.precision);
        return p;
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        fail(errc::parse_error, e.what());
    }
}

Problem parse_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        fail(errc::parse_error, "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str());
}

std::string emit_problem(const Problem& p) {
    ordered_json j;
    j["field"] = field_to_json(p.ctx);
    j["n"] = p.n;
    j["precision"] = p.precision;
    if (p.theta)
        j["theta"] = weight_to_json(*p.theta);
    j["kind"] = kind_to_string(p.kind);
    j["matrix"] = matrix_to_json(p.matrix);
    return j.dump(2) + "\n";
}

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string digest_of(const Problem& p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a:%016llx",
                  static_cast<unsigned long long>(fnv1a(emit_problem(p))));
    return buf;
}

namespace {

ordered_json step_to_json(const PipelineStep& s) {
    ordered_json j;
    j["label"] = s.label;
    switch (s.kind) {
    case PipelineStep::Kind::cover_lift:
        j["kind"] = "lift";
        j["degree"] = s.k;
        break;
    case PipelineStep::Kind::descend:
        j["kind"] = "descend";
        j["degree"] = s.k;
        break;
    case PipelineStep::Kind::gauge:
        j["kind"] = "gauge";
        if (s.g.is_z_power()) {
            j["flavor"] = "zpow";
            j["exps"] = s.g.exponents();
            j["prec"] = s.g.mat().min_prec();
            j["field"] = field_to_json(s.g.mat().ctx());
        } else {
            j["flavor"] = s.g.k_valued() ? "k" : "o";
            j["field"] = field_to_json(s.g.mat().ctx());
            j["matrix"] = matrix_to_json(s.g.mat());
        }
        break;
    }
    return j;
}

PipelineStep step_from_json(const ordered_json& j) {
    std::string kind = j.at("kind").get<std::string>();
    std::string label = j.at("label").get<std::string>();
    if (kind == "lift" || kind == "descend") {
        return {kind == "lift" ? PipelineStep::Kind::cover_lift : PipelineStep::Kind::descend,
                label, GaugeElement::z_power(FieldCtx::prime_field(2), {}, 1),
                j.at("degree").get<std::int64_t>()};
    }
    FieldCtxPtr ctx = field_from_json(j.at("field"));
    std::string flavor = j.at("flavor").get<std::string>();
    if (flavor == "zpow") {
        return {PipelineStep::Kind::gauge, label,
                GaugeElement::z_power(ctx, j.at("exps").get<std::vector<std::int64_t>>(),
                                      j.at("prec").get<std::int64_t>()),
                1};
    }
    std::size_t n = j.at("matrix").size();
    MatSeries m = matrix_from_json(j.at("matrix"), ctx, n, 1);
    return {PipelineStep::Kind::gauge, label,
            flavor == "k" ? GaugeElement::k_valued_general(std::move(m))
                          : GaugeElement::o_valued(std::move(m)),
            1};
}

} // namespace

std::string emit_certificate(const Certificate& c) {
    const NahcResult& r = c.result;
    ordered_json j;
    j["format"] = "parhodge-certificate-v1";
    j["pipeline"] = c.pipeline;
    j["input_digest"] = c.input_digest;
    j["field"] = field_to_json(r.ctx);
    j["n"] = r.tau.rows();
    j["theta"] = weight_to_json(r.theta);
    j["d"] = r.d;
    j["zeta"] = r.zeta.coords();
    ordered_json steps = ordered_json::array();
    for (const auto& s : r.steps)
        steps.push_back(step_to_json(s));
    j["steps"] = std::move(steps);
    ordered_json out;
    out["tau"] = const_to_json(r.tau);
    out["theta_tau"] = weight_to_json(r.theta_tau);
    out["target_weight"] = weight_to_json(r.target_weight);
    out["phi"] = matrix_to_json(r.phi.phi);
    j["outputs"] = std::move(out);
    j["replay"] = "ok";
    return j.dump(2) + "\n";
}

Certificate parse_certificate(const std::string& text) {
    ordered_json j = parse_text(text);
    try {
        if (j.value("format", "") != "parhodge-certificate-v1")
            fail(errc::parse_error, "not a parhodge certificate");
        Certificate c;
        c.pipeline = j.at("pipeline").get<std::string>();
        c.input_digest = j.at("input_digest").get<std::string>();
        NahcResult& r = c.result;
        r.ctx = field_from_json(j.at("field"));
        std::size_t n = j.at("n").get<std::size_t>();
        r.theta = weight_from_json(j.at("theta"));
        r.d = j.at("d").get<std::int64_t>();
        r.zeta = FieldElement(r.ctx, j.at("zeta").get<std::vector<std::uint32_t>>());
        for (const auto& s : j.at("steps"))
            r.steps.push_back(step_from_json(s));
        const auto& out = j.at("outputs");
        r.tau = const_from_json(out.at("tau"), r.ctx);
        r.theta_tau = weight_from_json(out.at("theta_tau"));
        r.target_weight = weight_from_json(out.at("target_weight"));
        r.phi = HiggsField{matrix_from_json(out.at("phi"), r.ctx, n, 1),
                           TwistTag::frobenius_twist};
        return c;
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        fail(errc::parse_error, e.what());
    }
}

Certificate parse_certificate_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        fail(errc::parse_error, "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_certificate(ss.str());
}

std::string emit_normal_form_certificate(const NormalFormCertificate& c) {
    ordered_json j;
    j["format"] = "parhodge-normal-form-v1";
    j["pipeline"] = "normalize";
    j["input_digest"] = c.input_digest;
    j["field"] = field_to_json(c.B.ctx());
    j["n"] = c.B.n();
    ordered_json steps = ordered_json::array();
    ordered_json step;
    step["label"] = "standard-form";
    step["kind"] = "gauge";
    step["flavor"] = c.g.k_valued() ? "k" : "o";
    step["field"] = field_to_json(c.g.mat().ctx());
    step["matrix"] = matrix_to_json(c.g.mat());
    steps.push_back(std::move(step));
    j["steps"] = std::move(steps);
    ordered_json out;
    out["B"] = matrix_to_json(c.B);
    out["tau_field"] = field_to_json(c.tau_ctx);
    out["tau"] = const_to_json(c.tau);
    j["outputs"] = std::move(out);
    j["replay"] = "ok";
    return j.dump(2) + "\n";
}

MatSeries matrix_from_json_text(const std::string& text) {
    ordered_json j = parse_text(text);
    FieldCtxPtr ctx = field_from_json(j.at("field"));
    std::size_t n = j.at("matrix").size();
    return matrix_from_json(j.at("matrix"), ctx, n, j.value("precision", 8));
}

} // namespace parhodge
