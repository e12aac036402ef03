#include "parisian/job.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "parisian/asympt.hpp"
#include "parisian/errors.hpp"
#include "parisian/parisian.hpp"

namespace parisian::job {

using json = nlohmann::ordered_json;

namespace {

const std::pair<Command, const char*> kCommands[] = {
    {Command::Ruin, "ruin"},          {Command::Classical, "classical"},       {Command::Constant, "constant"},
    {Command::AsymptCramer, "asympt-cramer"}, {Command::AsymptConv, "asympt-conv"}, {Command::Simulate, "simulate"},
    {Command::Sweep, "sweep"},        {Command::Scale, "scale"},
};

template <class T>
T get(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw DomainError(std::string("field '") + key + "' has the wrong type");
    }
}

const json& require(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw DomainError(std::string("missing field '") + key + "'");
    return j.at(key);
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
    if (!j.is_object()) throw DomainError(std::string(where) + " must be an object");
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || item.key() == a;
        if (!ok) throw DomainError("unknown field '" + item.key() + "' in " + where);
    }
}

ClaimDistribution parse_claims(const json& j) {
    const auto law = get<std::string>(j, "law", "");
    if (law == "exponential") {
        check_keys(j, {"law", "rate"}, "claims");
        return ClaimDistribution::exponential(require(j, "rate").get<double>());
    }
    if (law == "mixture") {
        check_keys(j, {"law", "weights", "rates"}, "claims");
        return ClaimDistribution::mixture(require(j, "weights").get<std::vector<double>>(),
                                          require(j, "rates").get<std::vector<double>>());
    }
    if (law == "pareto") {
        check_keys(j, {"law", "shape", "scale"}, "claims");
        return ClaimDistribution::pareto(require(j, "shape").get<double>(), require(j, "scale").get<double>());
    }
    throw DomainError("claims.law must be exponential, mixture or pareto");
}

ModelSpec parse_model(const json& j) {
    check_keys(j, {"premium", "intensity", "claims", "sigma", "stable"}, "model");
    std::optional<ClaimDistribution> claims;
    if (j.contains("claims")) claims = parse_claims(j.at("claims"));
    std::optional<StableComponent> stable;
    if (j.contains("stable")) {
        const auto& s = j.at("stable");
        check_keys(s, {"c", "alpha"}, "stable");
        stable = StableComponent{require(s, "c").get<double>(), require(s, "alpha").get<double>()};
    }
    return ModelSpec(require(j, "premium").get<double>(), get<double>(j, "intensity", 0.0), claims,
                     get<double>(j, "sigma", 0.0), stable);
}

void parse_numerics(const json& j, RunSpec& spec) {
    check_keys(j, {"inversion", "quadrature", "mc"}, "numerics");
    if (j.contains("inversion")) {
        const auto& v = j.at("inversion");
        check_keys(v, {"method", "terms", "cross_check"}, "inversion");
        const auto method = get<std::string>(v, "method", "gaver-stehfest");
        if (method == "gaver-stehfest") {
            spec.inversion.method = GaverStehfest{get<int>(v, "terms", 16)};
        } else if (method == "talbot") {
            spec.inversion.method = TalbotFixed{get<int>(v, "terms", 24)};
        } else {
            throw DomainError("inversion.method must be gaver-stehfest or talbot");
        }
        spec.inversion.cross_check = get<bool>(v, "cross_check", false);
    }
    if (j.contains("quadrature")) {
        const auto& v = j.at("quadrature");
        check_keys(v, {"rel_tol", "abs_tol", "max_subdivisions"}, "quadrature");
        spec.quadrature.rel_tol = get<double>(v, "rel_tol", spec.quadrature.rel_tol);
        spec.quadrature.abs_tol = get<double>(v, "abs_tol", spec.quadrature.abs_tol);
        spec.quadrature.max_subdivisions = get<int>(v, "max_subdivisions", spec.quadrature.max_subdivisions);
    }
    if (j.contains("mc")) {
        const auto& v = j.at("mc");
        check_keys(v, {"n_paths", "seed", "upper_barrier", "dt", "max_time", "richardson", "execution", "threads"}, "mc");
        auto& c = spec.mc;
        c.n_paths = get<std::uint64_t>(v, "n_paths", c.n_paths);
        c.seed = get<std::uint64_t>(v, "seed", c.seed);
        c.upper_barrier = get<double>(v, "upper_barrier", c.upper_barrier);
        c.dt = get<double>(v, "dt", c.dt);
        c.max_time = get<double>(v, "max_time", c.max_time);
        c.richardson = get<bool>(v, "richardson", c.richardson);
        c.threads = get<int>(v, "threads", c.threads);
        const auto ex = get<std::string>(v, "execution", "parallel");
        if (ex != "parallel" && ex != "serial") throw DomainError("mc.execution must be parallel or serial");
        c.execution = ex == "serial" ? mc::Execution::Serial : mc::Execution::Parallel;
    }
}

std::string number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

json diagnostics_json(const Diagnostics& d) {
    json out = json::object();
    for (const auto& [k, v] : d) out[k] = v;
    return out;
}

json parisian_json(double x, double zeta, const ParisianResult& r) {
    return json{{"x", x},
                {"zeta", zeta},
                {"probability", r.probability},
                {"route", to_string(r.route)},
                {"err_est", r.err_est},
                {"constant_used", r.constant_used},
                {"diagnostics", diagnostics_json(r.diagnostics)}};
}

json estimate_json(double x, double zeta, const mc::MCEstimate& e) {
    return json{{"x", x},
                {"zeta", zeta},
                {"p_hat", e.p_hat},
                {"stderr", e.stderr_},
                {"n_paths", e.n_paths},
                {"truncation_bound", e.truncation_bound},
                {"bias_estimate", e.bias_estimate},
                {"killed", e.killed},
                {"censored", e.censored},
                {"dt", e.dt_used},
                {"discretization_note", e.discretization_note}};
}

std::vector<std::string> csv_columns(Command c) {
    switch (c) {
        case Command::Ruin:
        case Command::Sweep: return {"x", "zeta", "probability", "route", "err_est", "constant_used", "status"};
        case Command::Classical: return {"x", "probability", "status"};
        case Command::Constant: return {"zeta", "probability", "route", "err_est", "status"};
        case Command::AsymptCramer:
            return {"x", "zeta", "asymptote", "gamma", "mu", "cramer_constant", "f_c", "constant_used", "status"};
        case Command::AsymptConv:
            return {"x", "zeta", "asymptote", "classical_asymptote", "f_e", "prefactor", "constant_used", "status"};
        case Command::Simulate:
            return {"x", "zeta", "p_hat", "stderr", "n_paths", "truncation_bound", "bias_estimate", "killed", "censored",
                    "status"};
        case Command::Scale: return {"q", "x", "W", "W_prime", "Z", "status"};
    }
    return {};
}

std::string csv_cell(const json& v) {
    if (v.is_null()) return "";
    if (v.is_number_float()) return number(v.get<double>());
    if (v.is_number()) return v.dump();
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
}

void write_artifact(const RunSpec& spec, const std::vector<json>& rows, std::ostream& out) {
    if (spec.format == "csv") {
        const auto cols = csv_columns(spec.command);
        for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
        out << "\n";
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < cols.size(); ++i)
                out << (i ? "," : "") << (r.contains(cols[i]) ? csv_cell(r.at(cols[i])) : "");
            out << "\n";
        }
        return;
    }
    json doc{{"command", to_string(spec.command)}, {"records", rows}};
    out << doc.dump(2) << "\n";
}

// Runs one row, converting failures into a status and an exit-code contribution.
class RowRunner {
public:
    explicit RowRunner(std::ostream& diag) : diag_(diag) {}

    void operator()(std::vector<json>& rows, json key, const std::function<json()>& body) {
        try {
            json r = body();
            r["status"] = "ok";
            rows.push_back(std::move(r));
            return;
        } catch (const NumericalError& e) {
            diag_ << "numerical failure in route " << e.route() << ": " << e.what() << "\n";
            key["status"] = std::string("numerical_error: ") + e.what();
            code_ = 3;
        } catch (const std::domain_error& e) {
            diag_ << "validation error: " << e.what() << "\n";
            key["status"] = std::string("domain_error: ") + e.what();
            if (code_ == 0) code_ = 2;
        } catch (const UsageError& e) {
            diag_ << "validation error: " << e.what() << "\n";
            key["status"] = std::string("usage_error: ") + e.what();
            if (code_ == 0) code_ = 2;
        }
        rows.push_back(std::move(key));
    }

    int code() const { return code_; }

private:
    std::ostream& diag_;
    int code_ = 0;
};

bool closed_form(const ModelSpec& m) { return m.is_cl_exponential() || m.is_pure_brownian(); }

}  // namespace

Command parse_command(const std::string& name) {
    for (const auto& [c, n] : kCommands)
        if (name == n) return c;
    throw DomainError("unknown command '" + name + "'");
}

std::string to_string(Command c) {
    for (const auto& [k, n] : kCommands)
        if (k == c) return n;
    return "?";
}

void RunSpec::validate() const {
    inversion.validate();
    quadrature.validate();
    mc.validate();
    if (format != "json" && format != "csv") throw DomainError("output.format must be json or csv");
    auto finite = [](const std::vector<double>& v, const char* name, bool positive) {
        for (double d : v)
            if (!std::isfinite(d) || d < 0.0 || (positive && d == 0.0))
                throw DomainError(std::string(name) + " values must be finite and " + (positive ? "> 0" : ">= 0"));
    };
    finite(x, "x", false);
    finite(zeta, "zeta", false);
    finite(q, "q", false);
    const bool needs_x = command != Command::Constant;
    const bool needs_zeta = command != Command::Classical && command != Command::Scale;
    if (needs_x && x.empty()) throw DomainError("x grid must be nonempty");
    if (needs_zeta && zeta.empty()) throw DomainError("zeta grid must be nonempty");
    if (command == Command::Scale && q.empty()) throw DomainError("q grid must be nonempty");
    if (!(alpha_c >= 0.0 && std::isfinite(alpha_c))) throw DomainError("alpha_c must be finite and >= 0");
}

RunSpec parse_run_spec(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw DomainError(std::string("job file is not valid JSON: ") + e.what());
    }
    check_keys(j, {"model", "command", "x", "zeta", "q", "alpha_c", "numerics", "output"}, "job");
    try {
        RunSpec spec{parse_model(require(j, "model")), Command::Ruin, {}, {}, {}, 0.0, {}, {}, {}, "json", ""};
        spec.command = parse_command(require(j, "command").get<std::string>());
        spec.x = get<std::vector<double>>(j, "x", {});
        spec.zeta = get<std::vector<double>>(j, "zeta", {});
        spec.q = get<std::vector<double>>(j, "q", {});
        spec.alpha_c = get<double>(j, "alpha_c", 0.0);
        if (j.contains("numerics")) parse_numerics(j.at("numerics"), spec);
        if (j.contains("output")) {
            const auto& o = j.at("output");
            check_keys(o, {"format", "path"}, "output");
            spec.format = get<std::string>(o, "format", "json");
            spec.output_path = get<std::string>(o, "path", "");
        }
        spec.validate();
        return spec;
    } catch (const json::exception& e) {
        throw DomainError(std::string("job file has a malformed field: ") + e.what());
    }
}

int run(const RunSpec& spec, std::ostream& out, std::ostream& diag) {
    try {
        spec.validate();
    } catch (const std::exception& e) {
        diag << "validation error: " << e.what() << "\n";
        return 2;
    }
    ScaleContext ctx(spec.model, spec.inversion);
    ctx.quadrature = spec.quadrature;
    const auto& mcfg = spec.mc;
    std::vector<json> rows;
    RowRunner row(diag);

    switch (spec.command) {
        case Command::Ruin:
        case Command::Sweep: {
            // One constant per grace period, shared by every x.
            std::vector<std::optional<ConstantResult>> constants(spec.zeta.size());
            std::vector<std::string> failures(spec.zeta.size());
            if (!closed_form(spec.model))
                for (std::size_t k = 0; k < spec.zeta.size(); ++k) {
                    if (spec.zeta[k] == 0.0) continue;
                    std::vector<json> scratch;
                    row(scratch, json{}, [&] {
                        constants[k] = parisian_constant(ctx, spec.zeta[k], mcfg);
                        return json{};
                    });
                    failures[k] = scratch.front().value("status", "");
                }
            for (double x : spec.x)
                for (std::size_t k = 0; k < spec.zeta.size(); ++k) {
                    const double z = spec.zeta[k];
                    if (failures[k] != "ok" && !failures[k].empty()) {
                        rows.push_back(json{{"x", x}, {"zeta", z}, {"status", failures[k]}});
                        continue;
                    }
                    row(rows, json{{"x", x}, {"zeta", z}}, [&] {
                        const ParisianQuery q{x, z};
                        return parisian_json(x, z, constants[k] ? parisian_ruin_with_constant(ctx, q, *constants[k])
                                                                : parisian_ruin(ctx, q, mcfg));
                    });
                }
            break;
        }
        case Command::Classical:
            for (double x : spec.x)
                row(rows, json{{"x", x}}, [&] { return json{{"x", x}, {"probability", classical_ruin(ctx, x)}}; });
            break;
        case Command::Constant:
            for (double z : spec.zeta)
                row(rows, json{{"zeta", z}}, [&] {
                    const auto c = parisian_constant(ctx, z, mcfg);
                    return json{{"zeta", z},
                                {"probability", c.probability},
                                {"route", to_string(c.route)},
                                {"err_est", c.err_est},
                                {"diagnostics", diagnostics_json(c.diagnostics)}};
                });
            break;
        case Command::AsymptCramer:
            for (double z : spec.zeta) {
                std::optional<CramerData> cd;
                double constant = 0.0;
                std::vector<json> scratch;
                row(scratch, json{}, [&] {
                    constant = parisian_constant(ctx, z, mcfg).probability;
                    cd = cramer_constant(ctx, z, constant);
                    return json{};
                });
                for (double x : spec.x) {
                    if (!cd) {
                        rows.push_back(json{{"x", x}, {"zeta", z}, {"status", scratch.front().at("status")}});
                        continue;
                    }
                    rows.push_back(json{{"x", x},
                                        {"zeta", z},
                                        {"asymptote", cd->constant * std::exp(-cd->gamma * x)},
                                        {"gamma", cd->gamma},
                                        {"mu", cd->mu},
                                        {"cramer_constant", cd->constant},
                                        {"f_c", cd->f_c_at_zeta},
                                        {"constant_used", constant},
                                        {"diagnostics", diagnostics_json(cd->diagnostics)},
                                        {"status", "ok"}});
                }
            }
            break;
        case Command::AsymptConv:
            for (double z : spec.zeta)
                for (double x : spec.x)
                    row(rows, json{{"x", x}, {"zeta", z}}, [&] {
                        const double constant = parisian_constant(ctx, z, mcfg).probability;
                        const auto d = conv_eq_data(ctx, spec.alpha_c, z);
                        const double classical = classical_conv_asympt(ctx, spec.alpha_c, x);
                        json flags = d.condition_flags;
                        return json{{"x", x},
                                    {"zeta", z},
                                    {"asymptote", classical * (constant + (1.0 - constant) * d.f_e_at_zeta)},
                                    {"classical_asymptote", classical},
                                    {"f_e", d.f_e_at_zeta},
                                    {"prefactor", d.prefactor},
                                    {"constant_used", constant},
                                    {"condition_flags", flags}};
                    });
            break;
        case Command::Simulate:
            for (double x : spec.x)
                for (double z : spec.zeta)
                    row(rows, json{{"x", x}, {"zeta", z}},
                        [&] { return estimate_json(x, z, mc::estimate_parisian(spec.model, x, z, mcfg)); });
            break;
        case Command::Scale:
            for (double q : spec.q)
                for (double x : spec.x)
                    row(rows, json{{"q", q}, {"x", x}}, [&] {
                        return json{{"q", q},
                                    {"x", x},
                                    {"W", scale_w(ctx, q, x)},
                                    {"W_prime", x > 0.0 ? json(scale_w_derivative(ctx, q, x)) : json(nullptr)},
                                    {"Z", scale_z(ctx, q, x)}};
                    });
            break;
    }

    if (spec.output_path.empty()) {
        write_artifact(spec, rows, out);
    } else {
        std::ofstream f(spec.output_path);
        if (!f) {
            diag << "cannot open output file " << spec.output_path << "\n";
            return 2;
        }
        write_artifact(spec, rows, f);
    }
    return row.code();
}

int run_config(const std::string& config_path, const Overrides& ov, std::ostream& out, std::ostream& diag) {
    std::ifstream in(config_path);
    if (!in) {
        diag << "cannot read config " << config_path << "\n";
        return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        RunSpec spec = parse_run_spec(buf.str());
        if (ov.output_path) spec.output_path = *ov.output_path;
        if (ov.seed) spec.mc.seed = *ov.seed;
        if (ov.threads) spec.mc.threads = *ov.threads;
        return run(spec, out, diag);
    } catch (const std::domain_error& e) {
        diag << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        diag << "validation error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace parisian::job
