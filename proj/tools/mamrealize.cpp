// mamrealize: mammillary and PK-PD realization from the command line.
//
// JSON reports go to stdout, diagnostics to stderr. Exit codes:
//   0  positive realization found
//   1  usage, parse, or I/O error
//   2  realization exists but is not positive
//   3  no realization

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <variant>

#include <CLI11.hpp>

#include "mamreal/io.hpp"
#include "mamreal/mammillary.hpp"
#include "mamreal/pkpd.hpp"
#include "mamreal/statespace.hpp"
#include "mamreal/version.hpp"

namespace {

using namespace mamreal;
using io::json;

enum Exit : int { kPositive = 0, kError = 1, kNotPositive = 2, kNone = 3 };

int exit_code(Verdict v) {
    switch (v) {
        case Verdict::UniquePositiveRealization: return kPositive;
        case Verdict::UniqueRealization: return kNotPositive;
        case Verdict::NoRealization: return kNone;
    }
    return kError;
}

int exit_code(PkPdVerdict v) {
    switch (v) {
        case PkPdVerdict::PositiveRealizations: return kPositive;
        case PkPdVerdict::RealizationsOnly: return kNotPositive;
        case PkPdVerdict::NoRealization: return kNone;
    }
    return kError;
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

void warn(const std::string& msg) { std::cerr << "mamrealize: warning: " << msg << '\n'; }

int cmd_realize(const std::string& input, bool order3, const Tolerances<double>& tol) {
    const auto h = io::transfer_function_from_json(io::read_json_file(input));
    const auto report = order3 ? check_conditions3(h, tol) : check_conditions(h, tol);
    for (const auto& w : report.warnings) warn(w);
    if (report.verdict == Verdict::NoRealization) {
        emit(io::realization_report(h, tol, report));
        return kNone;
    }
    try {
        const auto r = order3 ? realize3_detailed(h, tol) : realize_detailed(h, tol);
        emit(io::realization_report(h, tol, r));
        return exit_code(r.report.verdict);
    } catch (const VerificationFailed& e) {
        auto out = io::realization_report(h, tol, report);
        out["verification"] = {{"coefficient_residual", e.residual()}, {"tolerance", tol.verify}, {"error", e.what()}};
        emit(out);
        std::cerr << "mamrealize: " << e.what() << '\n';
        return kNone;
    }
}

int cmd_pkpd(const std::string& input, std::optional<double> ref_ke0, const Tolerances<double>& tol) {
    const auto h = io::transfer_function_from_json(io::read_json_file(input));
    const auto check = check_conditions_pkpd(h, tol);
    for (const auto& w : check.global.warnings) warn(w);
    if (check.verdict == PkPdVerdict::NoRealization) {
        auto out = io::report_header(h, tol);
        out.update(io::to_json(check));
        emit(out);
        return kNone;
    }
    const auto e = realize_pkpd(h, ref_ke0, tol);
    emit(io::enumeration_report(h, tol, e));
    return e.accepted_count() > 0 ? kPositive : kNone;
}

// Reads a params file, relabelling mammillary peripherals into increasing
// k_to_center order when needed.
io::AnyParams load_params(const std::string& path, std::vector<std::string>& warnings) {
    auto any = io::params_from_json(io::read_json_file(path));
    if (auto* p = std::get_if<MammillaryParamsd>(&any)) {
        const auto o = canonical_order(*p);
        if (o.reordered) {
            std::string perm;
            for (auto i : o.permutation) perm += (perm.empty() ? "" : ",") + std::to_string(i + 2);
            warnings.push_back("peripheral compartments relabelled to increasing k_to_center; new order of input compartments: " +
                               perm);
        }
        *p = o.params;
    } else {
        validate(std::get<PkPdParamsd>(any));
    }
    return any;
}

StateSpaceModeld build(const io::AnyParams& any) {
    return std::visit([](const auto& p) -> StateSpaceModeld {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, MammillaryParamsd>)
            return build_mammillary(p);
        else
            return build_pkpd(p);
    }, any);
}

int cmd_forward(const std::string& input) {
    std::vector<std::string> warnings;
    const auto params = load_params(input, warnings);
    for (const auto& w : warnings) warn(w);
    auto out = io::to_json(transfer_function(build(params)));
    if (!warnings.empty()) out["warnings"] = warnings;
    emit(out);
    return 0;
}

int cmd_simulate(const std::string& input, double horizon, double dt, const std::string& out_path) {
    std::vector<std::string> warnings;
    const auto params = load_params(input, warnings);
    for (const auto& w : warnings) warn(w);
    const auto traj = simulate_impulse(build(params), horizon, dt);
    if (out_path.empty() || out_path == "-") {
        io::write_csv(std::cout, traj);
        return 0;
    }
    std::ofstream out(out_path);
    if (!out) throw io::ParseError("cannot write " + out_path);
    io::write_csv(out, traj);
    return out ? 0 : kError;
}

int cmd_check(const std::string& input, const std::string& mode, const Tolerances<double>& tol) {
    const auto h = io::transfer_function_from_json(io::read_json_file(input));
    std::string m = mode;
    if (m == "auto") m = h.order() == 4 && h.relative_degree() == 2 ? "pkpd" : "mammillary";
    auto out = io::report_header(h, tol);
    out["mode"] = m;
    if (m == "pkpd") {
        const auto r = check_conditions_pkpd(h, tol);
        out.update(io::to_json(r));
        emit(out);
        return exit_code(r.verdict);
    }
    const auto r = m == "order3" ? check_conditions3(h, tol) : check_conditions(h, tol);
    out.update(io::to_json(r));
    emit(out);
    return exit_code(r.verdict);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mammillary and PK-PD compartmental realization of rational transfer functions"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);
    app.require_subcommand(1);

    Tolerances<double> tol;
    auto positive = CLI::PositiveNumber;
    app.add_option("--tol-im", tol.imag, "relative imaginary-part tolerance for real roots")
        ->envname("MAMREALIZE_TOL_IM")->check(positive)->capture_default_str();
    app.add_option("--tol-sep", tol.separation, "relative separation below which roots coincide")
        ->envname("MAMREALIZE_TOL_SEP")->check(positive)->capture_default_str();
    app.add_option("--tol-verify", tol.verify, "coefficientwise round-trip tolerance")
        ->envname("MAMREALIZE_TOL_VERIFY")->check(positive)->capture_default_str();

    std::string input;
    auto* realize = app.add_subcommand("realize", "mammillary realization of a transfer function");
    bool order3 = false;
    realize->add_option("input", input, "transfer function JSON")->required();
    realize->add_flag("--order3", order3, "use the closed-form three-compartment checker");

    auto* pkpd = app.add_subcommand("pkpd", "enumerate PK-PD realizations with an effect-site filter");
    std::optional<double> ref_ke0;
    pkpd->add_option("input", input, "order-4 transfer function JSON")->required();
    pkpd->add_option("--ref-ke0", ref_ke0, "select the accepted branch with ke0 closest to this value");

    auto* forward = app.add_subcommand("forward", "transfer function of a parameter file");
    forward->add_option("input", input, "mammillary or pkpd params JSON")->required();

    auto* simulate = app.add_subcommand("simulate", "impulse response as CSV");
    double horizon = 0, dt = 1;
    std::string out_path;
    simulate->add_option("input", input, "mammillary or pkpd params JSON")->required();
    simulate->add_option("--T", horizon, "horizon in seconds")->required();
    simulate->add_option("--dt", dt, "time step in seconds")->capture_default_str();
    simulate->add_option("--out", out_path, "CSV output path (default stdout)");

    auto* check = app.add_subcommand("check", "condition report without computing parameters");
    std::string mode = "auto";
    check->add_option("input", input, "transfer function JSON")->required();
    check->add_option("--mode", mode, "checker to run")
        ->check(CLI::IsMember({"auto", "mammillary", "order3", "pkpd"}))
        ->capture_default_str();

    for (auto* sub : {realize, pkpd, forward, simulate, check}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kError;
    }

    try {
        if (*realize) return cmd_realize(input, order3, tol);
        if (*pkpd) return cmd_pkpd(input, ref_ke0, tol);
        if (*forward) return cmd_forward(input);
        if (*simulate) return cmd_simulate(input, horizon, dt, out_path);
        if (*check) return cmd_check(input, mode, tol);
    } catch (const std::exception& e) {
        std::cerr << "mamrealize: " << e.what() << '\n';
        return kError;
    }
    return kError;
}
