#include "mamreal/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>

#include "mamreal/version.hpp"

namespace mamreal::io {

namespace {

// Non-finite values are written as null so the output stays valid JSON.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json numbers(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v[i]));
    return out;
}

json numbers(const std::vector<double>& v) {
    json out = json::array();
    for (double x : v) out.push_back(number(x));
    return out;
}

const json& field(const json& j, const char* key) {
    if (!j.is_object()) throw ParseError("expected a JSON object");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string("missing field \"") + key + "\"");
    return *it;
}

double real_value(const json& j, const char* what) {
    if (!j.is_number()) throw ParseError(std::string(what) + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ParseError(std::string(what) + " must be finite");
    return v;
}

Eigen::VectorXd real_array(const json& j, const char* what) {
    if (!j.is_array()) throw ParseError(std::string(what) + " must be an array of numbers");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = real_value(j[i], what);
    return v;
}

json entry_to_json(const ConditionEntry<double>& e) {
    json witnesses = json::array();
    for (const auto& w : e.witnesses) witnesses.push_back({{"name", w.name}, {"value", number(w.value)}});
    json out = {{"id", e.id},
                {"basis", to_string(e.basis)},
                {"status", to_string(e.status)},
                {"description", e.description},
                {"witnesses", witnesses}};
    if (!e.detail.empty()) out["detail"] = e.detail;
    return out;
}

json entries_to_json(const ConditionReport<double>& r) {
    json out = json::array();
    for (const auto& e : r.entries) out.push_back(entry_to_json(e));
    return out;
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

TransferFunctiond transfer_function_from_json(const json& j) {
    const auto num = real_array(field(j, "num"), "num");
    const auto den = real_array(field(j, "den"), "den");
    if (num.size() == 0 || den.size() == 0) throw ParseError("num and den must be non-empty");
    return TransferFunctiond::normalize(Polynomiald(num), Polynomiald(den));
}

json to_json(const TransferFunctiond& h) { return {{"num", numbers(h.num().coeffs())}, {"den", numbers(h.den().coeffs())}}; }

AnyParams params_from_json(const json& j) {
    const auto& kind = field(j, "kind");
    if (!kind.is_string()) throw ParseError("\"kind\" must be a string");
    const auto k = kind.get<std::string>();
    if (k == "mammillary") {
        MammillaryParamsd p;
        p.k10 = real_value(field(j, "k10"), "k10");
        p.k_to_center = real_array(field(j, "k_to_center"), "k_to_center");
        p.k_from_center = real_array(field(j, "k_from_center"), "k_from_center");
        if (p.k_to_center.size() != p.k_from_center.size())
            throw ParseError("k_to_center and k_from_center must have the same length");
        if (auto it = j.find("n"); it != j.end()) {
            if (!it->is_number_integer() || it->get<long>() != p.n())
                throw ParseError("n must equal 1 + length of k_to_center");
        }
        return p;
    }
    if (k == "pkpd") {
        PkPdParamsd p;
        p.k10 = real_value(field(j, "k10"), "k10");
        p.k12 = real_value(field(j, "k12"), "k12");
        p.k13 = real_value(field(j, "k13"), "k13");
        p.k21 = real_value(field(j, "k21"), "k21");
        p.k31 = real_value(field(j, "k31"), "k31");
        p.k1e_over_V1 = real_value(field(j, "k1e_over_V1"), "k1e_over_V1");
        p.ke0 = real_value(field(j, "ke0"), "ke0");
        return p;
    }
    throw ParseError("unknown kind \"" + k + "\" (expected \"mammillary\" or \"pkpd\")");
}

json to_json(const MammillaryParamsd& p) {
    return {{"kind", "mammillary"},
            {"n", p.n()},
            {"k10", number(p.k10)},
            {"k_to_center", numbers(p.k_to_center)},
            {"k_from_center", numbers(p.k_from_center)}};
}

json to_json(const PkPdParamsd& p) {
    return {{"kind", "pkpd"},          {"k10", number(p.k10)}, {"k12", number(p.k12)},
            {"k13", number(p.k13)},    {"k21", number(p.k21)}, {"k31", number(p.k31)},
            {"k1e_over_V1", number(p.k1e_over_V1)}, {"ke0", number(p.ke0)}};
}

json to_json(const Tolerances<double>& tol) {
    return {{"imag", tol.imag},     {"separation", tol.separation},     {"deflation", tol.deflation},
            {"verify", tol.verify}, {"nonzero_root", tol.nonzero_root}, {"monic", tol.monic},
            {"eigen", tol.eigen}};
}

json to_json(const ConditionReport<double>& r) {
    return {{"verdict", to_string(r.verdict)},
            {"conditions", entries_to_json(r)},
            {"numerator_roots", numbers(r.numerator_roots)},
            {"warnings", r.warnings}};
}

json to_json(const PkPdConditionReport<double>& r) {
    json branches = json::array();
    for (const auto& b : r.branches)
        branches.push_back(
            {{"z0", number(b.z0)}, {"multiplicity", b.multiplicity}, {"sign_pattern", entry_to_json(b.sign_pattern)}});
    return {{"verdict", to_string(r.verdict)},
            {"conditions", entries_to_json(r.global)},
            {"numerator_roots", numbers(r.global.numerator_roots)},
            {"branches", branches},
            {"warnings", r.global.warnings}};
}

json report_header(const TransferFunctiond& h, const Tolerances<double>& tol) {
    return {{"tool", kToolName}, {"version", kVersion}, {"tolerances", to_json(tol)}, {"input", to_json(h)}};
}

json realization_report(const TransferFunctiond& h, const Tolerances<double>& tol,
                        const MammillaryRealization<double>& realization) {
    json out = report_header(h, tol);
    out.update(to_json(realization.report));
    out["params"] = to_json(realization.params);
    out["verification"] = {{"coefficient_residual", number(realization.residual)}, {"tolerance", tol.verify}};
    return out;
}

json realization_report(const TransferFunctiond& h, const Tolerances<double>& tol, const ConditionReport<double>& r) {
    json out = report_header(h, tol);
    out.update(to_json(r));
    out["params"] = nullptr;
    return out;
}

json enumeration_report(const TransferFunctiond& h, const Tolerances<double>& tol,
                        const PkPdEnumeration<double>& e) {
    json out = report_header(h, tol);
    out.update(to_json(e.report));
    json branches = json::array();
    for (std::size_t i = 0; i < e.branches.size(); ++i) {
        const auto& b = e.branches[i];
        json jb = {{"z0", number(b.z0)},
                   {"multiplicity", b.multiplicity},
                   {"accepted", b.accepted},
                   {"candidate", to_json(b.candidate)},
                   {"sign_pattern", entry_to_json(e.report.branches[i].sign_pattern)}};
        if (b.accepted) {
            jb["params"] = to_json(*b.params);
            jb["verification"] = {{"coefficient_residual", number(b.residual)}, {"tolerance", tol.verify}};
        } else {
            jb["failed_condition"] = b.failed_condition;
        }
        branches.push_back(std::move(jb));
    }
    out["branches"] = branches;
    out["accepted_count"] = e.accepted_count();
    if (e.selected) out["selected"] = *e.selected;
    return out;
}

void write_csv(std::ostream& os, const Trajectory<double>& traj) {
    os << "t,y";
    for (Eigen::Index i = 0; i < traj.x.cols(); ++i) os << ",x" << (i + 1);
    os << '\n' << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (Eigen::Index k = 0; k < traj.t.size(); ++k) {
        os << traj.t[k] << ',' << traj.y[k];
        for (Eigen::Index i = 0; i < traj.x.cols(); ++i) os << ',' << traj.x(k, i);
        os << '\n';
    }
}

}  // namespace mamreal::io
