#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "mamreal/conditions.hpp"
#include "mamreal/errors.hpp"
#include "mamreal/mammillary.hpp"
#include "mamreal/params.hpp"
#include "mamreal/pkpd.hpp"
#include "mamreal/statespace.hpp"
#include "mamreal/tf.hpp"
#include "mamreal/tolerances.hpp"

// JSON and CSV formats for the command-line tool. Everything here is double
// precision; coefficient arrays are in descending powers of s.
namespace mamreal::io {

using json = nlohmann::ordered_json;

class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error("parse error: " + what) {}
};

using AnyParams = std::variant<MammillaryParamsd, PkPdParamsd>;

json read_json_file(const std::filesystem::path& path);

/// {"num": [...], "den": [...]}, normalized on read.
TransferFunctiond transfer_function_from_json(const json& j);
json to_json(const TransferFunctiond& h);

/// Dispatches on "kind": "mammillary" or "pkpd". Values are checked for
/// finiteness and shape only; ordering is left to the caller.
AnyParams params_from_json(const json& j);
json to_json(const MammillaryParamsd& p);
json to_json(const PkPdParamsd& p);

json to_json(const Tolerances<double>& tol);
json to_json(const ConditionReport<double>& r);
json to_json(const PkPdConditionReport<double>& r);

/// Common report header: tool, version, tolerances in effect, echoed input.
json report_header(const TransferFunctiond& h, const Tolerances<double>& tol);

json realization_report(const TransferFunctiond& h, const Tolerances<double>& tol,
                        const MammillaryRealization<double>& realization);
/// Report for an input whose conditions did not allow a realization.
json realization_report(const TransferFunctiond& h, const Tolerances<double>& tol, const ConditionReport<double>& r);
json enumeration_report(const TransferFunctiond& h, const Tolerances<double>& tol,
                        const PkPdEnumeration<double>& e);

/// Header "t,y,x1,...,xn", one row per sample, full precision.
void write_csv(std::ostream& os, const Trajectory<double>& traj);

}  // namespace mamreal::io
