#pragma once

#include <algorithm>
#include <deque>
#include <string>
#include <string_view>
#include <vector>

#include "mamreal/tolerances.hpp"

namespace mamreal {

enum class Status { Pass, Fail, Skipped };

/// Whether a condition decides existence of a realization or positivity of it.
enum class Basis { Realization, Positivity };

enum class Verdict { UniqueRealization, UniquePositiveRealization, NoRealization };

inline const char* to_string(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Skipped: return "skipped";
    }
    return "?";
}

inline const char* to_string(Basis b) { return b == Basis::Realization ? "realization" : "positivity"; }

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::UniqueRealization: return "UNIQUE_REALIZATION";
        case Verdict::UniquePositiveRealization: return "UNIQUE_POSITIVE_REALIZATION";
        case Verdict::NoRealization: return "NO_REALIZATION";
    }
    return "?";
}

template <typename Scalar>
struct Witness {
    std::string name;
    Scalar value;
};

template <typename Scalar>
struct ConditionEntry {
    std::string id;
    Basis basis = Basis::Realization;
    Status status = Status::Skipped;
    std::string description;
    std::vector<Witness<Scalar>> witnesses;
    std::string detail;

    bool passed() const { return status == Status::Pass; }
};

template <typename Scalar>
struct ConditionReport {
    // deque: checkers hold references to earlier entries while appending.
    std::deque<ConditionEntry<Scalar>> entries;
    Verdict verdict = Verdict::NoRealization;
    Tolerances<Scalar> tolerances;
    /// Real numerator roots z_2 > z_3 > ... when they could be classified.
    std::vector<Scalar> numerator_roots;
    std::vector<std::string> warnings;

    const ConditionEntry<Scalar>* find(std::string_view id) const {
        auto it = std::find_if(entries.begin(), entries.end(), [&](const auto& e) { return e.id == id; });
        return it == entries.end() ? nullptr : &*it;
    }

    bool group_passed(Basis basis) const {
        return std::all_of(entries.begin(), entries.end(),
                           [&](const auto& e) { return e.basis != basis || e.passed(); });
    }

    std::vector<std::string> failed_ids() const {
        std::vector<std::string> out;
        for (const auto& e : entries)
            if (e.status == Status::Fail) out.push_back(e.id);
        return out;
    }

    /// Id of the first failed condition in evaluation order, or "".
    std::string first_failure() const {
        for (const auto& e : entries)
            if (e.status == Status::Fail) return e.id;
        return {};
    }
};

namespace detail {

template <typename Scalar>
ConditionEntry<Scalar>& add_entry(ConditionReport<Scalar>& r, std::string id, Basis basis, std::string description) {
    ConditionEntry<Scalar> e;
    e.id = std::move(id);
    e.basis = basis;
    e.description = std::move(description);
    r.entries.push_back(std::move(e));
    return r.entries.back();
}

inline Status status_of(bool ok) { return ok ? Status::Pass : Status::Fail; }

template <typename Scalar>
Verdict verdict_of(const ConditionReport<Scalar>& r) {
    if (!r.group_passed(Basis::Realization)) return Verdict::NoRealization;
    return r.group_passed(Basis::Positivity) ? Verdict::UniquePositiveRealization : Verdict::UniqueRealization;
}

}  // namespace detail

}  // namespace mamreal
