#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mamreal {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class ZeroPolynomial : public Error {
   public:
    ZeroPolynomial() : Error("operation undefined for the zero polynomial") {}
};

class NotARoot : public Error {
   public:
    NotARoot(double root, double remainder)
        : Error("value " + std::to_string(root) + " is not a root (remainder " + std::to_string(remainder) + ")"),
          root_(root), remainder_(remainder) {}

    double root() const { return root_; }
    double remainder() const { return remainder_; }

   private:
    double root_;
    double remainder_;
};

class ImproperTransferFunction : public Error {
   public:
    using Error::Error;
};

class ZeroNumerator : public Error {
   public:
    ZeroNumerator() : Error("transfer function numerator is the zero polynomial") {}
};

class PoleAtOrigin : public Error {
   public:
    PoleAtOrigin() : Error("transfer function has a pole at s = 0") {}
};

class WrongOrder : public Error {
   public:
    WrongOrder(long expected, long actual)
        : Error("expected a transfer function of order " + std::to_string(expected) + ", got order " +
                std::to_string(actual)),
          expected_(expected), actual_(actual) {}

    long expected() const { return expected_; }
    long actual() const { return actual_; }

   private:
    long expected_;
    long actual_;
};

/// Raised by the realization routines when their preconditions do not hold.
/// Carries the ids of the failed conditions; the full report is available
/// from the matching check_* function.
class ConditionsFailed : public Error {
   public:
    explicit ConditionsFailed(std::vector<std::string> failed)
        : Error(describe(failed)), failed_(std::move(failed)) {}

    const std::vector<std::string>& failed() const { return failed_; }

   private:
    static std::string describe(const std::vector<std::string>& failed) {
        std::string msg = "realization conditions not met:";
        for (const auto& id : failed) msg += " " + id;
        return msg;
    }

    std::vector<std::string> failed_;
};

class VerificationFailed : public Error {
   public:
    VerificationFailed(double residual, double tolerance)
        : Error("forward transfer function differs from the input (residual " + std::to_string(residual) +
                " > " + std::to_string(tolerance) + ")"),
          residual_(residual) {}

    double residual() const { return residual_; }

   private:
    double residual_;
};

class NonPositiveRates : public Error {
   public:
    using Error::Error;
};

class InvalidParameters : public Error {
   public:
    using Error::Error;
};

class InvalidArgument : public Error {
   public:
    using Error::Error;
};

}  // namespace mamreal
