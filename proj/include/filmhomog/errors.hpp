#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace filmhomog {

/// Broad failure class; the CLI maps it onto an exit code.
enum class ErrorClass { Validation, Numerical };

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, const std::string& kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), class_(cls), kind_(kind) {}

    ErrorClass error_class() const noexcept { return class_; }
    const std::string& kind() const noexcept { return kind_; }

private:
    ErrorClass class_;
    std::string kind_;
};

#define FILMHOMOG_DEFINE_ERROR(Name, Class)                                  \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& what)                               \
            : Error(ErrorClass::Class, #Name, what) {}                       \
    }

FILMHOMOG_DEFINE_ERROR(NonPositiveJacobian, Numerical);
FILMHOMOG_DEFINE_ERROR(DegenerateFrame, Numerical);
FILMHOMOG_DEFINE_ERROR(NonInjectiveMap, Numerical);
FILMHOMOG_DEFINE_ERROR(SingularEvaluation, Numerical);
FILMHOMOG_DEFINE_ERROR(QuadratureNotConverged, Numerical);
FILMHOMOG_DEFINE_ERROR(InvalidCellChoice, Validation);
FILMHOMOG_DEFINE_ERROR(RegimeMismatch, Validation);
FILMHOMOG_DEFINE_ERROR(StandoffViolation, Validation);
FILMHOMOG_DEFINE_ERROR(UnsupportedModulation, Validation);
FILMHOMOG_DEFINE_ERROR(IncommensurateBoundary, Validation);
FILMHOMOG_DEFINE_ERROR(InvalidMotif, Validation);
FILMHOMOG_DEFINE_ERROR(ParseError, Validation);

#undef FILMHOMOG_DEFINE_ERROR

/// Carries every violation found in a config, not just the first.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> violations)
        : Error(ErrorClass::Validation, "ValidationError", join(violations)),
          violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out;
        for (const auto& s : v) {
            if (!out.empty()) out += "; ";
            out += s;
        }
        return out;
    }
    std::vector<std::string> violations_;
};

}  // namespace filmhomog
