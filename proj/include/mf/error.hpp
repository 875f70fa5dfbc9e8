#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

namespace mf {

enum class ErrorKind {
    UniverseMismatch,
    NoDecomposition,
    NotInDomain,
    NotACover,
    PreconditionFailed,
    BudgetExceeded,
    CertificationFailed,
    Unsupported,
    Parse,
};

const char* to_string(ErrorKind kind) noexcept;

/// Library error. `detail` carries whatever exact data the failing check
/// produced (a violating test set, a failing truncation, ...).
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, nlohmann::json detail = nullptr)
        : std::runtime_error(what), kind_(kind), detail_(std::move(detail)) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] const nlohmann::json& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    nlohmann::json detail_;
};

}  // namespace mf
