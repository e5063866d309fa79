#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace bsharp {

// Error carries a stable machine-readable id next to the human message.
// Ids in use: "invalid-params", "range", "series-budget-exceeded",
// "root-beyond-range", "internal-inconsistency", "integration-diverged",
// "z1-not-found", "unknown-pair", "io".
class Error : public std::runtime_error {
public:
    Error(std::string id, const std::string& what)
        : std::runtime_error(what), id_(std::move(id)) {}

    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

[[noreturn]] inline void fail(std::string id, const std::string& msg) {
    throw Error(std::move(id), msg);
}

} // namespace bsharp
