#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace hbc {

// Domain failures carry a stable kind string ("OrderExceedsLevel", ...) that
// the command line front end reports verbatim.
class domain_error : public std::runtime_error {
public:
    domain_error(std::string kind, const std::string& msg)
        : std::runtime_error(msg), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

[[noreturn]] inline void fail(const char* kind, const std::string& msg) {
    throw domain_error(kind, msg);
}

} // namespace hbc
