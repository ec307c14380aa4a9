#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fpp {

// Invalid family, law or experiment parameters. Carries every problem found,
// not only the first.
class config_error : public std::invalid_argument {
public:
    explicit config_error(std::vector<std::string> problems)
        : std::invalid_argument(join(problems)), problems_(std::move(problems)) {}
    explicit config_error(const std::string& problem)
        : config_error(std::vector<std::string>{problem}) {}

    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    static std::string join(const std::vector<std::string>& problems) {
        std::string out;
        for (const auto& p : problems) {
            if (!out.empty()) out += "; ";
            out += p;
        }
        return out;
    }

    std::vector<std::string> problems_;
};

// A vertex budget, settled-vertex cap or enumeration guard was exceeded.
class resource_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A vertex key that does not decode under its family's encoding.
class decode_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A caller broke an operation's precondition (e.g. an a.s. bound was
// requested from a law that has none).
class contract_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// An internal invariant was observed to fail at run time.
class invariant_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fpp
