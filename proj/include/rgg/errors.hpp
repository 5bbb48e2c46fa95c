#pragma once

#include <stdexcept>
#include <string>

namespace rgg {

struct UnknownVertex : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegreeCapViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DisconnectionEvent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Rule-file / graph-file parsing. `kind` distinguishes structural errors the
// callers want to react to (see grammar tests).
struct ParseError : std::runtime_error {
    enum class Kind { Syntax, UndeclaredSpin, NonInjectiveGlue, NonpositiveRate };

    ParseError(Kind k, const std::string& msg, int line_no, int column_no)
        : std::runtime_error(msg + " (line " + std::to_string(line_no) + ", col " +
                             std::to_string(column_no) + ")"),
          kind(k), line(line_no), column(column_no) {}

    Kind kind;
    int line;
    int column;
};

struct BadEmbedding : std::logic_error {
    using std::logic_error::logic_error;
};

struct IndexDesync : std::logic_error {
    using std::logic_error::logic_error;
};

struct EventCapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AcceptanceTooLow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StateSpaceExplosion : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WindowTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoUntouchedVertex : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace rgg
