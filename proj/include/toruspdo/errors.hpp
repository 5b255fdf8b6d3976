#pragma once

#include <stdexcept>
#include <string>

namespace toruspdo {

// All library failures derive from Error and carry a module-qualified code
// ("symbol_core.NonFiniteSample") so the CLI can report them uniformly.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct NonFiniteSample : Error {
    explicit NonFiniteSample(const std::string& w) : Error("symbol_core.NonFiniteSample", w) {}
};
struct WindowTooLarge : Error {
    explicit WindowTooLarge(const std::string& w, const std::string& mod = "symbol_core")
        : Error(mod + ".WindowTooLarge", w) {}
};
struct WindowTooSmall : Error {
    explicit WindowTooSmall(const std::string& w, const std::string& mod = "symbol_core")
        : Error(mod + ".WindowTooSmall", w) {}
};
struct WindowExhausted : Error {
    explicit WindowExhausted(const std::string& w, const std::string& mod = "symbol_core")
        : Error(mod + ".WindowExhausted", w) {}
};
struct WindowMismatch : Error {
    explicit WindowMismatch(const std::string& w, const std::string& mod = "assoc_matrix")
        : Error(mod + ".WindowMismatch", w) {}
};
struct InsufficientDecay : Error {
    explicit InsufficientDecay(const std::string& w) : Error("spectral.InsufficientDecay", w) {}
};
struct TrustedRegionEmpty : Error {
    explicit TrustedRegionEmpty(const std::string& w) : Error("spectral.TrustedRegionEmpty", w) {}
};
struct NonHermitianBlock : Error {
    explicit NonHermitianBlock(const std::string& w) : Error("spectral.NonHermitianBlock", w) {}
};
struct ConvergenceFailure : Error {
    explicit ConvergenceFailure(const std::string& w) : Error("spectral.ConvergenceFailure", w) {}
};
struct MikhlinFailed : Error {
    explicit MikhlinFailed(const std::string& w) : Error("spectral.MikhlinFailed", w) {}
};
struct ConfigError : Error {
    explicit ConfigError(const std::string& w, const std::string& mod = "cli")
        : Error(mod + ".ConfigError", w) {}
};
struct ParseError : Error {
    explicit ParseError(const std::string& w, const std::string& mod = "symbol_core")
        : Error(mod + ".ParseError", w) {}
};

} // namespace toruspdo
