#pragma once

#include <filesystem>
#include <optional>
#include <string_view>

#include "diagsynth/mermaid.hpp"

namespace diagsynth {

/// Subprocess bridge to an external Mermaid compiler (e.g. mermaid-cli's
/// `mmdc`), invoked as `<exe> -i <input> -o <output> [-s <scale>]`.
class CompilerBridge {
public:
    explicit CompilerBridge(std::filesystem::path executable);

    // Reads MERMAID_CLI; nullopt when unset or empty.
    static std::optional<CompilerBridge> from_env();

    const std::filesystem::path& executable() const noexcept { return exe_; }

    // Exit status of the compiler (nonzero also when it could not be started).
    int compile(const std::filesystem::path& input, const std::filesystem::path& output,
                double scale = 1.0) const;

    // Writes the source to a temporary .mmd and compiles it to a scratch SVG.
    ValidationVerdict validate(std::string_view source) const;

private:
    std::filesystem::path exe_;
};

// Compiler verdict when a bridge is supplied, hermetic validator otherwise.
ValidationVerdict validate_with(std::string_view source, const CompilerBridge* bridge);

}  // namespace diagsynth
