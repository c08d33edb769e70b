#include "diagsynth/compiler_bridge.hpp"

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

extern char** environ;

namespace diagsynth {

namespace fs = std::filesystem;

CompilerBridge::CompilerBridge(fs::path executable) : exe_(std::move(executable)) {}

std::optional<CompilerBridge> CompilerBridge::from_env() {
    const char* value = std::getenv("MERMAID_CLI");
    if (!value || !*value) return std::nullopt;
    return CompilerBridge(value);
}

int CompilerBridge::compile(const fs::path& input, const fs::path& output, double scale) const {
    std::vector<std::string> args = {exe_.string(), "-i", input.string(), "-o", output.string(),
                                     "-s", std::to_string(scale)};
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    argv.push_back(nullptr);

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, "/dev/null", O_WRONLY, 0);
    posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, "/dev/null", O_WRONLY, 0);
    pid_t pid = 0;
    const int rc = posix_spawnp(&pid, argv[0], &actions, nullptr, argv.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    if (rc != 0) return 127;
    int status = 0;
    if (waitpid(pid, &status, 0) < 0) return 127;
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return 128 + (WIFSIGNALED(status) ? WTERMSIG(status) : 0);
}

ValidationVerdict CompilerBridge::validate(std::string_view source) const {
    static std::atomic<unsigned> counter{0};
    const auto stem = "diagsynth-" + std::to_string(::getpid()) + "-" + std::to_string(counter++);
    const auto dir = fs::temp_directory_path();
    const auto input = dir / (stem + ".mmd");
    const auto output = dir / (stem + ".svg");
    {
        std::ofstream out(input, std::ios::binary);
        out << source;
    }
    const int status = compile(input, output);
    std::error_code ec;
    fs::remove(input, ec);
    fs::remove(output, ec);
    if (status == 0) return ValidationVerdict::success();
    return ValidationVerdict::failure(0, "external compiler exited with status " + std::to_string(status));
}

ValidationVerdict validate_with(std::string_view source, const CompilerBridge* bridge) {
    return bridge ? bridge->validate(source) : validate(source);
}

}  // namespace diagsynth
