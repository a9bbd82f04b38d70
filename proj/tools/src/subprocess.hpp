#pragma once

#include <chrono>
#include <optional>
#include <string>

#include <sys/types.h>

namespace ivalkit::cli {

/// Line-oriented child process over stdin/stdout pipes. The command runs
/// under /bin/sh -c. Reads are buffered and deadline-bounded; destruction
/// closes the pipes, escalates SIGTERM to SIGKILL, and reaps the child.
class Subprocess {
public:
    explicit Subprocess(const std::string& shell_command);
    ~Subprocess();
    Subprocess(const Subprocess&) = delete;
    Subprocess& operator=(const Subprocess&) = delete;

    bool alive() const;
    /// False when the pipe is broken.
    bool write_line(const std::string& line);
    /// One line without the newline; nullopt on timeout or EOF.
    std::optional<std::string> read_line(std::chrono::milliseconds timeout);
    void close_stdin();

private:
    pid_t pid_ = -1;
    int in_fd_ = -1;   // child's stdin (we write)
    int out_fd_ = -1;  // child's stdout (we read)
    std::string buffer_;
};

} // namespace ivalkit::cli
