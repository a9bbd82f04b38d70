#include "subprocess.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <stdexcept>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

namespace ivalkit::cli {

Subprocess::Subprocess(const std::string& shell_command) {
    int to_child[2], from_child[2];
    if (pipe(to_child) != 0) throw std::runtime_error("pipe() failed");
    if (pipe(from_child) != 0) {
        close(to_child[0]);
        close(to_child[1]);
        throw std::runtime_error("pipe() failed");
    }
    pid_ = fork();
    if (pid_ < 0) throw std::runtime_error("fork() failed");
    if (pid_ == 0) {
        // Own process group, so teardown can reap helpers the command spawns.
        setpgid(0, 0);
        dup2(to_child[0], STDIN_FILENO);
        dup2(from_child[1], STDOUT_FILENO);
        close(to_child[0]);
        close(to_child[1]);
        close(from_child[0]);
        close(from_child[1]);
        execl("/bin/sh", "sh", "-c", shell_command.c_str(), nullptr);
        _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    in_fd_ = to_child[1];
    out_fd_ = from_child[0];
    // Writes to a dead child must surface as errors, not signals.
    signal(SIGPIPE, SIG_IGN);
}

Subprocess::~Subprocess() {
    close_stdin();
    if (out_fd_ >= 0) close(out_fd_);
    if (pid_ > 0) {
        int status = 0;
        // Give the child a moment to exit on EOF, then escalate to the whole
        // process group so stray grandchildren release their pipe ends too.
        bool reaped = false;
        for (int i = 0; i < 20 && !reaped; ++i) {
            reaped = waitpid(pid_, &status, WNOHANG) == pid_;
            if (!reaped) usleep(10000);
        }
        if (!reaped) {
            kill(-pid_, SIGTERM);
            for (int i = 0; i < 50 && !reaped; ++i) {
                reaped = waitpid(pid_, &status, WNOHANG) == pid_;
                if (!reaped) usleep(10000);
            }
        }
        if (!reaped) {
            kill(-pid_, SIGKILL);
            waitpid(pid_, &status, 0);
        }
        kill(-pid_, SIGKILL);  // sweep any leftover group members
    }
}

bool Subprocess::alive() const {
    if (pid_ <= 0) return false;
    return waitpid(pid_, nullptr, WNOHANG) == 0;
}

void Subprocess::close_stdin() {
    if (in_fd_ >= 0) {
        close(in_fd_);
        in_fd_ = -1;
    }
}

bool Subprocess::write_line(const std::string& line) {
    if (in_fd_ < 0) return false;
    std::string payload = line;
    payload.push_back('\n');
    std::size_t off = 0;
    while (off < payload.size()) {
        const ssize_t n = write(in_fd_, payload.data() + off, payload.size() - off);
        if (n < 0) {
            if (errno == EINTR) continue;
            return false;
        }
        off += static_cast<std::size_t>(n);
    }
    return true;
}

std::optional<std::string> Subprocess::read_line(std::chrono::milliseconds timeout) {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
        const std::size_t nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return line;
        }
        const auto now = std::chrono::steady_clock::now();
        if (now >= deadline) return std::nullopt;
        const auto left =
            std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now);
        pollfd pfd{out_fd_, POLLIN, 0};
        const int pr = poll(&pfd, 1, static_cast<int>(left.count()));
        if (pr <= 0) {
            if (pr < 0 && errno == EINTR) continue;
            return std::nullopt;  // timeout
        }
        char chunk[4096];
        const ssize_t n = read(out_fd_, chunk, sizeof chunk);
        if (n <= 0) {
            if (n < 0 && errno == EINTR) continue;
            return std::nullopt;  // EOF or error
        }
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

} // namespace ivalkit::cli
