#include "peoa/external_objective.hpp"

#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cctype>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <thread>

extern char** environ;

namespace peoa {

namespace {

std::string errno_text(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

}  // namespace

std::string format_request(std::span<const double> x) {
    std::string out;
    char buf[64];
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) out.push_back(' ');
        const auto res = std::to_chars(buf, buf + sizeof buf, x[i]);
        out.append(buf, res.ptr);
    }
    return out;
}

double parse_reply(const std::string& line) {
    const char* first = line.data();
    const char* last = line.data() + line.size();
    while (first < last && std::isspace(static_cast<unsigned char>(*first))) ++first;
    while (last > first && std::isspace(static_cast<unsigned char>(last[-1]))) --last;
    if (first == last) throw Error(ErrorCode::ProtocolError, "empty reply from external objective");
    // from_chars rejects a leading '+', which some printf variants emit.
    if (*first == '+') ++first;
    double value = 0.0;
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last)
        throw Error(ErrorCode::ProtocolError, "malformed reply from external objective: '" + line + "'");
    return value;
}

ExternalProcess::ExternalProcess(std::string command, std::chrono::milliseconds timeout)
    : command_(std::move(command)), timeout_(timeout) {
    int sv[2];
    if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) != 0)
        throw Error(ErrorCode::ChildExit, errno_text("socketpair"));

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, sv[1], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, sv[1], STDOUT_FILENO);

    const char* argv[] = {"sh", "-c", command_.c_str(), nullptr};
    pid_t pid = -1;
    const int rc = ::posix_spawn(&pid, "/bin/sh", &actions, nullptr, const_cast<char* const*>(argv), environ);
    posix_spawn_file_actions_destroy(&actions);
    ::close(sv[1]);
    if (rc != 0) {
        ::close(sv[0]);
        throw Error(ErrorCode::ChildExit, "failed to spawn '" + command_ + "': " + std::strerror(rc));
    }
    fd_ = sv[0];
    pid_ = pid;
}

ExternalProcess::~ExternalProcess() { shutdown(); }

void ExternalProcess::shutdown() noexcept {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
    if (pid_ > 0) {
        // Closing the socket gives the child EOF; give it a moment, then kill.
        for (int i = 0; i < 50; ++i) {
            if (::waitpid(pid_, nullptr, WNOHANG) == pid_) {
                pid_ = -1;
                return;
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(2));
        }
        ::kill(pid_, SIGKILL);
        ::waitpid(pid_, nullptr, 0);
        pid_ = -1;
    }
}

void ExternalProcess::child_gone(const std::string& context) {
    std::string detail = "external objective '" + command_ + "' " + context;
    if (pid_ > 0) {
        int status = 0;
        if (::waitpid(pid_, &status, WNOHANG) == pid_) {
            if (WIFEXITED(status)) detail += " (exit status " + std::to_string(WEXITSTATUS(status)) + ")";
            if (WIFSIGNALED(status)) detail += " (killed by signal " + std::to_string(WTERMSIG(status)) + ")";
            pid_ = -1;
        }
    }
    throw Error(ErrorCode::ChildExit, detail);
}

void ExternalProcess::send_line(const std::string& line) {
    if (fd_ < 0) child_gone("is not running");
    std::size_t sent = 0;
    while (sent < line.size()) {
        const ssize_t n = ::send(fd_, line.data() + sent, line.size() - sent, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            child_gone("closed its input");
        }
        sent += static_cast<std::size_t>(n);
    }
}

std::string ExternalProcess::read_line() {
    const auto deadline = std::chrono::steady_clock::now() + timeout_;
    for (;;) {
        const auto nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            return line;
        }
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0) {
            // A late reply would desynchronize the stream; the child is dropped.
            shutdown();
            throw Error(ErrorCode::Timeout, "external objective '" + command_ + "' did not reply within " +
                                                std::to_string(timeout_.count()) + " ms");
        }
        pollfd pfd{fd_, POLLIN, 0};
        const int pr = ::poll(&pfd, 1, static_cast<int>(left.count()));
        if (pr < 0) {
            if (errno == EINTR) continue;
            throw Error(ErrorCode::ChildExit, errno_text("poll"));
        }
        if (pr == 0) continue;
        char chunk[4096];
        const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
        if (n < 0) {
            if (errno == EINTR) continue;
            child_gone("failed while replying");
        }
        if (n == 0) child_gone("exited before replying");
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

double ExternalProcess::request(std::span<const double> x) {
    send_line(format_request(x) + "\n");
    return parse_reply(read_line());
}

Objective external_objective(const std::string& command, std::chrono::milliseconds timeout) {
    auto proc = std::make_shared<ExternalProcess>(command, timeout);
    Objective obj;
    obj.function = [proc](std::span<const double> x) { return proc->request(x); };
    return obj;
}

}  // namespace peoa
