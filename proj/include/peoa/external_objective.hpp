#pragma once

#include <chrono>
#include <memory>
#include <span>
#include <string>

#include "peoa/core_types.hpp"

namespace peoa {

/// Line protocol to a child process started with `/bin/sh -c <command>`:
/// the parent writes one line of space-separated decimals (shortest
/// round-trip form), the child answers with one line holding one decimal.
class ExternalProcess {
public:
    explicit ExternalProcess(std::string command, std::chrono::milliseconds timeout = std::chrono::seconds(30));
    ~ExternalProcess();

    ExternalProcess(const ExternalProcess&) = delete;
    ExternalProcess& operator=(const ExternalProcess&) = delete;

    /// Throws ProtocolError, Timeout or ChildExit. Non-finite replies are
    /// returned as-is; evaluate() rejects them.
    double request(std::span<const double> x);

    const std::string& command() const noexcept { return command_; }
    int pid() const noexcept { return pid_; }

private:
    void send_line(const std::string& line);
    std::string read_line();
    [[noreturn]] void child_gone(const std::string& context);
    void shutdown() noexcept;

    std::string command_;
    std::chrono::milliseconds timeout_;
    int fd_ = -1;
    int pid_ = -1;
    std::string buffer_;
};

/// Formats a vector as one request line (no trailing newline).
std::string format_request(std::span<const double> x);

/// Parses a reply line: exactly one decimal token, surrounding whitespace
/// allowed. Throws ProtocolError.
double parse_reply(const std::string& line);

/// Wraps a freshly spawned child as an Objective. Each returned objective owns
/// its own process, so concurrent runs need separate calls.
Objective external_objective(const std::string& command,
                             std::chrono::milliseconds timeout = std::chrono::seconds(30));

}  // namespace peoa
