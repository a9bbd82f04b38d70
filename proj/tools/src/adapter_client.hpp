#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <set>
#include <string>

#include "ivalkit/conformance.hpp"
#include "subprocess.hpp"

namespace ivalkit::cli {

struct AdapterInfo {
    std::string name;
    std::string version;
    std::set<std::string> formats;   // "b32", "b64"
    std::map<Fn, Level> modes;       // claimed mode per supported function
    bool reentrant = false;

    /// Weakest claimed mode across the given functions; nullopt when one of
    /// them is not supported at all.
    std::optional<Level> claim_floor(const std::set<Fn>& fns) const;
};

/// One adapter subprocess speaking the line protocol. The handshake runs in
/// the constructor and throws ivalkit::Error on any deviation; evaluation
/// faults after that are data (EvalResult::failed), so one bad response does
/// not void a suite.
class AdapterHandle {
public:
    AdapterHandle(std::string command,
                  std::chrono::milliseconds timeout = std::chrono::seconds(10));
    ~AdapterHandle();

    const AdapterInfo& info() const { return info_; }
    EvalResult eval(const TestingPair& pair);

private:
    std::string command_;
    std::chrono::milliseconds timeout_;
    std::unique_ptr<Subprocess> proc_;
    AdapterInfo info_;
    bool broken_ = false;
};

} // namespace ivalkit::cli
