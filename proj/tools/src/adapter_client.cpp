#include "adapter_client.hpp"

#include <sstream>

#include "ivalkit/errors.hpp"
#include "ivalkit/hexfloat.hpp"

namespace ivalkit::cli {

std::optional<Level> AdapterInfo::claim_floor(const std::set<Fn>& fns) const {
    std::optional<Level> floor;
    for (Fn f : fns) {
        const auto it = modes.find(f);
        if (it == modes.end()) return std::nullopt;
        if (!floor || static_cast<int>(it->second) < static_cast<int>(*floor))
            floor = it->second;
    }
    return floor;
}

AdapterHandle::AdapterHandle(std::string command, std::chrono::milliseconds timeout)
    : command_(std::move(command)), timeout_(timeout) {
    proc_ = std::make_unique<Subprocess>(command_);
    if (!proc_->write_line("HELLO ivalkit 1"))
        throw Error("adapter handshake: cannot write to '" + command_ + "'");
    bool ready = false, saw_ident = false;
    while (!ready) {
        const auto line = proc_->read_line(timeout_);
        if (!line) throw Error("adapter handshake: no response from '" + command_ + "'");
        std::istringstream is(*line);
        std::string key;
        is >> key;
        if (key == "ADAPTER") {
            is >> info_.name >> info_.version;
            saw_ident = true;
        } else if (key == "FORMAT") {
            std::string fmt;
            is >> fmt;
            if (!parse_format(fmt)) throw Error("adapter handshake: bad format " + fmt);
            info_.formats.insert(fmt);
        } else if (key == "FUNCTION") {
            std::string fn, mode;
            is >> fn >> mode;
            const auto f = parse_fn(fn);
            const auto m = parse_level(mode);
            if (!f || !m)
                throw Error("adapter handshake: bad FUNCTION line '" + *line + "'");
            info_.modes[*f] = *m;
        } else if (key == "REENTRANT") {
            std::string yn;
            is >> yn;
            info_.reentrant = (yn == "yes");
        } else if (key == "READY") {
            ready = true;
        } else {
            throw Error("adapter handshake: unexpected line '" + *line + "'");
        }
    }
    if (!saw_ident || info_.formats.empty() || info_.modes.empty())
        throw Error("adapter handshake: incomplete capability declaration");
}

AdapterHandle::~AdapterHandle() {
    if (proc_) proc_->write_line("BYE");
}

EvalResult AdapterHandle::eval(const TestingPair& pair) {
    if (broken_) return EvalResult::failed("adapter pipe already broken");
    std::ostringstream req;
    req << "EVAL " << fn_name(pair.f) << " " << pair.fmt.name();
    for (const Interval& a : pair.args) req << " " << format_interval_hex(a);
    if (!proc_->write_line(req.str())) {
        broken_ = true;
        return EvalResult::failed("write failed (broken pipe)");
    }
    const auto line = proc_->read_line(timeout_);
    if (!line) {
        broken_ = true;  // a stuck or dead adapter cannot be re-synchronized
        return EvalResult::failed("timeout or EOF awaiting response");
    }
    std::istringstream is(*line);
    std::string key;
    is >> key;
    if (key == "ERR") {
        std::string rest;
        std::getline(is, rest);
        return EvalResult::failed("adapter error:" + rest);
    }
    if (key != "RES") return EvalResult::failed("malformed response '" + *line + "'");
    std::string ivtok;
    is >> ivtok;
    std::string err;
    const auto iv = parse_interval_hex(ivtok, pair.fmt, &err);
    if (!iv) return EvalResult::failed("unparseable interval '" + ivtok + "': " + err);
    return EvalResult::ok(*iv);
}

} // namespace ivalkit::cli
