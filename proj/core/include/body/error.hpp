#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace body {

// Base for every hard failure raised by the pipeline. HIL outcomes
// (unregistered MACs, non-conforming hostnames) are values, never errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class MalformedMac : public Error {
public:
    explicit MalformedMac(std::string raw)
        : Error("malformed MAC address: '" + raw + "'"), raw_(std::move(raw)) {}
    const std::string& raw() const noexcept { return raw_; }

private:
    std::string raw_;
};

class MalformedLine : public Error {
public:
    MalformedLine(std::string file, std::size_t line_no, const std::string& why)
        : Error(file + ":" + std::to_string(line_no) + ": " + why),
          file_(std::move(file)), line_no_(line_no) {}
    const std::string& file() const noexcept { return file_; }
    std::size_t line_no() const noexcept { return line_no_; }

private:
    std::string file_;
    std::size_t line_no_;
};

class DuplicateMac : public Error {
public:
    explicit DuplicateMac(const std::string& mac)
        : Error("duplicate MAC in registry: " + mac), mac_(mac) {}
    const std::string& mac() const noexcept { return mac_; }

private:
    std::string mac_;
};

class DuplicateSwitch : public Error {
public:
    explicit DuplicateSwitch(const std::string& id)
        : Error("switch appears more than once in topology map: " + id), id_(id) {}
    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

class OrphanServer : public Error {
public:
    explicit OrphanServer(const std::string& id)
        : Error("server parent switch not present in topology map: " + id), id_(id) {}
    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

class UnknownDialect : public Error {
public:
    explicit UnknownDialect(const std::string& name) : Error("unknown CLI dialect: " + name) {}
};

class ParseFailure : public Error {
public:
    ParseFailure(std::string section, std::size_t line_no, const std::string& why)
        : Error("cannot read " + section + " section at line " + std::to_string(line_no) + ": " + why),
          section_(std::move(section)), line_no_(line_no) {}
    const std::string& section() const noexcept { return section_; }
    std::size_t line_no() const noexcept { return line_no_; }

private:
    std::string section_;
    std::size_t line_no_;
};

class InvalidProfile : public Error {
public:
    using Error::Error;
};

class TransportUnavailable : public Error {
public:
    explicit TransportUnavailable(const std::string& switch_id, const std::string& why = {})
        : Error("transport unavailable for " + switch_id + (why.empty() ? "" : ": " + why)),
          switch_id_(switch_id) {}
    const std::string& switch_id() const noexcept { return switch_id_; }

private:
    std::string switch_id_;
};

class MissingProfile : public Error {
public:
    explicit MissingProfile(const std::string& switch_id)
        : Error("no persisted profile for switch " + switch_id), switch_id_(switch_id) {}
    const std::string& switch_id() const noexcept { return switch_id_; }

private:
    std::string switch_id_;
};

class AmbiguousUplink : public Error {
public:
    AmbiguousUplink(const std::string& switch_id, std::vector<std::string> tied)
        : Error("ambiguous uplink on " + switch_id), switch_id_(switch_id), tied_(std::move(tied)) {}
    const std::string& switch_id() const noexcept { return switch_id_; }
    // Ports sharing the maximal MAC count; empty when no port carries MACs.
    const std::vector<std::string>& tied_ports() const noexcept { return tied_; }

private:
    std::string switch_id_;
    std::vector<std::string> tied_;
};

class MalformedFeed : public Error {
public:
    using Error::Error;
};

class SwitchSetMismatch : public Error {
public:
    using Error::Error;
};

}  // namespace body
