#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "zpf/constants.hpp"
#include "zpf/field_core.hpp"

namespace zpflab {

using json = nlohmann::ordered_json;

/// Malformed or invalid configuration; exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reads a JSON object while recording every consumed key and the value actually used.
/// finish() rejects keys that were never read.
class Params {
public:
    Params(json source, std::string path);

    double number(const std::string& key, double fallback);
    /// Number restricted to [lo, hi].
    double number(const std::string& key, double fallback, double lo, double hi);
    /// Number strictly above lo.
    double positive(const std::string& key, double fallback, double lo = 0.0);
    std::int64_t integer(const std::string& key, std::int64_t fallback, std::int64_t lo, std::int64_t hi);
    bool flag(const std::string& key, bool fallback);
    std::string choice(const std::string& key, const std::string& fallback, std::initializer_list<const char*> options);
    zpf::Vec3 vec3(const std::string& key, const zpf::Vec3& fallback);
    std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback);
    /// Nested object; missing means empty.
    Params& child(const std::string& key);

    /// Throws ConfigError naming the first unread key.
    void finish() const;
    /// Every key with the value used, defaults included.
    [[nodiscard]] json echo() const;

private:
    const json* find(const std::string& key);
    [[nodiscard]] std::string name(const std::string& key) const;

    json source_;
    json echo_ = json::object();
    std::string path_;
    std::set<std::string> used_;
    std::vector<std::pair<std::string, std::unique_ptr<Params>>> children_;
};

/// Effective experiment configuration.
struct RunConfig {
    std::string experiment;
    std::uint64_t seed = 0;
    std::string output;
    std::string units = "natural";
    json parameters = json::object();

    [[nodiscard]] zpf::PhysicalConstants constants() const;
};

/// Parses the top level of a config document. `experiment` must match when present.
RunConfig parse_config(const json& doc, const std::string& experiment);
json read_json_file(const std::filesystem::path& path);

/// Files written during a run; the manifest carries sizes and SHA-256 digests.
class OutputDir {
public:
    explicit OutputDir(std::filesystem::path root);

    [[nodiscard]] std::filesystem::path path(const std::string& name) const { return root_ / name; }
    /// Registers a written file.
    void add(const std::string& name);
    void write_text(const std::string& name, const std::string& text);
    [[nodiscard]] json manifest() const;

private:
    std::filesystem::path root_;
    std::vector<std::string> files_;
};

/// Comma-separated table with a header row; numbers in shortest round-trip form.
class Csv {
public:
    explicit Csv(std::vector<std::string> header);
    Csv& row(std::initializer_list<double> values);
    Csv& row(const std::string& label, std::initializer_list<double> values);
    [[nodiscard]] std::string str() const { return text_; }

private:
    std::size_t columns_;
    std::string text_;
};

/// Two whitespace-separated columns, one point per line.
std::string series(const std::vector<double>& x, const std::vector<double>& y);
std::string format_number(double v);
std::string sha256_file(const std::filesystem::path& p);

}  // namespace zpflab
