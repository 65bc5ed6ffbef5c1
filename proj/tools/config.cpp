#include "config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <openssl/evp.h>

namespace zpflab {

namespace fs = std::filesystem;

Params::Params(json source, std::string path) : source_(std::move(source)), path_(std::move(path)) {
    if (source_.is_null()) source_ = json::object();
    if (!source_.is_object()) throw ConfigError("'" + (path_.empty() ? std::string("config") : path_) + "' must be an object");
}

std::string Params::name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

const json* Params::find(const std::string& key) {
    used_.insert(key);
    const auto it = source_.find(key);
    return it == source_.end() ? nullptr : &*it;
}

double Params::number(const std::string& key, double fallback) {
    const json* v = find(key);
    double out = fallback;
    if (v) {
        if (v->is_number())
            out = v->get<double>();
        else if (v->is_string() && (*v == "inf" || *v == "infinity"))
            out = std::numeric_limits<double>::infinity();
        else
            throw ConfigError("'" + name(key) + "' must be a number");
    }
    if (std::isnan(out)) throw ConfigError("'" + name(key) + "' is not a number");
    echo_[key] = std::isinf(out) ? json(out > 0 ? "inf" : "-inf") : json(out);
    return out;
}

double Params::number(const std::string& key, double fallback, double lo, double hi) {
    const double v = number(key, fallback);
    if (v < lo || v > hi) {
        std::ostringstream os;
        os << "'" << name(key) << "' = " << v << " is outside [" << lo << ", " << hi << "]";
        throw ConfigError(os.str());
    }
    return v;
}

double Params::positive(const std::string& key, double fallback, double lo) {
    const double v = number(key, fallback);
    if (!(v > lo)) {
        std::ostringstream os;
        os << "'" << name(key) << "' = " << v << " must be > " << lo;
        throw ConfigError(os.str());
    }
    return v;
}

std::int64_t Params::integer(const std::string& key, std::int64_t fallback, std::int64_t lo, std::int64_t hi) {
    const json* v = find(key);
    std::int64_t out = fallback;
    if (v) {
        if (v->is_number_integer()) {
            out = v->get<std::int64_t>();
        } else if (v->is_number_float() && std::trunc(v->get<double>()) == v->get<double>() &&
                   std::abs(v->get<double>()) < 9e15) {
            out = static_cast<std::int64_t>(v->get<double>());
        } else {
            throw ConfigError("'" + name(key) + "' must be an integer");
        }
    }
    if (out < lo || out > hi) {
        std::ostringstream os;
        os << "'" << name(key) << "' = " << out << " is outside [" << lo << ", " << hi << "]";
        throw ConfigError(os.str());
    }
    echo_[key] = out;
    return out;
}

bool Params::flag(const std::string& key, bool fallback) {
    const json* v = find(key);
    bool out = fallback;
    if (v) {
        if (!v->is_boolean()) throw ConfigError("'" + name(key) + "' must be true or false");
        out = v->get<bool>();
    }
    echo_[key] = out;
    return out;
}

std::string Params::choice(const std::string& key, const std::string& fallback,
                           std::initializer_list<const char*> options) {
    const json* v = find(key);
    std::string out = fallback;
    if (v) {
        if (!v->is_string()) throw ConfigError("'" + name(key) + "' must be a string");
        out = v->get<std::string>();
    }
    for (const char* o : options)
        if (out == o) {
            echo_[key] = out;
            return out;
        }
    std::string list;
    for (const char* o : options) list += (list.empty() ? "" : ", ") + std::string(o);
    throw ConfigError("'" + name(key) + "' = \"" + out + "\" is not one of: " + list);
}

zpf::Vec3 Params::vec3(const std::string& key, const zpf::Vec3& fallback) {
    const json* v = find(key);
    zpf::Vec3 out = fallback;
    if (v) {
        if (!v->is_array() || v->size() != 3)
            throw ConfigError("'" + name(key) + "' must be an array of three numbers");
        for (std::size_t i = 0; i < 3; ++i) {
            if (!(*v)[i].is_number()) throw ConfigError("'" + name(key) + "' must be an array of three numbers");
            out[i] = (*v)[i].get<double>();
        }
    }
    echo_[key] = out;
    return out;
}

std::vector<double> Params::numbers(const std::string& key, const std::vector<double>& fallback) {
    const json* v = find(key);
    std::vector<double> out = fallback;
    if (v) {
        if (!v->is_array()) throw ConfigError("'" + name(key) + "' must be an array of numbers");
        out.clear();
        for (const auto& x : *v) {
            if (!x.is_number()) throw ConfigError("'" + name(key) + "' must be an array of numbers");
            out.push_back(x.get<double>());
        }
    }
    echo_[key] = out;
    return out;
}

Params& Params::child(const std::string& key) {
    for (auto& [k, p] : children_)
        if (k == key) return *p;
    const json* v = find(key);
    children_.emplace_back(key, std::make_unique<Params>(v ? *v : json::object(), name(key)));
    return *children_.back().second;
}

void Params::finish() const {
    for (const auto& [k, v] : source_.items())
        if (!used_.count(k)) throw ConfigError("unknown key '" + name(k) + "'");
    for (const auto& [k, p] : children_) p->finish();
}

json Params::echo() const {
    json out = echo_;
    for (const auto& [k, p] : children_) out[k] = p->echo();
    return out;
}

zpf::PhysicalConstants RunConfig::constants() const {
    return units == "si" ? zpf::PhysicalConstants::si() : zpf::PhysicalConstants::natural();
}

RunConfig parse_config(const json& doc, const std::string& experiment) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    RunConfig c;
    c.experiment = experiment;
    for (const auto& [k, v] : doc.items()) {
        if (k == "experiment") {
            if (!v.is_string() || v.get<std::string>() != experiment)
                throw ConfigError("config 'experiment' = " + v.dump() + " does not match subcommand '" + experiment + "'");
        } else if (k == "seed") {
            if (!v.is_number_unsigned()) throw ConfigError("'seed' must be a non-negative integer");
            c.seed = v.get<std::uint64_t>();
        } else if (k == "output") {
            if (!v.is_string()) throw ConfigError("'output' must be a string");
            c.output = v.get<std::string>();
        } else if (k == "units") {
            if (v != "natural" && v != "si") throw ConfigError("'units' must be \"natural\" or \"si\"");
            c.units = v.get<std::string>();
        } else if (k == "parameters") {
            if (!v.is_object()) throw ConfigError("'parameters' must be an object");
            c.parameters = v;
        } else {
            throw ConfigError("unknown key '" + k + "'");
        }
    }
    return c;
}

json read_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error in '" + path.string() + "': " + e.what());
    }
}

OutputDir::OutputDir(fs::path root) : root_(std::move(root)) { fs::create_directories(root_); }

void OutputDir::add(const std::string& name) {
    for (const auto& f : files_)
        if (f == name) return;
    files_.push_back(name);
}

void OutputDir::write_text(const std::string& name, const std::string& text) {
    std::ofstream out(path(name), std::ios::binary);
    out << text;
    if (!out) throw std::ios_base::failure("cannot write " + path(name).string());
    add(name);
}

json OutputDir::manifest() const {
    json out = json::array();
    for (const auto& f : files_) {
        const auto p = path(f);
        out.push_back({{"file", f}, {"bytes", fs::file_size(p)}, {"sha256", sha256_file(p)}});
    }
    return out;
}

std::string format_number(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), res.ptr};
}

Csv::Csv(std::vector<std::string> header) : columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) text_ += (i ? "," : "") + header[i];
    text_ += '\n';
}

Csv& Csv::row(std::initializer_list<double> values) {
    if (values.size() != columns_) throw std::logic_error("csv row width mismatch");
    bool first = true;
    for (double v : values) {
        text_ += (first ? "" : ",") + format_number(v);
        first = false;
    }
    text_ += '\n';
    return *this;
}

Csv& Csv::row(const std::string& label, std::initializer_list<double> values) {
    if (values.size() + 1 != columns_) throw std::logic_error("csv row width mismatch");
    text_ += label;
    for (double v : values) text_ += "," + format_number(v);
    text_ += '\n';
    return *this;
}

std::string series(const std::vector<double>& x, const std::vector<double>& y) {
    std::string out;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) out += format_number(x[i]) + " " + format_number(y[i]) + "\n";
    return out;
}

std::string sha256_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned len = 0;
    EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    for (unsigned i = 0; i < len; ++i) {
        hex += kHex[md[i] >> 4];
        hex += kHex[md[i] & 15];
    }
    return hex;
}

}  // namespace zpflab
