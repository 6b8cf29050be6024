#include "hsmd/config.hpp"

#include <bit>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>

namespace hsmd {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
    throw InvalidArgument("invalid value '" + std::string(value) + "' for " + std::string(key));
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    const auto *end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end)
        bad_value(key, value);
    return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on")
        return true;
    if (value == "false" || value == "0" || value == "no" || value == "off")
        return false;
    bad_value(key, value);
}

std::uint8_t parse_intensity(std::string_view key, std::string_view value) {
    const int v = parse_number<int>(key, value);
    if (v < 0 || v > 255)
        bad_value(key, value);
    return static_cast<std::uint8_t>(v);
}

using Setter = std::function<void(RunConfig &, std::string_view, std::string_view)>;

const std::map<std::string, Setter, std::less<>> &setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
        {"snn.r_m", [](auto &c, auto k, auto v) { c.snn.r_m = parse_number<float>(k, v); }},
        {"snn.tau_m", [](auto &c, auto k, auto v) { c.snn.tau_m = parse_number<float>(k, v); }},
        {"snn.dt", [](auto &c, auto k, auto v) { c.snn.dt = parse_number<float>(k, v); }},
        {"snn.steps", [](auto &c, auto k, auto v) { c.snn.steps = parse_number<int>(k, v); }},
        {"snn.p2c", [](auto &c, auto k, auto v) { c.snn.p2c = parse_number<float>(k, v); }},
        {"snn.s2c", [](auto &c, auto k, auto v) { c.snn.s2c = parse_number<float>(k, v); }},
        {"snn.v_rest", [](auto &c, auto k, auto v) { c.snn.v_rest = parse_number<float>(k, v); }},
        {"snn.v_thresh", [](auto &c, auto k, auto v) { c.snn.v_thresh = parse_number<float>(k, v); }},
        {"snn.v_reset", [](auto &c, auto k, auto v) { c.snn.v_reset = parse_number<float>(k, v); }},
        {"snn.lanes", [](auto &c, auto k, auto v) { c.lanes = parse_number<int>(k, v); }},
        {"snn.kernel", [](auto &c, auto, auto v) { c.kernel = snn::parse_kernel(v); }},
        {"snn.persist_vm", [](auto &c, auto k, auto v) { c.snn.persist_vm = parse_bool(k, v); }},
        {"dbs.samples", [](auto &c, auto k, auto v) { c.dbs.samples_per_pixel = parse_number<int>(k, v); }},
        {"dbs.radius", [](auto &c, auto k, auto v) { c.dbs.match_radius = parse_number<int>(k, v); }},
        {"dbs.min_matches", [](auto &c, auto k, auto v) { c.dbs.min_matches = parse_number<int>(k, v); }},
        {"dbs.replace_rate", [](auto &c, auto k, auto v) { c.dbs.replace_rate = parse_number<double>(k, v); }},
        {"dbs.neighbor_rate", [](auto &c, auto k, auto v) { c.dbs.neighbor_rate = parse_number<double>(k, v); }},
        {"dbs.seed",
         [](auto &c, auto k, auto v) { c.seed = c.dbs.seed = parse_number<std::uint64_t>(k, v); }},
        {"post.spike_threshold",
         [](auto &c, auto k, auto v) { c.post.spike_threshold = parse_number<std::uint32_t>(k, v); }},
        {"post.filter_size", [](auto &c, auto k, auto v) { c.post.filter_size = parse_number<int>(k, v); }},
        {"post.refire_threshold",
         [](auto &c, auto k, auto v) { c.post.refire_threshold = parse_intensity(k, v); }},
    };
    return table;
}

}  // namespace

void RunConfig::validate() const {
    if (lanes < 1 || !std::has_single_bit(static_cast<unsigned>(lanes)))
        throw InvalidArgument("snn.lanes = " + std::to_string(lanes) + " rejected: must be a power of two");
    snn.validate();
    dbs.validate();
    post.validate();
    if (method.empty() || method.find(',') != std::string::npos)
        throw InvalidArgument("method name must be non-empty and contain no commas");
}

void apply_setting(RunConfig &cfg, std::string_view key, std::string_view value) {
    key = trim(key);
    value = trim(value);
    const auto &table = setters();
    const auto it = table.find(key);
    if (it == table.end())
        throw InvalidArgument("unknown config key '" + std::string(key) + "'");
    it->second(cfg, key, value);
}

void apply_assignment(RunConfig &cfg, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos)
        throw InvalidArgument("expected key=value, got '" + std::string(assignment) + "'");
    apply_setting(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

void load_config_file(RunConfig &cfg, const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw InvalidArgument("cannot open config file " + path.string());
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        const auto t = trim(line);
        if (t.empty() || t.front() == '#')
            continue;
        try {
            apply_assignment(cfg, t);
        } catch (const InvalidArgument &e) {
            throw InvalidArgument(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

}  // namespace hsmd
