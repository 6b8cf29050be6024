#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "hsmd/dbs.hpp"
#include "hsmd/postproc.hpp"
#include "hsmd/snn.hpp"

namespace hsmd {

struct RunConfig {
    snn::Kernel kernel = snn::Kernel::v1;
    int lanes = 16;
    snn::SnnParams snn;
    dbs::DbsConfig dbs;
    postproc::PostprocConfig post;
    std::filesystem::path out_dir = "results";
    bool bench = false;
    std::uint64_t seed = 0;
    /// Name written into metric reports; independent of the kernel choice.
    std::string method = "HSMD";

    /// Checks every component invariant, including the power-of-two lane rule.
    void validate() const;
};

/// Applies one `key=value` setting (e.g. "snn.steps", "dbs.radius").
/// Throws InvalidArgument for unknown keys or unparsable values.
void apply_setting(RunConfig &cfg, std::string_view key, std::string_view value);

/// Splits "key=value" and applies it.
void apply_assignment(RunConfig &cfg, std::string_view assignment);

/// Reads a config file of `key=value` lines; blank lines and lines starting
/// with '#' are ignored.
void load_config_file(RunConfig &cfg, const std::filesystem::path &path);

}  // namespace hsmd
