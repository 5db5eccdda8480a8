#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "pertfool/network.hpp"

namespace pertfool {

/// Model document:
///   {"format":"pertfool-model","version":1,
///    "layers":[{"rows":R,"cols":C,"act":"tanh","w":[...],"b":[...]}, ...]}
/// Numbers are written with 17 significant digits so a reload is exact.
/// A non-empty `config_json` (a JSON object) is stored under "config" and
/// ignored by the loader.
std::string save_model(const Network& net, const std::string& config_json = {});

/// Throws ParseError naming the offending field or byte position.
Network load_model(std::string_view document);

void save_model_file(const std::filesystem::path& path, const Network& net,
                     const std::string& config_json = {});
Network load_model_file(const std::filesystem::path& path);

/// "%.17g" rendering shared by every text artifact.
std::string format_double(double x);

}  // namespace pertfool
